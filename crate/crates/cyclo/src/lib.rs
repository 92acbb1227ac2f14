//! Exact arithmetic foundations: cyclotomic numbers with rational
//! coefficients, quadratic Gauss sums, and polynomials in a group-order
//! parameter q whose coefficients live in Q or in Q(sqrt(d)) for d in {2, 3}.
//!
//! Everything here is exact. No floating point is used anywhere, and all
//! types have canonical forms so that structural equality is mathematical
//! equality.

mod cyclotomic;
mod gauss;
mod qpoly;

pub use cyclotomic::{zeta, Cyclotomic};
pub use gauss::{gauss_sum, irreducible_modulus, prime_power};
pub use qpoly::{QPoly, Quad};

/// Arbitrary-precision rational scalar.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision integer scalar.
pub type Int = num_bigint::BigInt;

/// Build a rational from an integer.
#[must_use]
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(Int::from(n))
}

/// Build the rational n/d. Panics if d is zero.
#[must_use]
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}

/// Errors raised by the exact-arithmetic layer.
#[derive(Debug, thiserror::Error)]
pub enum CycloError {
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("galois exponent {k} is not coprime to the conductor {n}")]
    NotCoprime { k: u64, n: u64 },
    #[error("conductor {this} does not divide {target}")]
    NotASubfield { this: u64, target: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("gauss sums require odd characteristic, got q = {0}")]
    EvenCharacteristic(u64),
    #[error("evaluation is irrational: {0}")]
    IrrationalValue(String),
    #[error("polynomial bases differ: {0} vs {1}")]
    BaseMismatch(u8, u8),
    #[error("{0}")]
    Parse(String),
}

/// Real part (z + conj z) / 2, exact.
#[must_use]
pub fn real_part(z: &Cyclotomic) -> Cyclotomic {
    z.real_part()
}

/// Check the factorization of the cubic 8C^3 + 4C^2 - 4C - 1 through the
/// cosines of the seventh roots of unity, together with its value 7/8 at
/// C = 1. Returns true when every coefficient comparison holds exactly.
#[must_use]
pub fn check_q7_identity() -> bool {
    let c: Vec<Cyclotomic> = (1..=3)
        .map(|t| zeta(7, t).expect("conductor 7 is valid").real_part())
        .collect();
    let e1 = &(&c[0] + &c[1]) + &c[2];
    let e2 = &(&(&c[0] * &c[1]) + &(&c[0] * &c[2])) + &(&c[1] * &c[2]);
    let e3 = &(&c[0] * &c[1]) * &c[2];
    // X^3 - e1 X^2 + e2 X - e3 must equal X^3 + (1/2)X^2 - (1/2)X - 1/8.
    let coeffs_ok = e1 == Cyclotomic::from_rational(ratio(-1, 2))
        && e2 == Cyclotomic::from_rational(ratio(-1, 2))
        && e3 == Cyclotomic::from_rational(ratio(1, 8));
    let one = Cyclotomic::one();
    let at_one = &(&(&one - &c[0]) * &(&one - &c[1])) * &(&one - &c[2]);
    coeffs_ok && at_one == Cyclotomic::from_rational(ratio(7, 8))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q7_identity_holds() {
        assert!(check_q7_identity());
    }

    #[test]
    fn rational_helpers() {
        assert_eq!(ratio(2, 4), ratio(1, 2));
        assert_eq!(rat(3) + rat(4), rat(7));
    }
}
