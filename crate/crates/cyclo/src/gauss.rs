//! Quadratic Gauss sums over finite fields of odd prime-power order.
//!
//! The sum g(q) = sum over x in F_q of zeta_p^Tr(x^2) satisfies
//! g(q)^2 = (-1)^((q-1)/2) q, which pins down the Weil character values on
//! unipotent classes. The field F_{p^f} is realized as F_p[x] modulo the
//! lexicographically least monic irreducible polynomial of degree f; that
//! choice is exported so every consumer builds the same field.

use crate::{rat, zeta, CycloError, Cyclotomic};

/// Decompose n = p^a, if it is a prime power (a >= 1).
#[must_use]
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut a = 0;
            while m % p == 0 {
                m /= p;
                a += 1;
            }
            return (m == 1).then_some((p, a));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    Some((n, 1))
}

/// The lexicographically least monic irreducible polynomial of degree f
/// over F_p, encoded as the integer whose base-p digits are its
/// coefficients (constant term first). For f = 1 this is p, meaning the
/// polynomial x.
pub fn irreducible_modulus(p: u64, f: u32) -> Result<u64, CycloError> {
    if prime_power(p) != Some((p, 1)) {
        return Err(CycloError::NotPrimePower(p));
    }
    let lead = p.pow(f);
    (lead..2 * lead)
        .find(|&m| is_irreducible(&digits(m, p, f), p))
        .ok_or_else(|| CycloError::Parse(format!("no irreducible of degree {f} over F_{p}")))
}

/// Base-p digits of m, lowest first, padded to f + 1 entries.
fn digits(mut m: u64, p: u64, f: u32) -> Vec<u64> {
    let mut d = Vec::with_capacity(f as usize + 1);
    for _ in 0..=f {
        d.push(m % p);
        m /= p;
    }
    d
}

/// Irreducibility over F_p by trial division by all monic polynomials of
/// degree up to half the total; the degrees in play are tiny.
fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        // Candidate divisors: monic, degree d, coefficients as digits of t.
        for t in 0..p.pow(d as u32) {
            let mut div = digits(t, p, d as u32 - 1);
            div.push(1);
            if poly_rem_is_zero(poly, &div, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(poly: &[u64], div: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = poly.to_vec();
    let dd = div.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().expect("nonempty");
        let k = rem.len() - 1 - dd;
        if lead != 0 {
            for (i, &c) in div.iter().enumerate() {
                let idx = k + i;
                rem[idx] = (rem[idx] + p * p - (lead * c) % p) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

/// Arithmetic in F_{p^f} with elements encoded as integers < p^f whose
/// base-p digits are coordinates in the power basis of the canonical
/// modulus from `irreducible_modulus`.
struct Field {
    p: u64,
    f: u32,
    modulus: Vec<u64>,
}

impl Field {
    fn new(p: u64, f: u32) -> Result<Field, CycloError> {
        let m = irreducible_modulus(p, f)?;
        Ok(Field {
            p,
            f,
            modulus: digits(m, p, f),
        })
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        let f = self.f as usize;
        let da = digits(a, self.p, self.f - 1);
        let db = digits(b, self.p, self.f - 1);
        let mut prod = vec![0u64; 2 * f - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // Reduce by the monic modulus.
        for k in (f..prod.len()).rev() {
            let lead = prod[k];
            if lead != 0 {
                prod[k] = 0;
                for (i, &c) in self.modulus.iter().enumerate().take(f) {
                    let idx = k - f + i;
                    prod[idx] = (prod[idx] + self.p * self.p - (lead * c) % self.p) % self.p;
                }
            }
        }
        prod[..f]
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.p + c)
    }

    /// Field addition: digit-wise mod p.
    fn add(&self, a: u64, b: u64) -> u64 {
        let da = digits(a, self.p, self.f - 1);
        let db = digits(b, self.p, self.f - 1);
        (0..self.f as usize)
            .rev()
            .fold(0, |acc, i| acc * self.p + (da[i] + db[i]) % self.p)
    }

    /// Absolute trace to F_p: the sum of the Frobenius iterates
    /// a + a^p + ... + a^(p^(f-1)), which always lands in F_p.
    fn trace(&self, a: u64) -> u64 {
        let mut s = 0u64;
        let mut x = a;
        for _ in 0..self.f {
            s = self.add(s, x);
            x = self.pow(x, self.p);
        }
        debug_assert!(s < self.p, "trace must land in the prime field");
        s
    }

    fn pow(&self, mut a: u64, mut k: u64) -> u64 {
        let mut acc = 1u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            k >>= 1;
        }
        acc
    }
}

/// The quadratic Gauss sum over F_q for odd prime powers q, as an exact
/// element of Q(zeta_p).
pub fn gauss_sum(q: u64) -> Result<Cyclotomic, CycloError> {
    let (p, f) = prime_power(q).ok_or(CycloError::NotPrimePower(q))?;
    if p == 2 {
        return Err(CycloError::EvenCharacteristic(q));
    }
    let field = Field::new(p, f)?;
    let mut counts = vec![0i64; p as usize];
    for x in 0..q {
        let t = field.trace(field.mul(x, x));
        counts[t as usize] += 1;
    }
    let mut s = Cyclotomic::zero();
    for (r, &c) in counts.iter().enumerate() {
        if c != 0 {
            s = &s + &zeta(p, r as i64)?.scale(&rat(c));
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Cyclotomic;

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(25), Some((5, 2)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(32), Some((2, 5)));
    }

    #[test]
    fn canonical_moduli() {
        // Degree 1: the polynomial x itself.
        assert_eq!(irreducible_modulus(5, 1).unwrap(), 5);
        // Degree 2 over F_3: x^2 + 1 (digits 1, 0, 1 -> 1 + 0*3 + 1*9).
        assert_eq!(irreducible_modulus(3, 2).unwrap(), 10);
        // Degree 2 over F_2: x^2 + x + 1.
        assert_eq!(irreducible_modulus(2, 2).unwrap(), 7);
        // Degree 3 over F_2: x^3 + x + 1 (8 + 2 + 1).
        assert_eq!(irreducible_modulus(2, 3).unwrap(), 11);
        assert!(irreducible_modulus(6, 1).is_err());
    }

    #[test]
    fn field_trace_is_additive_and_onto() {
        let f = Field::new(3, 2).unwrap();
        // Trace of 1 in F_9 over F_3 is 2.
        assert_eq!(f.trace(1), 2);
        for a in 0..9 {
            for b in 0..9 {
                // Addition in coordinates.
                let sum_digits: u64 = {
                    let da = digits(a, 3, 1);
                    let db = digits(b, 3, 1);
                    (0..2).rev().fold(0, |acc, i| acc * 3 + (da[i] + db[i]) % 3)
                };
                assert_eq!(f.trace(sum_digits), (f.trace(a) + f.trace(b)) % 3);
            }
        }
        let mut seen = [false; 3];
        for a in 0..9 {
            seen[f.trace(a) as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn field_multiplication_group() {
        for (p, f, q) in [(3u64, 2u32, 9u64), (5, 2, 25), (3, 3, 27), (2, 3, 8)] {
            let fld = Field::new(p, f).unwrap();
            // Every nonzero element has multiplicative order dividing q - 1.
            for a in 1..q {
                assert_eq!(fld.pow(a, q - 1), 1, "order of {a} in F_{q}");
            }
            // Associativity spot check across the whole field.
            for a in 0..q {
                for b in 0..q {
                    let c = (a * 7 + b) % q;
                    assert_eq!(
                        fld.mul(fld.mul(a, b), c),
                        fld.mul(a, fld.mul(b, c))
                    );
                }
            }
        }
    }

    #[test]
    fn gauss_sum_squares() {
        for q in [3u64, 5, 7, 9, 11, 13, 25, 27] {
            let s = gauss_sum(q).unwrap();
            let sq = &s * &s;
            let sign = if (q - 1) / 2 % 2 == 0 { 1 } else { -1 };
            let expected = Cyclotomic::from_int(sign * q as i64);
            assert_eq!(sq, expected, "gauss({q})^2");
        }
    }

    #[test]
    fn gauss_sum_rejects_bad_inputs() {
        assert!(matches!(gauss_sum(8), Err(CycloError::EvenCharacteristic(8))));
        assert!(matches!(gauss_sum(12), Err(CycloError::NotPrimePower(12))));
    }
}
