//! Small finite fields with fully tabulated arithmetic.
//!
//! Elements of F_{p^f} are encoded as integers below p^f whose base-p
//! digits are coordinates in the power basis of the canonical modulus from
//! `cyclo::irreducible_modulus`, so every crate that builds the same field
//! sees the same element labels.

use crate::OracleError;
use cyclo::irreducible_modulus;

/// A finite field of order at most a few hundred, with lookup tables for
/// all arithmetic.
#[derive(Clone)]
pub struct Fq {
    p: u64,
    f: u32,
    q: u64,
    add: Vec<u16>,
    mul: Vec<u16>,
    inv: Vec<u16>,
    neg: Vec<u16>,
    frob: Vec<u16>,
}

fn digits(mut m: u64, p: u64, len: u32) -> Vec<u64> {
    let mut d = Vec::with_capacity(len as usize);
    for _ in 0..len {
        d.push(m % p);
        m /= p;
    }
    d
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl Fq {
    /// Build F_q for a prime power q.
    pub fn new(q: u64) -> Result<Fq, OracleError> {
        let (p, f) = cyclo::prime_power(q)
            .ok_or_else(|| OracleError::Internal(format!("{q} is not a prime power")))?;
        let modulus = digits(irreducible_modulus(p, f)?, p, f + 1);
        let qs = q as usize;
        let mut add = vec![0u16; qs * qs];
        let mut mul = vec![0u16; qs * qs];
        let mut neg = vec![0u16; qs];
        for a in 0..q {
            let da = digits(a, p, f);
            neg[a as usize] = undigits(
                &da.iter().map(|&x| (p - x) % p).collect::<Vec<_>>(),
                p,
            ) as u16;
            for b in 0..q {
                let db = digits(b, p, f);
                let sum: Vec<u64> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&sum, p) as u16;
                // Polynomial product reduced by the monic modulus.
                let mut prod = vec![0u64; 2 * f as usize - 1];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for k in (f as usize..prod.len()).rev() {
                    let lead = prod[k];
                    if lead != 0 {
                        prod[k] = 0;
                        for (i, &c) in modulus.iter().enumerate().take(f as usize) {
                            let idx = k - f as usize + i;
                            prod[idx] = (prod[idx] + p * p - (lead * c) % p) % p;
                        }
                    }
                }
                mul[(a * q + b) as usize] = undigits(&prod[..f as usize], p) as u16;
            }
        }
        let mut inv = vec![0u16; qs];
        for a in 1..q {
            for b in 1..q {
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b as u16;
                    break;
                }
            }
        }
        let mut fq = Fq {
            p,
            f,
            q,
            add,
            mul,
            inv,
            neg,
            frob: Vec::new(),
        };
        fq.frob = (0..q).map(|a| fq.pow(a as u16, p) ).collect();
        Ok(fq)
    }

    #[must_use]
    pub fn q(&self) -> u64 {
        self.q
    }

    #[must_use]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Extension degree over the prime field.
    #[must_use]
    pub fn f(&self) -> u32 {
        self.f
    }

    #[must_use]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[must_use]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg[b as usize])
    }

    #[must_use]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    #[must_use]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    /// Multiplicative inverse; zero maps to zero.
    #[must_use]
    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    #[must_use]
    pub fn pow(&self, a: u16, mut k: u64) -> u16 {
        if self.q > 1 && a != 0 {
            k %= self.q - 1;
        }
        let mut acc = 1u16;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// The Frobenius x -> x^p.
    #[must_use]
    pub fn frob(&self, a: u16) -> u16 {
        self.frob[a as usize]
    }

    /// Frobenius iterated k times: x -> x^(p^k).
    #[must_use]
    pub fn frob_k(&self, a: u16, k: u32) -> u16 {
        (0..k).fold(a, |x, _| self.frob(x))
    }

    /// A fixed multiplicative generator: the least element of full order.
    #[must_use]
    pub fn generator(&self) -> u16 {
        'next: for g in 2..self.q {
            let mut x = g as u16;
            for _ in 1..self.q - 1 {
                if x == 1 {
                    continue 'next;
                }
                x = self.mul(x, g as u16);
            }
            if x == 1 {
                return g as u16;
            }
        }
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Fq::new(7).unwrap();
        assert_eq!(f.add(3, 5), 1);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3), 5);
        assert_eq!(f.neg(2), 5);
        assert_eq!(f.pow(3, 6), 1);
    }

    #[test]
    fn extension_field_axioms() {
        for q in [4u64, 8, 9, 25, 27] {
            let f = Fq::new(q).unwrap();
            for a in 0..q as u16 {
                for b in 0..q as u16 {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    if b != 0 {
                        assert_eq!(f.mul(f.mul(a, b), f.inv(b)), a);
                    }
                    for c in 0..q as u16 {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
        }
    }

    #[test]
    fn frobenius_is_field_automorphism() {
        let f = Fq::new(9).unwrap();
        for a in 0..9 {
            for b in 0..9 {
                assert_eq!(f.frob(f.mul(a, b)), f.mul(f.frob(a), f.frob(b)));
                assert_eq!(f.frob(f.add(a, b)), f.add(f.frob(a), f.frob(b)));
            }
            // x -> x^3 twice is the identity on F_9.
            assert_eq!(f.frob(f.frob(a)), a);
        }
    }

    #[test]
    fn generator_has_full_order() {
        for q in [5u64, 8, 9, 13] {
            let f = Fq::new(q).unwrap();
            let g = f.generator();
            let mut seen = vec![false; q as usize];
            let mut x = 1u16;
            for _ in 0..q - 1 {
                seen[x as usize] = true;
                x = f.mul(x, g);
            }
            assert!((1..q as usize).all(|i| seen[i]), "generator of F_{q}");
        }
    }
}
