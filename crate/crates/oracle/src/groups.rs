//! Constructors for the concrete groups used as ground truth: special and
//! general linear groups in ranks 2 and 3, unitary groups in rank 3, and
//! the smallest Suzuki group. Every constructor verifies the expected group
//! order, so a wrong generator set fails loudly.

use crate::fq::Fq;
use crate::group::{enumerate, Enumerated, Monoid};
use crate::mat::MatSpace;
use crate::OracleError;

/// Packed matrices over a small field as a multiplication context.
pub struct MatGroup {
    pub space: MatSpace,
}

impl Monoid for MatGroup {
    type E = u64;
    fn one(&self) -> u64 {
        self.space.identity()
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.space.mul(*a, *b)
    }
}

const CAP: usize = 1_000_000;

fn build(
    space: MatSpace,
    gens: Vec<u64>,
    expected: u64,
) -> Result<(MatGroup, Enumerated<u64>), OracleError> {
    let m = MatGroup { space };
    let g = enumerate(&m, &gens, CAP)?;
    if g.order() != expected {
        return Err(OracleError::WrongOrder {
            got: g.order(),
            expected,
        });
    }
    Ok((m, g))
}

/// SL(2, q): determinant-one 2x2 matrices.
pub fn sl2(q: u64) -> Result<(MatGroup, Enumerated<u64>), OracleError> {
    let fq = Fq::new(q)?;
    let g = fq.generator();
    let gi = fq.inv(g);
    let s = MatSpace::new(fq, 2);
    let gens = vec![
        s.from_rows(&[&[1, 1], &[0, 1]]),
        s.from_rows(&[&[1, 0], &[1, 1]]),
        s.from_rows(&[&[0, 1], &[s.fq.neg(1), 0]]),
        s.from_rows(&[&[g, 0], &[0, gi]]),
    ];
    build(s, gens, q * (q * q - 1))
}

/// GL(2, q): all invertible 2x2 matrices.
pub fn gl2(q: u64) -> Result<(MatGroup, Enumerated<u64>), OracleError> {
    let fq = Fq::new(q)?;
    let g = fq.generator();
    let gi = fq.inv(g);
    let s = MatSpace::new(fq, 2);
    let gens = vec![
        s.from_rows(&[&[1, 1], &[0, 1]]),
        s.from_rows(&[&[1, 0], &[1, 1]]),
        s.from_rows(&[&[g, 0], &[0, gi]]),
        s.from_rows(&[&[g, 0], &[0, 1]]),
    ];
    build(s, gens, (q * q - 1) * (q * q - q))
}

/// SL(3, q): determinant-one 3x3 matrices.
pub fn sl3(q: u64) -> Result<(MatGroup, Enumerated<u64>), OracleError> {
    let fq = Fq::new(q)?;
    let g = fq.generator();
    let gi = fq.inv(g);
    let s = MatSpace::new(fq, 3);
    let mut gens = Vec::new();
    for (i, j) in [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)] {
        let mut m = s.identity();
        m = s.set(m, i, j, 1);
        gens.push(m);
    }
    gens.push(s.from_rows(&[&[g, 0, 0], &[0, gi, 0], &[0, 0, 1]]));
    gens.push(s.from_rows(&[&[1, 0, 0], &[0, g, 0], &[0, 0, gi]]));
    let q2 = q * q;
    let q3 = q2 * q;
    build(s, gens, q3 * (q2 - 1) * (q3 - 1))
}

/// GL(3, q): all invertible 3x3 matrices.
pub fn gl3(q: u64) -> Result<(MatGroup, Enumerated<u64>), OracleError> {
    let fq = Fq::new(q)?;
    let g = fq.generator();
    let s = MatSpace::new(fq, 3);
    let mut gens = Vec::new();
    for (i, j) in [(0, 1), (1, 0), (1, 2), (2, 1)] {
        let mut m = s.identity();
        m = s.set(m, i, j, 1);
        gens.push(m);
    }
    gens.push(s.from_rows(&[&[g, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
    let q2 = q * q;
    let q3 = q2 * q;
    build(s, gens, q3 * (q - 1) * (q2 - 1) * (q3 - 1))
}

/// All matrices preserving the hermitian form x1 conj(y3) + x2 conj(y2) +
/// x3 conj(y1) on F_{q^2}^3, found by row-by-row filtering.
fn unitary_elements(s: &MatSpace, f: u32, det_one: bool) -> Vec<u64> {
    let fq = &s.fq;
    let qq = fq.q() as u16;
    let conj = |x: u16| fq.frob_k(x, f);
    let h = |x: &[u16; 3], y: &[u16; 3]| {
        let mut acc = fq.mul(x[0], conj(y[2]));
        acc = fq.add(acc, fq.mul(x[1], conj(y[1])));
        fq.add(acc, fq.mul(x[2], conj(y[0])))
    };
    let triples: Vec<[u16; 3]> = (0..qq)
        .flat_map(|a| (0..qq).flat_map(move |b| (0..qq).map(move |c| [a, b, c])))
        .collect();
    let mut out = Vec::new();
    for &r1 in &triples {
        if r1 == [0, 0, 0] || h(&r1, &r1) != 0 {
            continue;
        }
        for &r2 in &triples {
            if h(&r1, &r2) != 0 || h(&r2, &r2) != 1 {
                continue;
            }
            for &r3 in &triples {
                if h(&r1, &r3) != 1 || h(&r2, &r3) != 0 || h(&r3, &r3) != 0 {
                    continue;
                }
                let m = s.from_rows(&[&r1, &r2, &r3]);
                if !det_one || s.det(m) == 1 {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// A small generating set for a listed group: greedily add the first
/// element outside the closure of the current set.
fn generators_for(m: &MatGroup, elems: &[u64]) -> Vec<u64> {
    let mut gens: Vec<u64> = Vec::new();
    let mut closed = std::collections::HashSet::new();
    closed.insert(m.one());
    for &e in elems {
        if closed.contains(&e) {
            continue;
        }
        gens.push(e);
        // Recompute the closure with the enlarged generating set.
        closed.clear();
        closed.insert(m.one());
        let mut frontier = vec![m.one()];
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = m.mul(&x, g);
                if closed.insert(y) {
                    frontier.push(y);
                }
            }
        }
        if closed.len() == elems.len() {
            break;
        }
    }
    gens
}

/// GU(3, q): the full unitary group over F_{q^2}.
pub fn gu3(q: u64) -> Result<(MatGroup, Enumerated<u64>), OracleError> {
    let (_, f) = cyclo::prime_power(q)
        .ok_or_else(|| OracleError::Internal(format!("{q} is not a prime power")))?;
    let fq = Fq::new(q * q)?;
    let s = MatSpace::new(fq, 3);
    let expected = q * q * q * (q + 1) * (q * q - 1) * (q * q * q + 1);
    let m = MatGroup { space: s };
    let elems = unitary_elements(&m.space, f, false);
    if elems.len() as u64 != expected {
        return Err(OracleError::WrongOrder {
            got: elems.len() as u64,
            expected,
        });
    }
    let gens = generators_for(&m, &elems);
    let g = enumerate(&m, &gens, CAP)?;
    if g.order() != expected {
        return Err(OracleError::WrongOrder {
            got: g.order(),
            expected,
        });
    }
    Ok((m, g))
}

/// SU(3, q): the determinant-one unitary group over F_{q^2}.
pub fn su3(q: u64) -> Result<(MatGroup, Enumerated<u64>), OracleError> {
    let (_, f) = cyclo::prime_power(q)
        .ok_or_else(|| OracleError::Internal(format!("{q} is not a prime power")))?;
    let fq = Fq::new(q * q)?;
    let s = MatSpace::new(fq, 3);
    let expected = q * q * q * (q * q - 1) * (q * q * q + 1);
    let m = MatGroup { space: s };
    let elems = unitary_elements(&m.space, f, true);
    if elems.len() as u64 != expected {
        return Err(OracleError::WrongOrder {
            got: elems.len() as u64,
            expected,
        });
    }
    let gens = generators_for(&m, &elems);
    let g = enumerate(&m, &gens, CAP)?;
    if g.order() != expected {
        return Err(OracleError::WrongOrder {
            got: g.order(),
            expected,
        });
    }
    Ok((m, g))
}

/// The Suzuki group over F_8, generated by the lower-triangular point
/// stabilizer together with the torus and the Weyl involution inside
/// Sp(4, 8).
pub fn sz8() -> Result<(MatGroup, Enumerated<u64>), OracleError> {
    let fq = Fq::new(8)?;
    let s = MatSpace::new(fq, 4);
    // theta is the square of Frobenius on F_8: x -> x^4, with
    // theta(theta(x)) = x^2.
    let th = |x: u16| s.fq.frob_k(x, 2);
    let unit = |a: u16, b: u16| {
        let f = &s.fq;
        let a_th = th(a);
        let r31 = f.add(f.mul(a, a_th), b);
        let r41 = f.add(f.add(f.mul(f.mul(a, a), a_th), f.mul(a, b)), th(b));
        s.from_rows(&[
            &[1, 0, 0, 0],
            &[a, 1, 0, 0],
            &[r31, a_th, 1, 0],
            &[r41, b, a, 1],
        ])
    };
    let g = s.fq.generator();
    let f = &s.fq;
    let torus = s.from_rows(&[
        &[f.pow(g, 3), 0, 0, 0],
        &[0, f.pow(g, 2), 0, 0],
        &[0, 0, f.pow(g, 5), 0],
        &[0, 0, 0, f.pow(g, 4)],
    ]);
    let w = s.from_rows(&[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, 1, 0, 0], &[1, 0, 0, 0]]);
    let gens = vec![unit(1, 0), unit(0, 1), torus, w];
    build(s, gens, 29120)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::derived_subgroup_order;

    #[test]
    fn linear_group_orders_and_classes() {
        let (_, g) = sl2(5).unwrap();
        assert_eq!(g.order(), 120);
        assert_eq!(g.classes.len(), 9);
        let (_, g) = gl2(3).unwrap();
        assert_eq!(g.order(), 48);
        assert_eq!(g.classes.len(), 8);
        let (_, g) = gl3(2).unwrap();
        assert_eq!(g.order(), 168);
        assert_eq!(g.classes.len(), 6);
        let (_, g) = sl3(2).unwrap();
        assert_eq!(g.order(), 168);
    }

    #[test]
    fn sl2_even_characteristic() {
        let (_, g) = sl2(4).unwrap();
        assert_eq!(g.order(), 60);
        assert_eq!(g.classes.len(), 5);
        let (_, g) = sl2(8).unwrap();
        assert_eq!(g.order(), 504);
        assert_eq!(g.classes.len(), 9);
    }

    #[test]
    fn unitary_groups() {
        let (m, g) = gu3(2).unwrap();
        assert_eq!(g.order(), 648);
        assert_eq!(g.classes.len(), 24);
        drop(m);
        let (m, g) = su3(2).unwrap();
        assert_eq!(g.order(), 216);
        // SU(3,2) is solvable, not perfect.
        let gens: Vec<u64> = g
            .classes
            .iter()
            .map(|c| g.elements[c.rep as usize])
            .collect();
        let d = derived_subgroup_order(&m, &g, &gens);
        assert!(d < 216, "SU(3,2) must have a proper derived subgroup");
    }

    #[test]
    fn suzuki_group() {
        let (_, g) = sz8().unwrap();
        assert_eq!(g.order(), 29120);
        assert_eq!(g.classes.len(), 11);
        assert_eq!(g.exponent, 1820);
        // Element orders in Sz(8) are 1, 2, 4, 5, 7, 13.
        let mut orders: Vec<u64> = g.classes.iter().map(|c| c.order).collect();
        orders.sort_unstable();
        orders.dedup();
        assert_eq!(orders, vec![1, 2, 4, 5, 7, 13]);
    }
}
