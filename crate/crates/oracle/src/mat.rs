//! Square matrices over a small finite field, packed into a u64.
//!
//! Each entry takes four bits (field order at most 16) and the dimension
//! is at most four, so a whole matrix fits in one word and serves directly
//! as a hash key during group enumeration.

use crate::fq::Fq;

/// The space of dim x dim matrices over a fixed field.
#[derive(Clone)]
pub struct MatSpace {
    pub fq: Fq,
    pub dim: usize,
}

impl MatSpace {
    pub fn new(fq: Fq, dim: usize) -> MatSpace {
        assert!(dim >= 2 && dim <= 4, "dimension out of packing range");
        assert!(fq.q() <= 16, "field too large for 4-bit packing");
        MatSpace { fq, dim }
    }

    #[must_use]
    pub fn get(&self, m: u64, i: usize, j: usize) -> u16 {
        ((m >> (4 * (i * self.dim + j))) & 0xF) as u16
    }

    #[must_use]
    pub fn set(&self, m: u64, i: usize, j: usize, v: u16) -> u64 {
        let shift = 4 * (i * self.dim + j);
        (m & !(0xFu64 << shift)) | (u64::from(v) << shift)
    }

    #[must_use]
    pub fn identity(&self) -> u64 {
        let mut m = 0;
        for i in 0..self.dim {
            m = self.set(m, i, i, 1);
        }
        m
    }

    #[must_use]
    pub fn from_rows(&self, rows: &[&[u16]]) -> u64 {
        let mut m = 0;
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m = self.set(m, i, j, v);
            }
        }
        m
    }

    #[must_use]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let d = self.dim;
        let mut out = 0u64;
        for i in 0..d {
            for j in 0..d {
                let mut s = 0u16;
                for k in 0..d {
                    s = self.fq.add(s, self.fq.mul(self.get(a, i, k), self.get(b, k, j)));
                }
                out = self.set(out, i, j, s);
            }
        }
        out
    }

    /// Determinant by cofactor expansion (dimension at most 4).
    #[must_use]
    pub fn det(&self, m: u64) -> u16 {
        let d = self.dim;
        let idx: Vec<usize> = (0..d).collect();
        self.det_rec(m, 0, &idx)
    }

    fn det_rec(&self, m: u64, row: usize, cols: &[usize]) -> u16 {
        if cols.len() == 1 {
            return self.get(m, row, cols[0]);
        }
        let mut acc = 0u16;
        for (t, &c) in cols.iter().enumerate() {
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = self.fq.mul(self.get(m, row, c), self.det_rec(m, row + 1, &rest));
            acc = if t % 2 == 0 {
                self.fq.add(acc, minor)
            } else {
                self.fq.sub(acc, minor)
            };
        }
        acc
    }

    /// Conjugate transpose with respect to x -> x^(p^k); k = 0 gives the
    /// plain transpose.
    #[must_use]
    pub fn conj_transpose(&self, m: u64, k: u32) -> u64 {
        let mut out = 0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out = self.set(out, i, j, self.fq.frob_k(self.get(m, j, i), k));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_and_identity() {
        let s = MatSpace::new(Fq::new(7).unwrap(), 2);
        let a = s.from_rows(&[&[1, 2], &[3, 4]]);
        let id = s.identity();
        assert_eq!(s.mul(a, id), a);
        assert_eq!(s.mul(id, a), a);
        let b = s.from_rows(&[&[0, 1], &[6, 0]]);
        // [[1,2],[3,4]] * [[0,1],[-1,0]] = [[-2,1],[-4,3]] mod 7.
        assert_eq!(s.mul(a, b), s.from_rows(&[&[5, 1], &[3, 3]]));
    }

    #[test]
    fn determinant_is_multiplicative() {
        let s = MatSpace::new(Fq::new(5).unwrap(), 3);
        let a = s.from_rows(&[&[1, 2, 0], &[0, 1, 3], &[4, 0, 1]]);
        let b = s.from_rows(&[&[2, 0, 1], &[1, 1, 0], &[0, 3, 1]]);
        assert_eq!(
            s.det(s.mul(a, b)),
            s.fq.mul(s.det(a), s.det(b))
        );
        assert_eq!(s.det(s.identity()), 1);
    }

    #[test]
    fn four_by_four_determinant() {
        let s = MatSpace::new(Fq::new(8).unwrap(), 4);
        let id = s.identity();
        assert_eq!(s.det(id), 1);
        // The antidiagonal permutation matrix has determinant 1 in
        // characteristic 2.
        let w = s.from_rows(&[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, 1, 0, 0], &[1, 0, 0, 0]]);
        assert_eq!(s.det(w), 1);
        assert_eq!(s.mul(w, w), id);
    }

    #[test]
    fn transpose_reverses_products() {
        let s = MatSpace::new(Fq::new(9).unwrap(), 3);
        let a = s.from_rows(&[&[1, 2, 3], &[0, 1, 4], &[5, 0, 1]]);
        let b = s.from_rows(&[&[2, 1, 0], &[0, 2, 1], &[1, 0, 2]]);
        assert_eq!(
            s.conj_transpose(s.mul(a, b), 1),
            s.mul(s.conj_transpose(b, 1), s.conj_transpose(a, 1))
        );
    }
}
