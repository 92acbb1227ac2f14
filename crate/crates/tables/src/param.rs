//! Parameter spaces: tuples of residues modulo q-dependent factors, with
//! excluded degenerate loci and identifications under affine symmetries.
//!
//! A space realizes, at a concrete prime power, the index set of one
//! character or class set: all tuples within the factor box, minus every
//! tuple satisfying an exception (a divisibility of a linear form), grouped
//! into orbits under the symmetry maps. The lexicographically least member
//! of each orbit is its canonical representative.

use crate::error::TableError;
use crate::expr::{EvalCtx, Expr};
use std::collections::{HashMap, VecDeque};

/// Symbolic description of an index set.
#[derive(Debug, Clone, Default)]
pub struct ParamSpace {
    /// Moduli, one per coordinate; the box is the product of Z_{f_i}.
    pub factors: Vec<Expr>,
    /// Pairs (divisor, form): a tuple is excluded when divisor | form.
    pub exceptions: Vec<(Expr, Expr)>,
    /// Symmetry generators; each lists one image form per coordinate.
    pub symmetries: Vec<Vec<Expr>>,
}

/// The index set realized at a concrete prime power.
#[derive(Debug, Clone)]
pub struct RealizedParams {
    /// Evaluated moduli.
    pub moduli: Vec<u64>,
    /// Canonical orbit representatives in lexicographic order.
    pub reps: Vec<Vec<i64>>,
    /// Orbit size per representative (parallel to `reps`).
    pub orbit_sizes: Vec<u64>,
}

/// Hard cap on the number of tuples a single space may expand to.
const TUPLE_CAP: u64 = 4_000_000;

impl ParamSpace {
    /// True when the space has no coordinates (a singleton index set).
    #[must_use]
    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Enumerate representatives at the prime power described by `ctx`.
    pub fn realize(&self, ctx: &mut EvalCtx) -> Result<RealizedParams, TableError> {
        let mut moduli = Vec::with_capacity(self.factors.len());
        ctx.bind(&[], &[]);
        for f in &self.factors {
            let m = f.eval_int(ctx)?;
            if m <= 0 {
                return Err(TableError::Eval(format!(
                    "factor `{f}` evaluates to the non-positive modulus {m}"
                )));
            }
            moduli.push(m as u64);
        }
        let total: u64 = moduli.iter().try_fold(1u64, |acc, &m| {
            acc.checked_mul(m).filter(|&t| t <= TUPLE_CAP)
        })
        .ok_or_else(|| {
            TableError::Eval("parameter space exceeds the tuple cap".to_string())
        })?;
        if moduli.is_empty() {
            return Ok(RealizedParams {
                moduli,
                reps: vec![Vec::new()],
                orbit_sizes: vec![1],
            });
        }

        // Index tuples lexicographically.
        let n = moduli.len();
        let mut strides = vec![1u64; n];
        for i in (0..n - 1).rev() {
            strides[i] = strides[i + 1] * moduli[i + 1];
        }
        let decode = |mut idx: u64| -> Vec<i64> {
            let mut t = Vec::with_capacity(n);
            for i in 0..n {
                t.push((idx / strides[i]) as i64);
                idx %= strides[i];
            }
            t
        };

        let mut excluded = vec![false; total as usize];
        for idx in 0..total {
            let tuple = decode(idx);
            ctx.bind(&tuple, &tuple);
            for (div, form) in &self.exceptions {
                let d = div.eval_int(ctx)?;
                if d == 0 {
                    return Err(TableError::Eval(format!(
                        "exception divisor `{div}` evaluates to zero"
                    )));
                }
                let v = form.eval_int(ctx)?;
                if v.rem_euclid(d.abs()) == 0 {
                    excluded[idx as usize] = true;
                    break;
                }
            }
        }

        // Precompute symmetry images as index maps.
        let mut maps: Vec<Vec<u64>> = Vec::new();
        for gen in &self.symmetries {
            if gen.len() != n {
                return Err(TableError::Document(format!(
                    "symmetry arity {} does not match {} factors",
                    gen.len(),
                    n
                )));
            }
            let mut map = Vec::with_capacity(total as usize);
            for idx in 0..total {
                let tuple = decode(idx);
                ctx.bind(&tuple, &tuple);
                let mut img = 0u64;
                for (i, form) in gen.iter().enumerate() {
                    let v = form.eval_int(ctx)?;
                    let r = v.rem_euclid(moduli[i] as i128) as u64;
                    img += r * strides[i];
                }
                map.push(img);
            }
            maps.push(map);
        }

        let mut seen = vec![false; total as usize];
        let mut reps = Vec::new();
        let mut orbit_sizes = Vec::new();
        for start in 0..total {
            if seen[start as usize] || excluded[start as usize] {
                continue;
            }
            let mut orbit = vec![start];
            let mut queue = VecDeque::from([start]);
            seen[start as usize] = true;
            while let Some(cur) = queue.pop_front() {
                for map in &maps {
                    let img = map[cur as usize];
                    if excluded[img as usize] {
                        return Err(TableError::Document(format!(
                            "symmetry maps the admissible tuple {:?} onto an excluded one",
                            decode(cur)
                        )));
                    }
                    if !seen[img as usize] {
                        seen[img as usize] = true;
                        orbit.push(img);
                        queue.push_back(img);
                    }
                }
            }
            orbit_sizes.push(orbit.len() as u64);
            reps.push(decode(start));
        }
        Ok(RealizedParams {
            moduli,
            reps,
            orbit_sizes,
        })
    }

    /// Map an arbitrary tuple to its canonical representative, reducing each
    /// coordinate modulo its factor first. Returns None for excluded tuples.
    pub fn canonicalize(
        &self,
        ctx: &mut EvalCtx,
        tuple: &[i64],
    ) -> Result<Option<Vec<i64>>, TableError> {
        let realized = self.realize(ctx)?;
        if tuple.len() != realized.moduli.len() {
            return Err(TableError::Document(format!(
                "tuple arity {} does not match {} factors",
                tuple.len(),
                realized.moduli.len()
            )));
        }
        let reduced: Vec<i64> = tuple
            .iter()
            .zip(&realized.moduli)
            .map(|(&v, &m)| v.rem_euclid(m as i64))
            .collect();
        let mut index: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
        for rep in &realized.reps {
            let mut frontier = vec![rep.clone()];
            index.insert(rep.clone(), rep.clone());
            while let Some(cur) = frontier.pop() {
                for gen in &self.symmetries {
                    ctx.bind(&cur, &cur);
                    let mut img = Vec::with_capacity(cur.len());
                    for (i, form) in gen.iter().enumerate() {
                        let v = form.eval_int(ctx)?;
                        img.push(v.rem_euclid(realized.moduli[i] as i128) as i64);
                    }
                    if !index.contains_key(&img) {
                        index.insert(img.clone(), rep.clone());
                        frontier.push(img);
                    }
                }
            }
        }
        Ok(index.get(&reduced).cloned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(factors: &[&str], exceptions: &[(&str, &str)], syms: &[&[&str]]) -> ParamSpace {
        ParamSpace {
            factors: factors.iter().map(|s| Expr::parse(s).unwrap()).collect(),
            exceptions: exceptions
                .iter()
                .map(|(d, f)| (Expr::parse(d).unwrap(), Expr::parse(f).unwrap()))
                .collect(),
            symmetries: syms
                .iter()
                .map(|gen| gen.iter().map(|s| Expr::parse(s).unwrap()).collect())
                .collect(),
        }
    }

    #[test]
    fn trivial_space_is_a_singleton() {
        let s = space(&[], &[], &[]);
        let mut ctx = EvalCtx::plain(7).unwrap();
        let r = s.realize(&mut ctx).unwrap();
        assert_eq!(r.reps, vec![Vec::<i64>::new()]);
    }

    #[test]
    fn negation_orbits_modulo_q_minus_one() {
        // Nontrivial characters of Z_{q-1} up to inversion, q = 9: k in Z_8,
        // k != 0, k ~ -k gives representatives 1, 2, 3, 4.
        let s = space(&["q-1"], &[("q-1", "k1")], &[&["-k1"]]);
        let mut ctx = EvalCtx::plain(9).unwrap();
        let r = s.realize(&mut ctx).unwrap();
        assert_eq!(r.reps, vec![vec![1], vec![2], vec![3], vec![4]]);
        assert_eq!(r.orbit_sizes, vec![2, 2, 2, 1]);
    }

    #[test]
    fn frobenius_orbits_respect_mixed_exceptions() {
        // Z_{q^2-1} minus multiples of q+1, identified under multiplication
        // by q: the nondecomposable torus characters, q = 3.
        let s = space(&["q^2-1"], &[("q+1", "k1")], &[&["q*k1"]]);
        let mut ctx = EvalCtx::plain(3).unwrap();
        let r = s.realize(&mut ctx).unwrap();
        // Z_8 minus {0, 4}: {1,2,3,5,6,7}; orbits under *3: {1,3}, {2,6}, {5,7}.
        assert_eq!(r.reps, vec![vec![1], vec![2], vec![5]]);
    }

    #[test]
    fn two_parameter_swap_and_shear() {
        // Unordered distinct pairs in Z_{q-1}, q = 5.
        let s = space(
            &["q-1", "q-1"],
            &[("q-1", "k1-k2")],
            &[&["k2", "k1"]],
        );
        let mut ctx = EvalCtx::plain(5).unwrap();
        let r = s.realize(&mut ctx).unwrap();
        assert_eq!(r.reps.len(), 4 * 3 / 2);
        for rep in &r.reps {
            assert!(rep[0] < rep[1]);
        }
    }

    #[test]
    fn canonicalize_reduces_and_rejects() {
        let s = space(&["q-1"], &[("q-1", "k1")], &[&["-k1"]]);
        let mut ctx = EvalCtx::plain(9).unwrap();
        assert_eq!(s.canonicalize(&mut ctx, &[7]).unwrap(), Some(vec![1]));
        assert_eq!(s.canonicalize(&mut ctx, &[13]).unwrap(), Some(vec![3]));
        assert_eq!(s.canonicalize(&mut ctx, &[8]).unwrap(), None);
    }

    #[test]
    fn symmetry_consistency_is_enforced() {
        // A symmetry that maps an admissible tuple onto an excluded one is a
        // document bug and must be reported.
        let s = space(&["q-1"], &[("q-1", "k1-1")], &[&["k1+1"]]);
        let mut ctx = EvalCtx::plain(5).unwrap();
        assert!(s.realize(&mut ctx).is_err());
    }
}
