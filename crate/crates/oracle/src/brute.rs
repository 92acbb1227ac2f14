//! Exhaustive search for nonnegative integer combinations of irreducible
//! characters that hit a prescribed degree and vanish on a prescribed set
//! of conjugacy classes. This is the ground-truth counterpart of the
//! symbolic enumeration over generic tables.

use crate::dixon::CharTable;
use cyclo::Cyclotomic;

/// Which classes a candidate sum must vanish on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VanishKind {
    /// Nontrivial elements whose order is a power of p.
    PElements,
    /// Elements whose order is divisible by p.
    PSingular,
}

/// All multiplicity vectors m (indexed like the table rows) with
/// sum m_i chi_i(1) equal to the p-part of the group order and with the
/// combination exactly zero on every constraint class. Sorted
/// lexicographically.
pub fn brute_vanishing(table: &CharTable, p: u64, kind: VanishKind) -> Vec<Vec<u32>> {
    let constraint = match kind {
        VanishKind::PElements => table.p_element_classes(p),
        VanishKind::PSingular => table.p_singular_classes(p),
    };
    let mut target = 1u64;
    let mut n = table.group_order;
    while n % p == 0 {
        target *= p;
        n /= p;
    }
    let degrees = table.degrees();
    let r = degrees.len();
    let mut out = Vec::new();
    let mut mults = vec![0u32; r];
    let zero_sums: Vec<Cyclotomic> = constraint.iter().map(|_| Cyclotomic::zero()).collect();

    fn dfs(
        table: &CharTable,
        constraint: &[usize],
        degrees: &[u64],
        idx: usize,
        remaining: u64,
        mults: &mut Vec<u32>,
        sums: &[Cyclotomic],
        out: &mut Vec<Vec<u32>>,
    ) {
        if remaining == 0 {
            if sums.iter().all(|s| s.is_zero()) {
                out.push(mults.clone());
            }
            return;
        }
        if idx == degrees.len() {
            return;
        }
        let d = degrees[idx];
        let max_m = remaining / d;
        // m = 0 keeps the sums untouched.
        mults[idx] = 0;
        dfs(table, constraint, degrees, idx + 1, remaining, mults, sums, out);
        let mut cur = sums.to_vec();
        for m in 1..=max_m {
            for (s, &c) in cur.iter_mut().zip(constraint) {
                *s = &*s + &table.chars[idx][c];
            }
            mults[idx] = m as u32;
            dfs(
                table,
                constraint,
                degrees,
                idx + 1,
                remaining - m * d,
                mults,
                &cur,
                out,
            );
        }
        mults[idx] = 0;
    }

    dfs(
        table,
        &constraint,
        &degrees,
        0,
        target,
        &mut mults,
        &zero_sums,
        &mut out,
    );
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dixon::dixon_table;
    use crate::groups::{gl2, sl2};

    #[test]
    fn sl2_five_syl5_solutions() {
        let (m, g) = sl2(5).unwrap();
        let t = dixon_table(&m, &g).unwrap();
        // Degree 5 combinations vanishing on both classes of order 5.
        let sols = brute_vanishing(&t, 5, VanishKind::PElements);
        assert!(!sols.is_empty());
        for s in &sols {
            let deg: u64 = s
                .iter()
                .zip(t.degrees())
                .map(|(&m, d)| m as u64 * d)
                .sum();
            assert_eq!(deg, 5);
        }
        // p-singular solutions form a subset of the p-element ones.
        let strict = brute_vanishing(&t, 5, VanishKind::PSingular);
        for s in &strict {
            assert!(sols.contains(s));
        }
    }

    #[test]
    fn gl2_three_has_steinberg_solution() {
        let (m, g) = gl2(3).unwrap();
        let t = dixon_table(&m, &g).unwrap();
        let sols = brute_vanishing(&t, 3, VanishKind::PElements);
        // The Steinberg character alone is always a solution.
        let st = sols.iter().any(|s| {
            s.iter().sum::<u32>() == 1
                && s.iter()
                    .zip(t.degrees())
                    .any(|(&m, d)| m == 1 && d == 3)
        });
        assert!(st);
    }
}
