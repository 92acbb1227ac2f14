//! Finite reflection groups of rank at most four in their reflection
//! representation, with parabolic restriction multiplicities. For each
//! irreducible character the module computes, over every subset J of the
//! simple reflections, the multiplicity of the trivial and of the sign
//! character in the restriction to the standard parabolic subgroup W_J,
//! and reports which characters these tuples fail to separate.

use cyclo::{rat, Cyclotomic, Int, Rational};
use num_traits::{Signed, ToPrimitive};
use oracle::{dixon_table, enumerate, CharTable, Enumerated, Monoid};
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

/// Errors from reflection group construction.
#[derive(Debug, thiserror::Error)]
pub enum WeylError {
    #[error("unsupported reflection group type: {0}")]
    UnsupportedType(String),
    #[error("reflection group has order {got}, expected {expected}")]
    WrongOrder { got: u64, expected: u64 },
    #[error("simple reflection {0} does not have determinant -1")]
    BadReflection(usize),
    #[error("inner product is not a nonnegative integer")]
    NonIntegerMultiplicity,
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
}

/// Supported irreducible reflection group types.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WeylType {
    A2,
    A3,
    B2,
    B3,
    G2,
    I28,
    F4,
}

impl WeylType {
    /// All supported types, smallest rank first.
    pub const ALL: [WeylType; 7] = [
        WeylType::A2,
        WeylType::B2,
        WeylType::G2,
        WeylType::I28,
        WeylType::A3,
        WeylType::B3,
        WeylType::F4,
    ];

    /// Rank of the reflection representation.
    #[must_use]
    pub fn rank(self) -> usize {
        match self {
            WeylType::A2 | WeylType::B2 | WeylType::G2 | WeylType::I28 => 2,
            WeylType::A3 | WeylType::B3 => 3,
            WeylType::F4 => 4,
        }
    }

    /// Group order.
    #[must_use]
    pub fn order(self) -> u64 {
        match self {
            WeylType::A2 => 6,
            WeylType::B2 => 8,
            WeylType::G2 => 12,
            WeylType::I28 => 16,
            WeylType::A3 => 24,
            WeylType::B3 => 48,
            WeylType::F4 => 1152,
        }
    }
}

impl fmt::Display for WeylType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            WeylType::A2 => "A2",
            WeylType::A3 => "A3",
            WeylType::B2 => "B2",
            WeylType::B3 => "B3",
            WeylType::G2 => "G2",
            WeylType::I28 => "I2(8)",
            WeylType::F4 => "F4",
        };
        f.write_str(s)
    }
}

impl FromStr for WeylType {
    type Err = WeylError;
    fn from_str(s: &str) -> Result<Self, WeylError> {
        match s.to_ascii_uppercase().as_str() {
            "A2" => Ok(WeylType::A2),
            "A3" => Ok(WeylType::A3),
            "B2" => Ok(WeylType::B2),
            "B3" => Ok(WeylType::B3),
            "G2" => Ok(WeylType::G2),
            "I2(8)" | "I28" | "I2_8" => Ok(WeylType::I28),
            "F4" => Ok(WeylType::F4),
            _ => Err(WeylError::UnsupportedType(s.to_string())),
        }
    }
}

/// Square matrices over cyclotomic numbers as a multiplication context.
pub struct CycMatGroup {
    pub dim: usize,
}

impl CycMatGroup {
    fn mat_mul(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let d = self.dim;
        let mut out = vec![Cyclotomic::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let aik = &a[i * d + k];
                if aik.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let t = aik * &b[k * d + j];
                    out[i * d + j] = &out[i * d + j] + &t;
                }
            }
        }
        out
    }

    /// Determinant by cofactor expansion along the first row.
    fn det(&self, m: &[Cyclotomic], d: usize) -> Cyclotomic {
        if d == 1 {
            return m[0].clone();
        }
        let mut acc = Cyclotomic::zero();
        for j in 0..d {
            if m[j].is_zero() {
                continue;
            }
            let mut minor = Vec::with_capacity((d - 1) * (d - 1));
            for i in 1..d {
                for jj in 0..d {
                    if jj != j {
                        minor.push(m[i * d + jj].clone());
                    }
                }
            }
            let t = &m[j] * &self.det(&minor, d - 1);
            if j % 2 == 0 {
                acc = &acc + &t;
            } else {
                acc = &acc - &t;
            }
        }
        acc
    }
}

impl Monoid for CycMatGroup {
    type E = Vec<Cyclotomic>;
    fn one(&self) -> Vec<Cyclotomic> {
        let d = self.dim;
        let mut m = vec![Cyclotomic::zero(); d * d];
        for i in 0..d {
            m[i * d + i] = Cyclotomic::one();
        }
        m
    }
    fn mul(&self, a: &Vec<Cyclotomic>, b: &Vec<Cyclotomic>) -> Vec<Cyclotomic> {
        self.mat_mul(a, b)
    }
}

/// A reflection group with its enumerated elements, character table, and
/// sign character.
pub struct WeylGroup {
    pub label: WeylType,
    pub mats: CycMatGroup,
    pub elems: Enumerated<Vec<Cyclotomic>>,
    /// Indices of the simple reflections in the element list.
    pub simple: Vec<u32>,
    pub table: CharTable,
    /// Determinant of the reflection representation on each Dixon class.
    pub sign: Vec<i64>,
    /// For each Dixon class, the class index in the enumeration.
    class_map: Vec<usize>,
}

/// Cartan-style pairing rows: entry (i, j) is the coefficient of the
/// simple root alpha_i in s_i(alpha_j) subtracted from alpha_j.
fn cartan(t: WeylType) -> Vec<Vec<Cyclotomic>> {
    let c = |k: i64| Cyclotomic::from_int(k);
    match t {
        WeylType::A2 => vec![vec![c(2), c(-1)], vec![c(-1), c(2)]],
        WeylType::B2 => vec![vec![c(2), c(-1)], vec![c(-2), c(2)]],
        WeylType::G2 => vec![vec![c(2), c(-1)], vec![c(-3), c(2)]],
        WeylType::I28 => {
            // 2cos(pi/8) plays the role of the off-diagonal pairing.
            let z = cyclo::zeta(16, 1).unwrap();
            let zc = cyclo::zeta(16, 15).unwrap();
            let c8 = &z + &zc;
            vec![
                vec![c(2), -&c8],
                vec![-&c8, c(2)],
            ]
        }
        WeylType::A3 => vec![
            vec![c(2), c(-1), c(0)],
            vec![c(-1), c(2), c(-1)],
            vec![c(0), c(-1), c(2)],
        ],
        WeylType::B3 => vec![
            vec![c(2), c(-1), c(0)],
            vec![c(-1), c(2), c(-1)],
            vec![c(0), c(-2), c(2)],
        ],
        WeylType::F4 => vec![
            vec![c(2), c(-1), c(0), c(0)],
            vec![c(-1), c(2), c(-2), c(0)],
            vec![c(0), c(-1), c(2), c(-1)],
            vec![c(0), c(0), c(-1), c(2)],
        ],
    }
}

/// Build a reflection group from its type label, enumerate it, verify the
/// classical order, and compute its character table.
pub fn weyl_group(t: WeylType) -> Result<WeylGroup, WeylError> {
    let d = t.rank();
    let mats = CycMatGroup { dim: d };
    let car = cartan(t);
    let mut gens = Vec::new();
    for i in 0..d {
        // The reflection s_i sends alpha_j to alpha_j - C[i][j] alpha_i,
        // so in the root basis it is the identity with row i replaced by
        // e_i - C[i].
        let mut m = mats.one();
        for j in 0..d {
            m[i * d + j] = &m[i * d + j] - &car[i][j];
        }
        gens.push(m);
    }
    for (i, g) in gens.iter().enumerate() {
        let det = mats.det(g, d);
        if det.as_int().map(|k| k != Int::from(-1)).unwrap_or(true) {
            return Err(WeylError::BadReflection(i + 1));
        }
    }
    let elems = enumerate(&mats, &gens, 4096)?;
    if elems.order() != t.order() {
        return Err(WeylError::WrongOrder {
            got: elems.order(),
            expected: t.order(),
        });
    }
    let simple: Vec<u32> = gens.iter().map(|g| elems.index[g]).collect();
    let (table, class_map) = dixon_table_with_map(&mats, &elems)?;
    let mut sign = Vec::with_capacity(class_map.len());
    for &c in &class_map {
        let rep = &elems.elements[elems.classes[c].rep as usize];
        let det = mats.det(rep, d);
        let k = det
            .as_int()
            .ok_or(WeylError::NonIntegerMultiplicity)?;
        sign.push(if k == Int::from(1) { 1 } else { -1 });
    }
    Ok(WeylGroup {
        label: t,
        mats,
        elems,
        simple,
        table,
        sign,
        class_map,
    })
}

/// Dixon table together with the permutation sending a table column to
/// the class index in the enumeration.
fn dixon_table_with_map(
    m: &CycMatGroup,
    g: &Enumerated<Vec<Cyclotomic>>,
) -> Result<(CharTable, Vec<usize>), WeylError> {
    let t = dixon_table(m, g)?;
    // dixon_table preserves class order, so the map is the identity.
    let map = (0..t.class_sizes.len()).collect();
    Ok((t, map))
}

/// Restriction multiplicities of one character over all parabolic subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityVector {
    /// Row index into the character table.
    pub char_index: usize,
    pub degree: u64,
    /// Entry at position J (bitmask over simple reflections, ascending)
    /// is the multiplicity of the trivial character in the restriction.
    pub one_vector: Vec<u64>,
    /// Same, for the sign character of W_J.
    pub sign_vector: Vec<u64>,
}

impl WeylGroup {
    /// Element indices of the parabolic subgroup generated by the simple
    /// reflections in the bitmask.
    fn parabolic(&self, mask: usize) -> Vec<u32> {
        let gens: Vec<&Vec<Cyclotomic>> = self
            .simple
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &ix)| &self.elems.elements[ix as usize])
            .collect();
        let mut seen = HashSet::new();
        let one = self.mats.one();
        let start = self.elems.index[&one];
        seen.insert(start);
        let mut frontier = vec![start];
        while let Some(x) = frontier.pop() {
            let xe = &self.elems.elements[x as usize];
            for g in &gens {
                let y = self.mats.mul(xe, g);
                let yi = self.elems.index[&y];
                if seen.insert(yi) {
                    frontier.push(yi);
                }
            }
        }
        let mut v: Vec<u32> = seen.into_iter().collect();
        v.sort_unstable();
        v
    }

    /// Multiplicity of the trivial (and sign) character of the subgroup in
    /// the restriction of table row `row`.
    fn restriction_multiplicities(
        &self,
        row: usize,
        subgroup: &[u32],
    ) -> Result<(u64, u64), WeylError> {
        let mut acc_one = Cyclotomic::zero();
        let mut acc_sign = Cyclotomic::zero();
        for &ix in subgroup {
            let c = self.elems.class_of[ix as usize] as usize;
            let v = &self.table.chars[row][c];
            acc_one = &acc_one + v;
            if self.sign[c] == 1 {
                acc_sign = &acc_sign + v;
            } else {
                acc_sign = &acc_sign - v;
            }
        }
        let n = rat(subgroup.len() as i64);
        let to_mult = |acc: Cyclotomic| -> Result<u64, WeylError> {
            let r = acc.as_rational().ok_or(WeylError::NonIntegerMultiplicity)?;
            let q: Rational = r / n.clone();
            if !q.is_integer() || q.is_negative() {
                return Err(WeylError::NonIntegerMultiplicity);
            }
            q.to_integer()
                .to_u64()
                .ok_or(WeylError::NonIntegerMultiplicity)
        };
        Ok((to_mult(acc_one)?, to_mult(acc_sign)?))
    }

    /// Multiplicity vectors for every irreducible character, one entry per
    /// subset of the simple reflections in ascending bitmask order.
    pub fn multiplicity_vectors(&self) -> Result<Vec<MultiplicityVector>, WeylError> {
        let l = self.label.rank();
        let degrees = self.table.degrees();
        let subgroups: Vec<Vec<u32>> = (0..1usize << l).map(|m| self.parabolic(m)).collect();
        let mut out = Vec::new();
        for row in 0..self.table.chars.len() {
            let mut one_vector = Vec::with_capacity(subgroups.len());
            let mut sign_vector = Vec::with_capacity(subgroups.len());
            for sub in &subgroups {
                let (a, b) = self.restriction_multiplicities(row, sub)?;
                one_vector.push(a);
                sign_vector.push(b);
            }
            out.push(MultiplicityVector {
                char_index: row,
                degree: degrees[row],
                one_vector,
                sign_vector,
            });
        }
        Ok(out)
    }

    /// Row index of the character obtained by multiplying row `row` with
    /// the sign character.
    pub fn tensor_with_sign(&self, row: usize) -> Option<usize> {
        let vals: Vec<Cyclotomic> = self.table.chars[row]
            .iter()
            .enumerate()
            .map(|(c, v)| {
                if self.sign[c] == 1 {
                    v.clone()
                } else {
                    -v
                }
            })
            .collect();
        self.table.chars.iter().position(|r| *r == vals)
    }

    /// Dixon class index of the identity (degree column).
    #[must_use]
    pub fn identity_class(&self) -> usize {
        self.class_map
            .iter()
            .position(|&c| self.table.class_orders[c] == 1)
            .unwrap_or(0)
    }
}

/// Unordered pairs of character rows that share a one-vector, and pairs
/// that share a sign-vector.
#[derive(Clone, Debug, Default)]
pub struct UniquenessReport {
    pub one_collisions: Vec<(usize, usize)>,
    pub sign_collisions: Vec<(usize, usize)>,
    pub degrees: Vec<u64>,
}

impl UniquenessReport {
    /// True when no two characters share a vector of either kind.
    #[must_use]
    pub fn is_clean(&self) -> bool {
        self.one_collisions.is_empty() && self.sign_collisions.is_empty()
    }
}

/// Compare all multiplicity vectors pairwise.
pub fn uniqueness_check(w: &WeylGroup) -> Result<UniquenessReport, WeylError> {
    let vecs = w.multiplicity_vectors()?;
    let mut report = UniquenessReport {
        degrees: w.table.degrees(),
        ..Default::default()
    };
    for i in 0..vecs.len() {
        for j in i + 1..vecs.len() {
            if vecs[i].one_vector == vecs[j].one_vector {
                report.one_collisions.push((i, j));
            }
            if vecs[i].sign_vector == vecs[j].sign_vector {
                report.sign_collisions.push((i, j));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(t: WeylType) -> WeylGroup {
        weyl_group(t).unwrap()
    }

    #[test]
    fn orders_match_classical_values() {
        for t in WeylType::ALL {
            let w = build(t);
            assert_eq!(w.elems.order(), t.order(), "order of {t}");
            let sum: u64 = w.table.degrees().iter().map(|d| d * d).sum();
            assert_eq!(sum, t.order(), "degree sum of {t}");
        }
    }

    #[test]
    fn rank_two_collisions_are_degree_two() {
        let w = build(WeylType::G2);
        let r = uniqueness_check(&w).unwrap();
        assert_eq!(r.one_collisions.len(), 1);
        let (i, j) = r.one_collisions[0];
        assert_eq!((r.degrees[i], r.degrees[j]), (2, 2));

        let w = build(WeylType::I28);
        let r = uniqueness_check(&w).unwrap();
        // All three degree-2 characters share the vector (2, 1, 1, 0).
        assert_eq!(r.one_collisions.len(), 3);
        for &(i, j) in &r.one_collisions {
            assert_eq!((r.degrees[i], r.degrees[j]), (2, 2));
        }
    }

    #[test]
    fn separating_types_have_no_collisions() {
        for t in [
            WeylType::A2,
            WeylType::B2,
            WeylType::A3,
            WeylType::B3,
            WeylType::F4,
        ] {
            let w = build(t);
            let r = uniqueness_check(&w).unwrap();
            assert!(r.is_clean(), "unexpected collision in {t}");
        }
    }

    #[test]
    fn trivial_and_sign_vectors() {
        let w = build(WeylType::B3);
        let vecs = w.multiplicity_vectors().unwrap();
        let full = vecs[0].one_vector.len() - 1;
        // The trivial character restricts trivially everywhere.
        let triv = vecs
            .iter()
            .find(|v| v.degree == 1 && v.one_vector.iter().all(|&m| m == 1))
            .expect("trivial character");
        assert_eq!(triv.one_vector[full], 1);
        // The sign character has sign-vector all ones and hits the trivial
        // character only on the empty parabolic.
        let sgn = vecs
            .iter()
            .find(|v| v.degree == 1 && v.sign_vector.iter().all(|&m| m == 1))
            .expect("sign character");
        assert_eq!(sgn.one_vector[0], 1);
        assert_eq!(sgn.one_vector[full], 0);
    }

    #[test]
    fn standard_character_of_a2() {
        let w = build(WeylType::A2);
        let vecs = w.multiplicity_vectors().unwrap();
        let std = vecs.iter().find(|v| v.degree == 2).unwrap();
        // Restriction to either single reflection contains the trivial
        // character once; bitmask order is {}, {1}, {2}, {1,2}.
        assert_eq!(std.one_vector, vec![2, 1, 1, 0]);
    }

    #[test]
    fn duality_swaps_one_and_sign_vectors() {
        for t in WeylType::ALL {
            let w = build(t);
            let vecs = w.multiplicity_vectors().unwrap();
            for v in &vecs {
                let dual = w.tensor_with_sign(v.char_index).expect("dual character");
                assert_eq!(
                    v.sign_vector, vecs[dual].one_vector,
                    "duality failure in {t} at row {}",
                    v.char_index
                );
            }
        }
    }

    #[test]
    fn permutation_character_dimension_count() {
        for t in [WeylType::A2, WeylType::B2, WeylType::G2, WeylType::B3] {
            let w = build(t);
            let vecs = w.multiplicity_vectors().unwrap();
            let l = t.rank();
            for mask in 0..1usize << l {
                let sub = w.parabolic(mask);
                let total: u64 = vecs
                    .iter()
                    .map(|v| v.degree * v.one_vector[mask])
                    .sum();
                assert_eq!(total, t.order() / sub.len() as u64, "mask {mask} in {t}");
            }
        }
    }
}
