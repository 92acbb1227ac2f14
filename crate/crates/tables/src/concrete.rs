//! Instantiation of a generic table at a concrete prime power, and exact
//! verification of the orthogonality relations over the integers.

use crate::error::TableError;
use crate::expr::EvalCtx;
use crate::schema::{GenericTable, PType};
use cyclo::{Cyclotomic, Int, Rational};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::HashMap;

/// One conjugacy class: a class-set id with a canonical parameter tuple.
#[derive(Debug, Clone)]
pub struct ClassCol {
    pub set: u32,
    pub params: Vec<i64>,
    pub size: Int,
    pub ptype: PType,
}

/// One irreducible character: a char-set id with a canonical parameter
/// tuple; `values` runs parallel to the class list.
#[derive(Debug, Clone)]
pub struct CharRow {
    pub set: u32,
    pub params: Vec<i64>,
    pub degree: Int,
    pub values: Vec<Cyclotomic>,
}

/// A generic table evaluated at a specific q: the exact character value
/// matrix together with class sizes and expanded parameters.
#[derive(Debug, Clone)]
pub struct ConcreteTable {
    pub family: String,
    pub label: String,
    pub q: u64,
    pub p: u64,
    pub order: Int,
    pub order_p: Int,
    pub classes: Vec<ClassCol>,
    pub chars: Vec<CharRow>,
    char_index: HashMap<(u32, Vec<i64>), usize>,
    class_index: HashMap<(u32, Vec<i64>), usize>,
}

/// Outcome of the five orthogonality and sum checks.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub row_orthogonality: bool,
    pub column_orthogonality: bool,
    pub degree_square_sum: bool,
    pub class_size_sum: bool,
    pub degrees_positive: bool,
    /// Human-readable descriptions of the first few failures.
    pub failures: Vec<String>,
}

impl ValidationReport {
    #[must_use]
    pub fn all_pass(&self) -> bool {
        self.row_orthogonality
            && self.column_orthogonality
            && self.degree_square_sum
            && self.class_size_sum
            && self.degrees_positive
    }
}

impl GenericTable {
    /// Expand all parameter sets at q and evaluate every character value.
    /// Representatives of symmetry orbits are the lexicographically least
    /// admissible tuples, in ascending order.
    pub fn instantiate(&self, q: u64) -> Result<ConcreteTable, TableError> {
        self.check_q(q)?;
        if !self.has_values() {
            return Err(TableError::Document(format!(
                "{} carries degree fixtures only, not character values",
                self.label()
            )));
        }
        let mut ctx = self.eval_ctx(q)?;
        let p = self.prime(q)?;
        let order = eval_order(&self.order, &ctx, "order")?;
        let order_p = eval_order(&self.order_p, &ctx, "order_p")?;

        let mut classes = Vec::new();
        let mut class_reps = Vec::new();
        for cs in &self.class_sets {
            let realized = cs
                .params
                .realize(&mut ctx)
                .map_err(|e| e.in_context(format!("class_set {}", cs.id)))?;
            ctx.bind(&[], &[]);
            let size = cs
                .size
                .eval_int(&ctx)
                .map_err(|e| e.in_context(format!("class_set {} size", cs.id)))?;
            if size <= 0 {
                return Err(TableError::Eval(format!(
                    "class_set {} has nonpositive size {size} at q = {q}",
                    cs.id
                )));
            }
            for rep in &realized.reps {
                classes.push(ClassCol {
                    set: cs.id,
                    params: rep.clone(),
                    size: Int::from(size),
                    ptype: cs.ptype,
                });
            }
            class_reps.push(realized);
        }

        let identity_col = classes
            .iter()
            .position(|c| c.ptype == PType::Identity)
            .ok_or_else(|| TableError::Document("no identity class".to_string()))?;

        let mut chars = Vec::new();
        for hs in &self.char_sets {
            let realized = hs
                .params
                .realize(&mut ctx)
                .map_err(|e| e.in_context(format!("char_set {}", hs.id)))?;
            ctx.bind(&[], &[]);
            let degree = hs
                .degree
                .eval_int(&ctx)
                .map_err(|e| e.in_context(format!("char_set {} degree", hs.id)))?;
            for rep in &realized.reps {
                let mut values = Vec::with_capacity(classes.len());
                for col in &classes {
                    let expr = hs.values.get(&col.set).expect("checked at load");
                    ctx.bind(rep, &col.params);
                    let v = expr.eval(&ctx).map_err(|e| {
                        e.in_context(format!(
                            "char_set {} {:?} on class_set {} {:?}",
                            hs.id, rep, col.set, col.params
                        ))
                    })?;
                    values.push(v);
                }
                let ident = values[identity_col].as_int();
                if ident.as_ref() != Some(&Int::from(degree)) {
                    return Err(TableError::Eval(format!(
                        "char_set {} {:?}: identity value {} differs from degree {degree} at q = {q}",
                        hs.id,
                        rep,
                        ident.map_or_else(|| "non-integer".to_string(), |v| v.to_string()),
                    )));
                }
                chars.push(CharRow {
                    set: hs.id,
                    params: rep.clone(),
                    degree: Int::from(degree),
                    values,
                });
            }
        }

        if chars.len() != classes.len() {
            return Err(TableError::Eval(format!(
                "{} at q = {q}: {} characters but {} classes",
                self.label(),
                chars.len(),
                classes.len()
            )));
        }

        let char_index = chars
            .iter()
            .enumerate()
            .map(|(i, r)| ((r.set, r.params.clone()), i))
            .collect();
        let class_index = classes
            .iter()
            .enumerate()
            .map(|(i, c)| ((c.set, c.params.clone()), i))
            .collect();
        Ok(ConcreteTable {
            family: self.family.clone(),
            label: self.label(),
            q,
            p,
            order,
            order_p,
            classes,
            chars,
            char_index,
            class_index,
        })
    }

    /// Canonical orbit representative for a character parameter tuple, or
    /// None when the tuple is excluded.
    pub fn canonical_char_params(
        &self,
        q: u64,
        set: u32,
        tuple: &[i64],
    ) -> Result<Option<Vec<i64>>, TableError> {
        let hs = self
            .char_sets
            .iter()
            .find(|h| h.id == set)
            .ok_or_else(|| TableError::Document(format!("unknown char set {set}")))?;
        let mut ctx = self.eval_ctx(q)?;
        hs.params.canonicalize(&mut ctx, tuple)
    }

    /// Canonical orbit representative for a class parameter tuple, or None
    /// when the tuple is excluded.
    pub fn canonical_class_params(
        &self,
        q: u64,
        set: u32,
        tuple: &[i64],
    ) -> Result<Option<Vec<i64>>, TableError> {
        let cs = self
            .class_sets
            .iter()
            .find(|c| c.id == set)
            .ok_or_else(|| TableError::Document(format!("unknown class set {set}")))?;
        let mut ctx = self.eval_ctx(q)?;
        cs.params.canonicalize(&mut ctx, tuple)
    }
}

fn eval_order(poly: &cyclo::QPoly, ctx: &EvalCtx, what: &str) -> Result<Int, TableError> {
    let v = poly.eval(&ctx.qq)?;
    if !v.is_integer() || !v.is_positive() {
        return Err(TableError::Eval(format!(
            "{what} {poly} is not a positive integer at this q"
        )));
    }
    Ok(v.to_integer())
}

impl ConcreteTable {
    /// Exact character value by labels; parameter tuples must be the
    /// canonical representatives used by the table.
    pub fn character_value(
        &self,
        char_set: u32,
        char_params: &[i64],
        class_set: u32,
        class_params: &[i64],
    ) -> Result<&Cyclotomic, TableError> {
        let i = self
            .char_index
            .get(&(char_set, char_params.to_vec()))
            .ok_or_else(|| {
                TableError::Eval(format!(
                    "unknown character label ({char_set}, {char_params:?})"
                ))
            })?;
        let j = self
            .class_index
            .get(&(class_set, class_params.to_vec()))
            .ok_or_else(|| {
                TableError::Eval(format!(
                    "unknown class label ({class_set}, {class_params:?})"
                ))
            })?;
        Ok(&self.chars[*i].values[*j])
    }

    /// Row index for a character label with canonical parameters.
    pub fn char_position(&self, set: u32, params: &[i64]) -> Option<usize> {
        self.char_index.get(&(set, params.to_vec())).copied()
    }

    /// Column index for a class label with canonical parameters.
    pub fn class_position(&self, set: u32, params: &[i64]) -> Option<usize> {
        self.class_index.get(&(set, params.to_vec())).copied()
    }

    /// Run the five exact checks: row orthogonality, column orthogonality,
    /// degree square sum, class size sum, and degree positivity.
    #[must_use]
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let fail = |report: &mut ValidationReport, msg: String| {
            if report.failures.len() < 8 {
                report.failures.push(msg);
            }
        };

        report.degrees_positive = true;
        for row in &self.chars {
            if !row.degree.is_positive() {
                report.degrees_positive = false;
                fail(
                    &mut report,
                    format!(
                        "character ({}, {:?}) has nonpositive degree {}",
                        row.set, row.params, row.degree
                    ),
                );
            }
        }

        let mut sq = Int::from(0);
        for row in &self.chars {
            sq += &row.degree * &row.degree;
        }
        report.degree_square_sum = sq == self.order;
        if !report.degree_square_sum {
            fail(
                &mut report,
                format!("degree square sum {sq} differs from group order {}", self.order),
            );
        }

        let mut total = Int::from(0);
        for col in &self.classes {
            total += &col.size;
        }
        report.class_size_sum = total == self.order;
        if !report.class_size_sum {
            fail(
                &mut report,
                format!("class size sum {total} differs from group order {}", self.order),
            );
        }

        match self.orthogonality() {
            Ok((rows_ok, cols_ok, msgs)) => {
                report.row_orthogonality = rows_ok;
                report.column_orthogonality = cols_ok;
                for m in msgs {
                    fail(&mut report, m);
                }
            }
            Err(e) => {
                report.row_orthogonality = false;
                report.column_orthogonality = false;
                fail(&mut report, format!("orthogonality engine failed: {e}"));
            }
        }
        report
    }

    /// Both orthogonality checks with one integer accumulation engine.
    fn orthogonality(&self) -> Result<(bool, bool, Vec<String>), TableError> {
        let mut n = 1u64;
        for row in &self.chars {
            for v in &row.values {
                n = n.lcm(&v.conductor());
                if n > 60_000_000 {
                    return Err(TableError::Eval(format!(
                        "common conductor exceeds engine bound ({n})"
                    )));
                }
            }
        }
        let order = self.order.to_i128().ok_or_else(|| {
            TableError::Eval("group order exceeds engine bound".to_string())
        })?;

        // Integer coordinates of every value at the common conductor, with
        // one scaling denominator per row.
        let mut rows = Vec::with_capacity(self.chars.len());
        for row in &self.chars {
            let mut raw = Vec::with_capacity(row.values.len());
            let mut den: i128 = 1;
            for v in &row.values {
                let coords = v.at_conductor(n)?;
                for (_, c) in &coords {
                    let d = c.denom().to_i128().ok_or_else(|| {
                        TableError::Eval("coefficient denominator overflow".to_string())
                    })?;
                    den = den.lcm(&d);
                }
                raw.push(coords);
            }
            let scaled: Vec<Box<[(u64, i128)]>> = raw
                .into_iter()
                .map(|coords| {
                    coords
                        .into_iter()
                        .map(|(e, c)| {
                            let s = c * Rational::from_integer(den.into());
                            let v = s.to_integer().to_i128().ok_or_else(|| {
                                TableError::Eval("coefficient overflow".to_string())
                            })?;
                            Ok((e, v))
                        })
                        .collect::<Result<_, TableError>>()
                })
                .collect::<Result<_, TableError>>()?;
            rows.push((den, scaled));
        }

        let sizes: Vec<i128> = self
            .classes
            .iter()
            .map(|c| {
                c.size
                    .to_i128()
                    .ok_or_else(|| TableError::Eval("class size overflow".to_string()))
            })
            .collect::<Result<_, _>>()?;

        let mut engine = Engine::new(n);
        let mut msgs = Vec::new();
        let mut rows_ok = true;
        for i in 0..rows.len() {
            for j in i..rows.len() {
                let (den_i, a) = &rows[i];
                let (den_j, b) = &rows[j];
                for c in 0..self.classes.len() {
                    engine.add_product(&a[c], &b[c], sizes[c])?;
                }
                let target = if i == j { order * den_i * den_j } else { 0 };
                if !engine.settle(target) {
                    rows_ok = false;
                    if msgs.len() < 4 {
                        msgs.push(format!(
                            "row orthogonality fails for characters ({}, {:?}) and ({}, {:?})",
                            self.chars[i].set,
                            self.chars[i].params,
                            self.chars[j].set,
                            self.chars[j].params
                        ));
                    }
                }
            }
        }

        let big_den: i128 = rows.iter().fold(1, |acc, (d, _)| acc.lcm(d));
        let mut cols_ok = true;
        for c in 0..self.classes.len() {
            // Centralizer order |G| / |C_c| must be an exact integer.
            let (cent, rem) = self.order.div_rem(&self.classes[c].size);
            if !rem.is_zero() {
                cols_ok = false;
                if msgs.len() < 4 {
                    msgs.push(format!(
                        "class ({}, {:?}) size does not divide the group order",
                        self.classes[c].set, self.classes[c].params
                    ));
                }
                continue;
            }
            let cent = cent.to_i128().ok_or_else(|| {
                TableError::Eval("centralizer order overflow".to_string())
            })?;
            for d in c..self.classes.len() {
                for (den_i, coords) in &rows {
                    let f = big_den / den_i;
                    engine.add_product(&coords[c], &coords[d], f * f)?;
                }
                let target = if c == d { cent * big_den * big_den } else { 0 };
                if !engine.settle(target) {
                    cols_ok = false;
                    if msgs.len() < 4 {
                        msgs.push(format!(
                            "column orthogonality fails for classes ({}, {:?}) and ({}, {:?})",
                            self.classes[c].set,
                            self.classes[c].params,
                            self.classes[d].set,
                            self.classes[d].params
                        ));
                    }
                }
            }
        }
        Ok((rows_ok, cols_ok, msgs))
    }

    /// True when the character vanishes on every p-singular class.
    #[must_use]
    pub fn vanishes_on_p_singular(&self, row: usize) -> bool {
        self.chars[row]
            .values
            .iter()
            .zip(&self.classes)
            .all(|(v, c)| !c.ptype.p_singular() || v.is_zero())
    }

    /// True when the character is nonzero on every semisimple class.
    #[must_use]
    pub fn nonzero_on_semisimple(&self, row: usize) -> bool {
        self.chars[row].values.iter().zip(&self.classes).all(|(v, c)| {
            matches!(c.ptype, PType::Unipotent | PType::Mixed) || !v.is_zero()
        })
    }
}

/// Dense integer accumulator over the box basis at a fixed conductor.
/// Products of basis roots are expanded through a memoized table of the
/// box coordinates of each power of the primitive root.
struct Engine {
    n: u64,
    exp: HashMap<u64, Box<[(u32, i8)]>>,
    acc: Vec<i128>,
    touched: Vec<u32>,
}

impl Engine {
    fn new(n: u64) -> Engine {
        Engine {
            n,
            exp: HashMap::new(),
            acc: vec![0; n as usize],
            touched: Vec::new(),
        }
    }

    /// Accumulate w * (sum of a) * conj(sum of b).
    fn add_product(
        &mut self,
        a: &[(u64, i128)],
        b: &[(u64, i128)],
        w: i128,
    ) -> Result<(), TableError> {
        if w == 0 {
            return Ok(());
        }
        for &(e, ca) in a {
            if ca == 0 {
                continue;
            }
            for &(f, cb) in b {
                if cb == 0 {
                    continue;
                }
                let g = (e + self.n - f) % self.n;
                let coef = w * ca * cb;
                let coords = match self.exp.entry(g) {
                    std::collections::hash_map::Entry::Occupied(o) => o.into_mut(),
                    std::collections::hash_map::Entry::Vacant(slot) => {
                        let z = cyclo::zeta(self.n, g as i64)?;
                        let raw = z.at_conductor(self.n)?;
                        let mut v = Vec::with_capacity(raw.len());
                        for (idx, c) in raw {
                            let s = c.to_integer().to_i8().filter(|_| c.is_integer()).ok_or_else(
                                || {
                                    TableError::Eval(
                                        "non-unit coefficient in root expansion".to_string(),
                                    )
                                },
                            )?;
                            v.push((idx as u32, s));
                        }
                        slot.insert(v.into_boxed_slice())
                    }
                };
                for &(idx, s) in coords.iter() {
                    let slot = &mut self.acc[idx as usize];
                    if *slot == 0 {
                        self.touched.push(idx);
                    }
                    *slot += coef * i128::from(s);
                }
            }
        }
        Ok(())
    }

    /// Check the accumulated value equals the rational integer `expect`,
    /// then reset. The rational part is the coordinate at exponent zero,
    /// which is always a basis element.
    fn settle(&mut self, expect: i128) -> bool {
        let mut ok = self.acc[0] == expect;
        for &idx in &self.touched {
            if idx != 0 && self.acc[idx as usize] != 0 {
                ok = false;
            }
        }
        for &idx in &self.touched {
            self.acc[idx as usize] = 0;
        }
        self.touched.clear();
        ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::GenericTable;

    /// The dihedral group of order 2m for odd m = q - 1 has a classical
    /// table: two linear characters and (m-1)/2 characters of degree 2.
    /// At q = 8 this exercises parameters, symmetries, and zeta values.
    fn dihedral_doc() -> String {
        r#"{
  "schema_version": "1",
  "family": "dihedral",
  "q_constraints": {"min": 8, "parity": "even"},
  "order": "2*q-2",
  "order_p": "2",
  "class_sets": [
    {"id": 1, "ptype": "identity", "size": "1"},
    {"id": 2, "ptype": "semisimple", "size": "2",
     "params": {"factors": ["q-1"], "exceptions": [["q-1", "l1"]], "symmetries": [["-l1"]]}},
    {"id": 3, "ptype": "unipotent", "size": "q-1"}
  ],
  "char_sets": [
    {"id": 1, "degree": "1", "values": {"1": "1", "2": "1", "3": "1"}},
    {"id": 2, "degree": "1", "steinberg": true, "values": {"1": "1", "2": "1", "3": "-1"}},
    {"id": 3, "degree": "2",
     "params": {"factors": ["q-1"], "exceptions": [["q-1", "k1"]], "symmetries": [["-k1"]]},
     "values": {"1": "2", "2": "zeta(q-1; k1*l1) + zeta(q-1; -(k1*l1))", "3": "0"}}
  ],
  "fixtures": {}
}"#
        .to_string()
    }

    #[test]
    fn dihedral_table_instantiates_and_validates() {
        let t = GenericTable::load(&dihedral_doc()).unwrap();
        let ct = t.instantiate(8).unwrap();
        assert_eq!(ct.order, Int::from(14));
        assert_eq!(ct.chars.len(), 5);
        assert_eq!(ct.classes.len(), 5);
        let report = ct.validate();
        assert!(report.all_pass(), "{:?}", report.failures);
    }

    #[test]
    fn perturbed_value_fails_row_orthogonality() {
        let t = GenericTable::load(&dihedral_doc()).unwrap();
        let mut ct = t.instantiate(8).unwrap();
        let bumped = &ct.chars[2].values[3] + &Cyclotomic::one();
        ct.chars[2].values[3] = bumped;
        let report = ct.validate();
        assert!(!report.row_orthogonality);
        assert!(!report.all_pass());
    }

    #[test]
    fn character_value_lookup_uses_canonical_labels() {
        let t = GenericTable::load(&dihedral_doc()).unwrap();
        let ct = t.instantiate(8).unwrap();
        let v = ct.character_value(3, &[1], 2, &[2]).unwrap();
        let expected = &cyclo::zeta(7, 2).unwrap() + &cyclo::zeta(7, -2).unwrap();
        assert_eq!(*v, expected);
        assert!(ct.character_value(3, &[6], 2, &[2]).is_err());
        let canon = t.canonical_char_params(8, 3, &[6]).unwrap();
        assert_eq!(canon, Some(vec![1]));
    }

    #[test]
    fn steinberg_style_sign_character_vanishing_flags() {
        let t = GenericTable::load(&dihedral_doc()).unwrap();
        let ct = t.instantiate(8).unwrap();
        let sgn = ct.char_position(2, &[]).unwrap();
        assert!(!ct.vanishes_on_p_singular(sgn));
        assert!(ct.nonzero_on_semisimple(sgn));
        let two_dim = ct.char_position(3, &[1]).unwrap();
        assert!(ct.vanishes_on_p_singular(two_dim));
    }
}
