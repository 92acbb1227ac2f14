//! Table documents: the JSON schema, loading with full validation, and
//! serialization. Loading keeps the raw document alongside the parsed
//! structures so that load -> serialize -> load is the identity.

use crate::error::{Located, TableError};
use crate::expr::Expr;
use crate::param::ParamSpace;
use cyclo::QPoly;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Version stamp written into documents and CLI outputs.
pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawDoc {
    pub schema_version: String,
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    pub q_constraints: RawConstraints,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radical_base: Option<u8>,
    pub order: String,
    pub order_p: String,
    pub class_sets: Vec<RawClassSet>,
    pub char_sets: Vec<RawCharSet>,
    pub fixtures: RawFixtures,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RawConstraints {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub not_divides: Vec<(u64, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub divides: Vec<(u64, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub square_class: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawClassSet {
    pub id: u32,
    pub ptype: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centralizer: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<RawParams>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawCharSet {
    pub id: u32,
    pub degree: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub steinberg: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<RawParams>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RawParams {
    pub factors: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exceptions: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub symmetries: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RawFixtures {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub table_a: Vec<(u32, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub table_b: Vec<(u32, Vec<u32>)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub table_c: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub table_d: Vec<RawTableD>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub delta: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generic_min_q: Option<u64>,
    /// Set-ids referenced by Tables B/C whose degrees the source leaves open.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unknown_sets: Vec<u32>,
    /// Set-ids whose exception predicates the source leaves incomplete.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exceptions_incomplete: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawTableD {
    pub shape: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bind: Vec<RawBinder>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<(String, String)>,
    pub values: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawBinder {
    pub var: String,
    pub set: u32,
    pub index: usize,
}

/// How an element of the class set sits relative to the defining prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PType {
    Identity,
    Unipotent,
    Semisimple,
    Mixed,
}

impl PType {
    fn parse(s: &str) -> Result<Self, TableError> {
        match s {
            "identity" => Ok(PType::Identity),
            "unipotent" => Ok(PType::Unipotent),
            "semisimple" => Ok(PType::Semisimple),
            "mixed" => Ok(PType::Mixed),
            other => Err(TableError::Document(format!("unknown ptype `{other}`"))),
        }
    }

    /// True for classes of p-singular elements (nontrivial p-part).
    #[must_use]
    pub fn p_singular(self) -> bool {
        matches!(self, PType::Unipotent | PType::Mixed)
    }
}

/// Admissibility predicates on the instantiation parameter.
#[derive(Debug, Clone)]
pub struct QConstraints {
    pub min: u64,
    pub parity: Parity,
    pub not_divides: Vec<(u64, QPoly)>,
    pub divides: Vec<(u64, QPoly)>,
    pub square_class: SquareClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Any,
    Odd,
    Even,
}

/// Whether the instantiation parameter is a plain prime power or the square
/// q^2 = p^{2m+1} of a twisted-family parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareClass {
    Plain,
    OddPowerOf2,
    OddPowerOf3,
}

/// One parametrized family of conjugacy classes.
#[derive(Debug, Clone)]
pub struct ClassSet {
    pub id: u32,
    pub ptype: PType,
    /// Class size as an expression in q; derived from the centralizer order
    /// when the document stores that instead.
    pub size: Expr,
    /// True when the document stored the centralizer order.
    pub size_from_centralizer: bool,
    pub params: ParamSpace,
}

/// One parametrized family of irreducible characters.
#[derive(Debug, Clone)]
pub struct CharSet {
    pub id: u32,
    pub degree: Expr,
    pub degree_poly: QPoly,
    pub steinberg: bool,
    pub params: ParamSpace,
    /// Value expression per class-set id; empty for audit-only documents.
    pub values: BTreeMap<u32, Expr>,
}

/// Degree fixtures transcribed from the source tables.
#[derive(Debug, Clone)]
pub struct Fixtures {
    pub table_a: Vec<(u32, QPoly)>,
    pub table_b: Vec<(u32, Vec<u32>)>,
    pub table_c: Vec<Vec<u32>>,
    pub table_d: Vec<TableD>,
    pub delta: Vec<u32>,
    pub generic_min_q: Option<u64>,
    pub unknown_sets: Vec<u32>,
    pub exceptions_incomplete: Vec<u32>,
}

/// Expected values of a p-vanishing solution on selected class sets.
#[derive(Debug, Clone)]
pub struct TableD {
    pub shape: Vec<u32>,
    pub bind: Vec<(usize, u32, usize)>,
    pub maps: Vec<(usize, Expr)>,
    pub values: BTreeMap<u32, Expr>,
}

/// A fully loaded and validated table document.
#[derive(Debug, Clone)]
pub struct GenericTable {
    raw: RawDoc,
    pub family: String,
    pub variant: Option<String>,
    pub constraints: QConstraints,
    pub base: u8,
    pub order: QPoly,
    pub order_p: QPoly,
    pub class_sets: Vec<ClassSet>,
    pub char_sets: Vec<CharSet>,
    pub fixtures: Fixtures,
}

impl GenericTable {
    /// Parse and validate a JSON document.
    pub fn load(text: &str) -> Result<GenericTable, TableError> {
        let raw: RawDoc = serde_json::from_str(text)?;
        Self::from_raw(raw)
    }

    /// Serialize back to JSON; loading the output reproduces this table.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.raw).expect("serializable");
        s.push('\n');
        s
    }

    /// Name including the variant qualifier when present.
    #[must_use]
    pub fn label(&self) -> String {
        match &self.variant {
            Some(v) => format!("{} ({v})", self.family),
            None => self.family.clone(),
        }
    }

    /// True when the document carries character values (not audit-only).
    #[must_use]
    pub fn has_values(&self) -> bool {
        !self.char_sets.is_empty() && self.char_sets.iter().all(|h| !h.values.is_empty())
    }

    /// The Steinberg character set, when values are present.
    #[must_use]
    pub fn steinberg_set(&self) -> Option<&CharSet> {
        self.char_sets.iter().find(|h| h.steinberg)
    }

    /// Check q against the admissibility predicates.
    pub fn check_q(&self, q: u64) -> Result<(), TableError> {
        let c = &self.constraints;
        if q < c.min {
            return Err(TableError::BadQ(format!(
                "{} requires q >= {}, got {q}",
                self.label(),
                c.min
            )));
        }
        match c.square_class {
            SquareClass::Plain => {
                if cyclo::prime_power(q).is_none() {
                    return Err(TableError::BadQ(format!("{q} is not a prime power")));
                }
                match c.parity {
                    Parity::Odd if q % 2 == 0 => {
                        return Err(TableError::BadQ(format!(
                            "{} requires odd q, got {q}",
                            self.label()
                        )))
                    }
                    Parity::Even if q % 2 == 1 => {
                        return Err(TableError::BadQ(format!(
                            "{} requires even q, got {q}",
                            self.label()
                        )))
                    }
                    _ => {}
                }
            }
            SquareClass::OddPowerOf2 | SquareClass::OddPowerOf3 => {
                let b = if c.square_class == SquareClass::OddPowerOf2 {
                    2
                } else {
                    3
                };
                let ok = matches!(cyclo::prime_power(q), Some((p, f)) if p == b && f % 2 == 1);
                if !ok {
                    return Err(TableError::BadQ(format!(
                        "{} requires q^2 to be an odd power of {b}, got {q}",
                        self.label()
                    )));
                }
            }
        }
        let ctx = self.eval_ctx(q)?;
        for (d, poly) in &c.not_divides {
            let v = poly.eval(&ctx.qq)?;
            let vi = v.to_integer();
            if (vi.clone() % d).eq(&0u64.into()) {
                return Err(TableError::BadQ(format!(
                    "{} requires {d} not dividing {poly} = {vi} at q = {q}",
                    self.label()
                )));
            }
        }
        for (d, poly) in &c.divides {
            let v = poly.eval(&ctx.qq)?;
            let vi = v.to_integer();
            if !(vi.clone() % d).eq(&0u64.into()) {
                return Err(TableError::BadQ(format!(
                    "{} requires {d} dividing {poly} = {vi} at q = {q}",
                    self.label()
                )));
            }
        }
        Ok(())
    }

    /// Evaluation context at q (does not check admissibility).
    pub fn eval_ctx(&self, q: u64) -> Result<crate::expr::EvalCtx, TableError> {
        match self.constraints.square_class {
            SquareClass::Plain => crate::expr::EvalCtx::plain(q),
            SquareClass::OddPowerOf2 => crate::expr::EvalCtx::twisted(2, q),
            SquareClass::OddPowerOf3 => crate::expr::EvalCtx::twisted(3, q),
        }
    }

    /// The defining prime at q.
    pub fn prime(&self, q: u64) -> Result<u64, TableError> {
        match self.constraints.square_class {
            SquareClass::Plain => cyclo::prime_power(q)
                .map(|(p, _)| p)
                .ok_or_else(|| TableError::BadQ(format!("{q} is not a prime power"))),
            SquareClass::OddPowerOf2 => Ok(2),
            SquareClass::OddPowerOf3 => Ok(3),
        }
    }

    fn from_raw(raw: RawDoc) -> Result<GenericTable, TableError> {
        if raw.schema_version != SCHEMA_VERSION {
            return Err(TableError::Document(format!(
                "unsupported schema version `{}`",
                raw.schema_version
            )));
        }
        let base = raw.radical_base.unwrap_or(1);
        let constraints = parse_constraints(&raw.q_constraints, base)?;
        let order = QPoly::parse(&raw.order, base).located("field `order`")?;
        let order_p = QPoly::parse(&raw.order_p, base).located("field `order_p`")?;

        let mut class_ids = BTreeSet::new();
        let mut class_sets = Vec::new();
        for rc in &raw.class_sets {
            let where_ = format!("class_set {}", rc.id);
            if !class_ids.insert(rc.id) {
                return Err(TableError::Document(format!(
                    "duplicate class-set id {}",
                    rc.id
                )));
            }
            let ptype = PType::parse(&rc.ptype).located(where_.clone())?;
            let (size, from_centralizer) = match (&rc.size, &rc.centralizer) {
                (Some(s), None) => (
                    Expr::parse(s).located(format!("{where_}, field `size`"))?,
                    false,
                ),
                (None, Some(c)) => {
                    let src = format!("({}) / ({c})", raw.order);
                    (
                        Expr::parse(&src).located(format!("{where_}, field `centralizer`"))?,
                        true,
                    )
                }
                _ => {
                    return Err(TableError::Document(format!(
                        "{where_}: exactly one of `size` and `centralizer` is required"
                    )))
                }
            };
            let params = parse_params(rc.params.as_ref(), &where_)?;
            check_space_vars(&params, &where_)?;
            check_param_free(&size, &format!("{where_}, size"), params.factors.len())?;
            class_sets.push(ClassSet {
                id: rc.id,
                ptype,
                size,
                size_from_centralizer: from_centralizer,
                params,
            });
        }

        let mut char_ids = BTreeSet::new();
        let mut char_sets = Vec::new();
        let mut steinberg_count = 0;
        for rh in &raw.char_sets {
            let where_ = format!("char_set {}", rh.id);
            if !char_ids.insert(rh.id) {
                return Err(TableError::Document(format!(
                    "duplicate char-set id {}",
                    rh.id
                )));
            }
            let degree =
                Expr::parse(&rh.degree).located(format!("{where_}, field `degree`"))?;
            let degree_poly =
                QPoly::parse(&rh.degree, base).located(format!("{where_}, field `degree`"))?;
            if rh.steinberg {
                steinberg_count += 1;
            }
            let params = parse_params(rh.params.as_ref(), &where_)?;
            check_space_vars(&params, &where_)?;
            check_param_free(&degree, &format!("{where_}, degree"), params.factors.len())?;
            let mut values = BTreeMap::new();
            for (key, src) in &rh.values {
                let cid: u32 = key.parse().map_err(|_| {
                    TableError::Document(format!("{where_}: bad class-set key `{key}`"))
                })?;
                let class = class_sets.iter().find(|c| c.id == cid).ok_or_else(|| {
                    TableError::Document(format!(
                        "{where_}: value for unknown class set {cid}"
                    ))
                })?;
                let e = Expr::parse(src)
                    .located(format!("{where_}, value on class_set {cid}"))?;
                let (ka, la) = e.var_arity();
                if ka > params.factors.len() {
                    return Err(TableError::Document(format!(
                        "{where_}: value on class_set {cid} uses k{ka} but the set has {} parameters",
                        params.factors.len()
                    )));
                }
                if la > class.params.factors.len() {
                    return Err(TableError::Document(format!(
                        "{where_}: value on class_set {cid} uses l{la} but the class set has {} parameters",
                        class.params.factors.len()
                    )));
                }
                values.insert(cid, e);
            }
            if !values.is_empty() {
                for c in &class_sets {
                    if !values.contains_key(&c.id) {
                        return Err(TableError::Document(format!(
                            "{where_}: missing value on class_set {}",
                            c.id
                        )));
                    }
                }
            }
            char_sets.push(CharSet {
                id: rh.id,
                degree,
                degree_poly,
                steinberg: rh.steinberg,
                params,
                values,
            });
        }

        let with_values = char_sets.iter().filter(|h| !h.values.is_empty()).count();
        if with_values != 0 && with_values != char_sets.len() {
            return Err(TableError::Document(
                "either all char sets carry values or none do".to_string(),
            ));
        }
        if with_values > 0 {
            if steinberg_count != 1 {
                return Err(TableError::Document(format!(
                    "expected exactly one steinberg char set, found {steinberg_count}"
                )));
            }
            let identities = class_sets
                .iter()
                .filter(|c| c.ptype == PType::Identity)
                .count();
            if identities != 1 {
                return Err(TableError::Document(format!(
                    "expected exactly one identity class set, found {identities}"
                )));
            }
            if let Some(c) = class_sets
                .iter()
                .find(|c| c.ptype == PType::Identity && !c.params.is_trivial())
            {
                return Err(TableError::Document(format!(
                    "identity class set {} must have no parameters",
                    c.id
                )));
            }
        }

        let fixtures = parse_fixtures(&raw.fixtures, base, &char_ids, with_values > 0)?;
        Ok(GenericTable {
            family: raw.family.clone(),
            variant: raw.variant.clone(),
            constraints,
            base,
            order,
            order_p,
            class_sets,
            char_sets,
            fixtures,
            raw,
        })
    }
}

fn parse_constraints(rc: &RawConstraints, base: u8) -> Result<QConstraints, TableError> {
    let parity = match rc.parity.as_deref() {
        None | Some("any") => Parity::Any,
        Some("odd") => Parity::Odd,
        Some("even") => Parity::Even,
        Some(other) => {
            return Err(TableError::Document(format!("unknown parity `{other}`")))
        }
    };
    let square_class = match rc.square_class.as_deref() {
        None | Some("plain") => SquareClass::Plain,
        Some("odd_power_of_2") => SquareClass::OddPowerOf2,
        Some("odd_power_of_3") => SquareClass::OddPowerOf3,
        Some(other) => {
            return Err(TableError::Document(format!(
                "unknown square_class `{other}`"
            )))
        }
    };
    let mut not_divides = Vec::new();
    for (d, poly) in &rc.not_divides {
        if *d == 0 {
            return Err(TableError::Document(
                "zero divisor in q_constraints.not_divides".to_string(),
            ));
        }
        not_divides.push((
            *d,
            QPoly::parse(poly, base).located("q_constraints.not_divides")?,
        ));
    }
    let mut divides = Vec::new();
    for (d, poly) in &rc.divides {
        if *d == 0 {
            return Err(TableError::Document(
                "zero divisor in q_constraints.divides".to_string(),
            ));
        }
        divides.push((
            *d,
            QPoly::parse(poly, base).located("q_constraints.divides")?,
        ));
    }
    Ok(QConstraints {
        min: rc.min.unwrap_or(2),
        parity,
        not_divides,
        divides,
        square_class,
    })
}

fn parse_params(raw: Option<&RawParams>, where_: &str) -> Result<ParamSpace, TableError> {
    let Some(raw) = raw else {
        return Ok(ParamSpace::default());
    };
    let mut factors = Vec::new();
    for (i, f) in raw.factors.iter().enumerate() {
        factors.push(Expr::parse(f).located(format!("{where_}, factor {}", i + 1))?);
    }
    let mut exceptions = Vec::new();
    for (i, (d, form)) in raw.exceptions.iter().enumerate() {
        exceptions.push((
            Expr::parse(d).located(format!("{where_}, exception {} divisor", i + 1))?,
            Expr::parse(form).located(format!("{where_}, exception {} form", i + 1))?,
        ));
    }
    let mut symmetries = Vec::new();
    for (i, gen) in raw.symmetries.iter().enumerate() {
        if gen.len() != raw.factors.len() {
            return Err(TableError::Document(format!(
                "{where_}: symmetry {} has {} images for {} factors",
                i + 1,
                gen.len(),
                raw.factors.len()
            )));
        }
        let mut images = Vec::new();
        for (j, img) in gen.iter().enumerate() {
            images.push(
                Expr::parse(img)
                    .located(format!("{where_}, symmetry {} image {}", i + 1, j + 1))?,
            );
        }
        symmetries.push(images);
    }
    Ok(ParamSpace {
        factors,
        exceptions,
        symmetries,
    })
}

/// Factors must be parameter-free; exceptions and symmetries may reference
/// only this space's own parameters (either variable family is accepted and
/// both denote the space's coordinates).
fn check_space_vars(space: &ParamSpace, where_: &str) -> Result<(), TableError> {
    let arity = space.factors.len();
    for (i, f) in space.factors.iter().enumerate() {
        let (k, l) = f.var_arity();
        if k > 0 || l > 0 {
            return Err(TableError::Document(format!(
                "{where_}: factor {} must not reference parameters",
                i + 1
            )));
        }
    }
    let check = |e: &Expr, what: String| -> Result<(), TableError> {
        let (k, l) = e.var_arity();
        if k.max(l) > arity {
            return Err(TableError::Document(format!(
                "{what} references parameter {} but the space has {arity}",
                k.max(l)
            )));
        }
        Ok(())
    };
    for (i, (d, form)) in space.exceptions.iter().enumerate() {
        check(d, format!("{where_}, exception {} divisor", i + 1))?;
        check(form, format!("{where_}, exception {} form", i + 1))?;
    }
    for (i, gen) in space.symmetries.iter().enumerate() {
        for (j, img) in gen.iter().enumerate() {
            check(img, format!("{where_}, symmetry {} image {}", i + 1, j + 1))?;
        }
    }
    Ok(())
}

fn check_param_free(e: &Expr, what: &str, _arity: usize) -> Result<(), TableError> {
    if e.has_params() {
        return Err(TableError::Document(format!(
            "{what} must not reference parameters"
        )));
    }
    Ok(())
}

fn parse_fixtures(
    raw: &RawFixtures,
    base: u8,
    char_ids: &BTreeSet<u32>,
    has_values: bool,
) -> Result<Fixtures, TableError> {
    let mut table_a = Vec::new();
    let mut a_ids = BTreeSet::new();
    for (id, poly) in &raw.table_a {
        if !a_ids.insert(*id) {
            return Err(TableError::Document(format!(
                "fixtures.table_a: duplicate set {id}"
            )));
        }
        table_a.push((
            *id,
            QPoly::parse(poly, base).located(format!("fixtures.table_a set {id}"))?,
        ));
    }
    let unknown: BTreeSet<u32> = raw.unknown_sets.iter().copied().collect();
    let mut used = BTreeSet::new();
    for (lhs, rhs) in &raw.table_b {
        used.insert(*lhs);
        used.extend(rhs.iter().copied());
    }
    for row in &raw.table_c {
        used.extend(row.iter().copied());
    }
    for id in &used {
        if !a_ids.contains(id) && !unknown.contains(id) {
            return Err(TableError::Document(format!(
                "fixtures: set {id} appears in tables B/C but has no table_a degree and is not flagged unknown"
            )));
        }
    }
    for id in &unknown {
        if a_ids.contains(id) {
            return Err(TableError::Document(format!(
                "fixtures: set {id} is flagged unknown but has a table_a degree"
            )));
        }
    }
    if has_values {
        for id in a_ids.iter().chain(used.iter()) {
            if !char_ids.contains(id) {
                return Err(TableError::Document(format!(
                    "fixtures reference set {id} which is not a declared char set"
                )));
            }
        }
    }
    let mut table_d = Vec::new();
    for (i, rd) in raw.table_d.iter().enumerate() {
        let where_ = format!("fixtures.table_d row {}", i + 1);
        let mut bind = Vec::new();
        for b in &rd.bind {
            let slot = parse_kvar(&b.var)
                .ok_or_else(|| TableError::Document(format!("{where_}: bad var `{}`", b.var)))?;
            if !rd.shape.contains(&b.set) {
                return Err(TableError::Document(format!(
                    "{where_}: binder set {} is not in the shape",
                    b.set
                )));
            }
            bind.push((slot, b.set, b.index));
        }
        let mut maps = Vec::new();
        for (var, src) in &rd.maps {
            let slot = parse_kvar(var)
                .ok_or_else(|| TableError::Document(format!("{where_}: bad var `{var}`")))?;
            maps.push((
                slot,
                Expr::parse(src).located(format!("{where_}, map for {var}"))?,
            ));
        }
        let mut values = BTreeMap::new();
        for (key, src) in &rd.values {
            let cid: u32 = key.parse().map_err(|_| {
                TableError::Document(format!("{where_}: bad class-set key `{key}`"))
            })?;
            values.insert(
                cid,
                Expr::parse(src).located(format!("{where_}, value on class_set {cid}"))?,
            );
        }
        table_d.push(TableD {
            shape: rd.shape.clone(),
            bind,
            maps,
            values,
        });
    }
    Ok(Fixtures {
        table_a,
        table_b: raw.table_b.clone(),
        table_c: raw.table_c.clone(),
        table_d,
        delta: raw.delta.clone(),
        generic_min_q: raw.generic_min_q,
        unknown_sets: raw.unknown_sets.clone(),
        exceptions_incomplete: raw.exceptions_incomplete.clone(),
    })
}

fn parse_kvar(name: &str) -> Option<usize> {
    match name {
        "k1" => Some(0),
        "k2" => Some(1),
        "k3" => Some(2),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_doc() -> String {
        r#"{
  "schema_version": "1",
  "family": "toy",
  "q_constraints": {"min": 2},
  "order": "q^2-q",
  "order_p": "q",
  "class_sets": [
    {"id": 1, "ptype": "identity", "size": "1"},
    {"id": 2, "ptype": "unipotent", "size": "q-1"},
    {"id": 3, "ptype": "semisimple", "size": "q",
     "params": {"factors": ["q-1"], "exceptions": [["q-1", "l1"]]}}
  ],
  "char_sets": [
    {"id": 1, "degree": "1",
     "values": {"1": "1", "2": "1", "3": "1"}},
    {"id": 2, "degree": "q-1", "steinberg": true,
     "params": {"factors": ["q-1"], "exceptions": [["q-1", "k1"]]},
     "values": {"1": "q-1", "2": "-1", "3": "zeta(q-1; k1*l1)+zeta(q-1; -k1*l1)-1"}}
  ],
  "fixtures": {
    "table_a": [[1, "1"], [2, "q-1"]],
    "table_b": [],
    "table_c": [[2]]
  }
}"#
        .to_string()
    }

    #[test]
    fn loads_and_round_trips() {
        let doc = minimal_doc();
        let t = GenericTable::load(&doc).unwrap();
        assert_eq!(t.family, "toy");
        assert_eq!(t.char_sets.len(), 2);
        let out = t.to_json();
        let t2 = GenericTable::load(&out).unwrap();
        assert_eq!(t2.to_json(), out);
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let doc = minimal_doc().replace(r#""id": 3, "ptype": "semisimple""#,
            r#""id": 2, "ptype": "semisimple""#);
        let err = GenericTable::load(&doc).unwrap_err();
        assert!(err.to_string().contains("duplicate class-set id 2"));
    }

    #[test]
    fn undeclared_parameter_is_rejected() {
        let doc = minimal_doc().replace(r#"[["q-1", "k1"]]"#, r#"[["q-1", "k2"]]"#);
        let err = GenericTable::load(&doc).unwrap_err();
        assert!(
            err.to_string().contains("references parameter 2"),
            "got: {err}"
        );
    }

    #[test]
    fn missing_value_key_is_rejected() {
        let doc = minimal_doc().replace(r#""2": "-1", "#, "");
        let err = GenericTable::load(&doc).unwrap_err();
        assert!(err.to_string().contains("missing value"), "got: {err}");
    }

    #[test]
    fn q_constraints_are_enforced() {
        let doc = minimal_doc();
        let t = GenericTable::load(&doc).unwrap();
        assert!(t.check_q(5).is_ok());
        assert!(t.check_q(6).is_err());
        assert!(t.check_q(1).is_err());
    }
}
