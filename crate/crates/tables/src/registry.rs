//! Built-in table documents and lookup by family name and q.

use crate::error::TableError;
use crate::schema::GenericTable;

/// Raw built-in documents as (name, JSON source) pairs. Families defined
/// only for odd or only for even q appear as two documents sharing one
/// family name.
pub const BUILTIN_SOURCES: &[(&str, &str)] = &[
    ("gl2", include_str!("../data/gl2.json")),
    ("gl3", include_str!("../data/gl3.json")),
    ("sl2_odd", include_str!("../data/sl2_odd.json")),
    ("sl2_even", include_str!("../data/sl2_even.json")),
    ("sl3_n3", include_str!("../data/sl3_n3.json")),
    ("u3", include_str!("../data/u3.json")),
    ("su3_n3", include_str!("../data/su3_n3.json")),
    ("2b2", include_str!("../data/2b2.json")),
];

/// Load every built-in document.
pub fn builtin_tables() -> Result<Vec<GenericTable>, TableError> {
    BUILTIN_SOURCES
        .iter()
        .map(|(name, src)| {
            GenericTable::load(src).map_err(|e| e.in_context(format!("builtin `{name}`")))
        })
        .collect()
}

/// All built-in documents for one family.
pub fn family_tables(family: &str) -> Result<Vec<GenericTable>, TableError> {
    let all = builtin_tables()?;
    let hit: Vec<GenericTable> = all.into_iter().filter(|t| t.family == family).collect();
    if hit.is_empty() {
        return Err(TableError::Document(format!("unknown family `{family}`")));
    }
    Ok(hit)
}

/// The built-in document for a family that admits this q. Documents that
/// carry only degree and fixture data (no character values) are skipped:
/// they support symbolic audits but cannot be instantiated.
pub fn lookup(family: &str, q: u64) -> Result<GenericTable, TableError> {
    let candidates = family_tables(family)?;
    let mut last_err = None;
    let mut any_values = false;
    for t in candidates {
        if !t.has_values() {
            continue;
        }
        any_values = true;
        match t.check_q(q) {
            Ok(()) => return Ok(t),
            Err(e) => last_err = Some(e),
        }
    }
    match last_err {
        Some(e) => Err(e),
        None if !any_values => Err(TableError::Document(format!(
            "family `{family}` has no value-bearing document"
        ))),
        None => unreachable!("family_tables is nonempty"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_document_loads_and_round_trips() {
        for (name, src) in BUILTIN_SOURCES {
            let t = GenericTable::load(src).unwrap_or_else(|e| panic!("{name}: {e}"));
            let out = t.to_json();
            let t2 = GenericTable::load(&out).unwrap();
            assert_eq!(t2.to_json(), out, "{name} round trip");
        }
    }

    #[test]
    fn lookup_prefers_the_admissible_variant() {
        assert!(lookup("gl2", 5).is_ok());
        assert!(lookup("gl2", 6).is_err());
        assert!(lookup("nope", 5).is_err());
    }
}
