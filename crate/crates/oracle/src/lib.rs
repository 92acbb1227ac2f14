//! Brute-force character theory for small concrete groups.
//!
//! Groups are enumerated from explicit generators (matrix groups over small
//! finite fields, or reflection matrices over cyclotomic fields), conjugacy
//! classes and power maps are computed by direct orbit enumeration, and the
//! full ordinary character table is produced by eigenspace splitting of the
//! class-algebra multiplication matrices modulo a large prime, followed by
//! exact lifting into cyclotomic numbers. Nothing here consults the generic
//! tables, so agreement between the two sides is meaningful evidence.

mod brute;
mod dixon;
mod fq;
mod group;
mod groups;
mod mat;

pub use brute::{brute_vanishing, VanishKind};
pub use dixon::{dixon_table, CharTable};
pub use fq::Fq;
pub use group::{derived_subgroup_order, enumerate, Enumerated, Monoid};
pub use groups::{gl2, gl3, gu3, sl2, sl3, su3, sz8, MatGroup};
pub use mat::MatSpace;

/// Errors from group enumeration and table construction.
#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("group would exceed the element cap of {0}")]
    TooLarge(usize),
    #[error("generator set produced order {got}, expected {expected}")]
    WrongOrder { got: u64, expected: u64 },
    #[error("arithmetic error: {0}")]
    Cyclo(#[from] cyclo::CycloError),
    #[error("{0}")]
    Internal(String),
}
