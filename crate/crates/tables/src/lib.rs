//! Generic character tables of small finite groups of Lie type: a JSON
//! document model, exact evaluation of parametrized character values at
//! concrete q, full orthogonality validation, and degree audits against
//! the transcribed fixture tables.

mod concrete;
mod error;
mod expr;
mod param;
mod registry;
mod schema;

pub use concrete::{CharRow, ClassCol, ConcreteTable, ValidationReport};
pub use error::{Located, TableError};
pub use expr::{EvalCtx, Expr};
pub use param::{ParamSpace, RealizedParams};
pub use registry::{builtin_tables, family_tables, lookup, BUILTIN_SOURCES};
pub use schema::{
    CharSet, ClassSet, Fixtures, GenericTable, PType, Parity, QConstraints, RawDoc, SquareClass,
    TableD, SCHEMA_VERSION,
};
