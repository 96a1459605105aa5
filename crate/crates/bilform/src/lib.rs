//! Exact analysis of bilinear forms over prime fields.
//!
//! Given a Gram matrix over GF(p) this crate decomposes the underlying
//! bilinear space into Gabriel blocks plus a non-degenerate part, computes
//! the invariant tower filtrations, builds explicit isometry-group
//! generators, predicts the isometry group's order and internal structure,
//! and can verify every prediction against an exhaustive pruned search.

pub mod bilspace;
pub mod error;
pub mod field;
pub mod gabriel;
pub mod io;
pub mod matrix;
pub mod nondeg;
pub mod oracle;
pub mod poly;
pub mod report;
pub mod structure;

pub use error::{Error, Result};
pub use field::{ff_arith, FieldElement, FieldOp, PrimeField};
pub use matrix::{Matrix, Partition, Subspace};
pub use poly::Poly;
