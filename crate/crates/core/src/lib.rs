//! Isomorphism of Boolean constraint instances.
//!
//! The crate classifies constraint sets by the complexity of their
//! isomorphism problem, decides isomorphism for 2-affine instances through
//! a normal form, and builds reductions from graph isomorphism to instance
//! isomorphism for every set that is not 2-affine. Brute-force deciders for
//! small inputs back every piece.

pub mod affine;
pub mod boolfun;
mod error;
pub mod formats;
pub mod gi;
pub mod instances;
mod limits;
mod var;

pub use boolfun::{
    builtin, builtin_set, classify_trichotomy, detect_properties, is_schaefer_set, Constraint,
    ConstraintSet, PropertySet, TrichotomyClass, TruthTable,
};
pub use error::{Error, Result};
pub use limits::Limits;
pub use var::{v, Var};
