//! Reduction of zeta values of rational cones to cyclotomic multiple zeta values.

pub mod derivation;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod lin;
pub mod linalg;
pub mod numeric;
pub mod pipeline;
pub mod polylog;
pub mod rewrite;
pub(crate) mod serde_util;

pub use error::{Error, Result};
pub use exact::{induced_character_decompose, CycloNumber, LatticeCharacter, Rational, RootOfUnity};
pub use lin::Lin;
pub use pipeline::{run, JobSpec, Report};
pub use polylog::{MZVSymbol, ZExpression};
