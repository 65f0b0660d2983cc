//! Derived sequences of linear forms on flagged simplicial cones.

pub mod build;
pub mod rescale;
pub mod restrict;
pub mod sequence;

pub use build::build_derived_sequences;
pub use rescale::{primitive_rescale, variable_part, VariablePart};
pub use restrict::restrict_derived;
pub use sequence::{derived_set, restricted_class, DerivedSequence};

#[cfg(test)]
mod tests;
