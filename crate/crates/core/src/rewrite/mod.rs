//! Integral expressions for cone zeta values and their reduction to one variable.

pub mod expr;
pub mod reduce;
pub mod term;
pub mod unifactor;

pub use term::{Factor, Mono, TProd, TTerm, TermTag, UTerm};
pub use unifactor::{partial_fraction_pair, root_split, uni_factorize};
pub use expr::{change_coordinates, convergence_check, integral_expression, integralize_forms, Integrand};
pub use reduce::{reduce_to_univariate, ReductionTrace, Reducer, TraceStep};
