//! Iterated integrals on `P¹ \ {0, μ_N⁻¹, ∞}`, their normal forms and values at 1.

pub mod pform;
pub mod regularize;
pub mod symbol;
pub mod value;
pub mod word;

pub use pform::{pole_product, PNormalForm, Pole};
pub use regularize::{regularize_limit, shuffle_regularize, Expansion};
pub use symbol::{mzv_symbol_from_word, word_from_symbol, z_display, z_terms, MZVSymbol, ZExpression, ZTerm};
pub use value::{word_series_exact, word_value_at, word_value_at_one};
pub use word::{shuffle, shuffle_lin, Letter, PolylogWord};
