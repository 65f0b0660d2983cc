//! Exact arithmetic: rationals, roots of unity, cyclotomic numbers, lattice characters.

pub mod character;
pub mod cyclo;
pub mod rational;
pub mod root;

pub use character::{character_eval, induced_character_decompose, LatticeCharacter};
pub use cyclo::CycloNumber;
pub use rational::Rational;
pub use root::RootOfUnity;
