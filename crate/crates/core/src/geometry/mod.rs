//! Rational polyhedral geometry: forms, lattices, cones, flags and decompositions.

pub mod cone;
pub mod flag;
pub mod form;
pub mod lattice;
pub mod refine;
pub mod superlattice;
pub mod triangulate;

pub use cone::{dual_face, linear_join, Cone, SimplicialCone};
pub use flag::{regular_faces, standard_coordinates, Flag, RegularFace};
pub use form::LinearForm;
pub use lattice::Lattice;
pub use refine::{refine_definite, DefinitePiece};
pub use superlattice::{free_superlattice, FreeSuperlattice};
pub use triangulate::{open_simplicial_decomposition, triangulate, OpenPiece};
