//! Exact solvers for optimal homologous and bounding chains on weighted
//! simplicial complexes, with desingularization of optimal chains into
//! embedded paths and surfaces.

pub mod complex;
pub mod desingularize;
pub mod error;
pub mod gadgets;
pub mod homology;
pub mod io;
pub mod lp;
pub mod rational;
pub mod solver;
pub mod spanning;

pub use complex::{Chain, SimplicialComplex, SparseIntMatrix, Subcomplex, WeightAssignment};
pub use error::{Error, Result};
pub use rational::Rational;
