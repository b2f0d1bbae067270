//! Exact matroid computations around the matroidal Cayley–Bacharach
//! property: flats and covers, paving constructions, matroid polytopes and
//! their Minkowski decompositions, set-cover counts, and graphic matroids.
//!
//! Ground sets are small (at most [`MAX_N`] elements) and everything is
//! computed exhaustively and exactly.

pub mod constructions;
pub mod covers;
pub mod error;
pub mod graphs;
pub mod json;
pub mod matroid;
pub mod mcb;
pub mod polytope;
pub mod subset;

pub use error::{Error, Result};
pub use graphs::{cycle_matroid, Digraph, Graph};
pub use matroid::{Matroid, Minor, Validation};
pub use mcb::{check_mcb, check_smcb, CoverProfile, McbVerdict, SearchOptions, Witness};
pub use subset::{SetFamily, Subset, MAX_N};
