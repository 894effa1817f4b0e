//! Combinatorial Lefschetz numbers on finite simplicial complexes, integration
//! of constructible functions against them, and target counting.

pub mod chain;
pub mod complex;
pub mod counting;
pub mod error;
pub mod fixtures;
pub mod generate;
pub mod homology;
pub mod integral;
pub mod lefschetz;
pub mod linalg;
pub mod product;
pub mod subdivision;

pub use chain::{ChainComplex, ChainMap, VertexMap};
pub use complex::{OpenSet, Simplex, SimplicialComplex};
pub use counting::{Scenario, SymmetryKind};
pub use error::{Error, Result};
pub use integral::ConstructibleFunction;
pub use lefschetz::{LefschetzMeasure, SelfMap};
pub use linalg::{Rational, SparseMatrix};
