//! Deterministic dense linear algebra, distances, neighbor search, graph
//! shortest paths, and seeded pseudo-random generation.

pub mod dists;
pub mod eigen;
pub mod graph;
pub mod matrix;
pub mod rng;

pub use dists::{knn, pairwise_sq_dists};
pub use eigen::{sym_eigen, SymEigenResult};
pub use graph::Graph;
pub use matrix::{sq_dist, Matrix};
pub use rng::Rng;
