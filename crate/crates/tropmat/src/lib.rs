//! Generalized tropical oriented matroids over a bipartite graph G and
//! subdivisions of the root polytope Q_G, with both directions of the
//! bijection between them, the elimination-based generation machinery,
//! and an exact-rational geometric oracle used for validation.

pub mod axioms;
pub mod error;
pub mod generation;
pub mod geometry;
pub mod json;
pub mod lifting;
pub mod render;
pub mod subdivision;
pub mod types;

pub use error::{Error, Result};
pub use types::{BipartiteType, ComponentDecomposition, OrderedPartition, RightSet};
