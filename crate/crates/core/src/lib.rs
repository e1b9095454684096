//! q-bookpile graphs, the hypergraph of their standard copies with
//! constructive disjoint path systems, and commonality tools over step graphons.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod graph;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
pub mod bookpile;
pub mod coords;
pub mod graphon;
pub mod hypergraph;
pub mod search;
pub mod selftest;

/// Step graphon over `f64`, the precision used by search and the CLI.
pub type Graphon = graphon::StepGraphon<f64>;
/// Step graphon over `f32`.
pub type Graphon32 = graphon::StepGraphon<f32>;
/// Density report over `f64`.
pub type Report = graphon::DensityReport<f64>;
