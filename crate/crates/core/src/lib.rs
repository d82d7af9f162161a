//! Solvers for the cops and invisible slow robber game on directed graphs.
//!
//! Cops occupy any set of vertices at each step; the robber is invisible and
//! must follow an arc per step. The crate computes exact cop numbers and
//! capture times, bounds, an FPT kernel, tournament-specific algorithms, a
//! boolean-matrix view of strategies, and generators for the standard
//! constructions, all of which cross-check each other in the test suites.

pub mod antichain;
pub mod bounds;
pub mod digraph;
pub mod error;
pub mod format;
pub mod gadgets;
pub mod kernel;
pub mod mortality;
pub mod solver;
pub mod strategy;
pub mod tournament;
pub mod vertex_set;

pub use digraph::Digraph;
pub use error::{Error, Result};
pub use solver::SolverConfig;
pub use strategy::{Strategy, TerritoryTrace};
pub use vertex_set::VertexSet;
