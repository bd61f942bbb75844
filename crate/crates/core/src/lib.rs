//! Spectral lower bounds through unraveled balls.
//!
//! The unraveled ball of radius `r` at `v` is the ball of radius `r` around
//! the walk `(v)` in the universal cover: the tree of non-backtracking walks
//! of length at most `r` starting at `v`. This crate builds those trees, the
//! forest of non-backtracking walks with its Markov-weighted test vector,
//! and evaluates and checks the spectral bounds that follow from them.
//!
//! * [`graph`]: simple graphs, balls, deletion, robust average degree
//! * [`generators`]: seeded graph families
//! * [`spectral`]: eigenvalue solvers and exact closed-walk counts
//! * [`unravel`]: non-backtracking walks, unraveled balls, walk forests
//! * [`bounds`]: bound formulas and per-graph checks
//! * [`harness`]: corpora, verification sweeps and report files

pub mod bounds;
pub mod error;
pub mod generators;
pub mod graph;
pub mod harness;
mod par;
pub mod spectral;
pub mod unravel;

pub use error::{Error, Result};
pub use graph::{Graph, Vertex, VertexSet};
