use thiserror::Error;

use crate::graph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {vertex_count} vertices")]
    InvalidVertex { vertex: Vertex, vertex_count: usize },

    #[error("graph is not simple: {0}")]
    NotSimple(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("node cap of {cap} exceeded ({partial} nodes counted before stopping)")]
    CapExceeded { cap: u64, partial: u64 },

    #[error("minimum degree {found} is below the required {required}")]
    MinDegree { required: usize, found: usize },

    #[error("graph has no edges")]
    EmptyEdgeSet,

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("vector is zero")]
    ZeroVector,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "eigensolver did not converge after {iterations} iterations \
         (best estimate {best}, residual {residual:e})"
    )]
    NonConvergence {
        best: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("random regular pairing rejected {attempts} times")]
    RetryLimit { attempts: usize },

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
