//! Adjacency spectra: spectral radius, second largest and smallest
//! eigenvalues, path closed forms, Rayleigh quotients and exact closed-walk
//! counts.
//!
//! Sparse solves run power iteration per connected component. Below
//! [`EigenConfig::dense_threshold`] vertices, `lambda_2` and `lambda_min`
//! come from a dense symmetric eigendecomposition instead.

mod dense;
mod power;
mod walks;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{component_subgraphs, Graph};

pub use dense::dense_spectrum;
pub use power::{default_max_iterations, top_eigenpair, Eigenpair, SymmetricOperator};
pub use walks::{
    all_closed_walk_counts, closed_walk_counts, growth_is_monotone, ln_biguint,
    walk_growth_estimate, ClosedWalkCounts,
};

pub const DEFAULT_EIG_TOL: f64 = 1e-10;
pub const DEFAULT_DENSE_THRESHOLD: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Power,
    Dense,
    ClosedForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub value: f64,
    /// `||A x - value x||` for the unit Ritz vector `x`.
    pub residual: f64,
    pub iterations: usize,
    pub method: Method,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda_min: f64,
    pub n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenConfig {
    pub tol: f64,
    /// `None` picks [`default_max_iterations`] for the operator size.
    pub max_iterations: Option<usize>,
    pub dense_threshold: usize,
}

impl Default for EigenConfig {
    fn default() -> Self {
        EigenConfig {
            tol: DEFAULT_EIG_TOL,
            max_iterations: None,
            dense_threshold: DEFAULT_DENSE_THRESHOLD,
        }
    }
}

impl EigenConfig {
    pub fn with_tol(tol: f64) -> Self {
        EigenConfig {
            tol,
            ..Self::default()
        }
    }

    fn iterations_for(&self, n: usize) -> usize {
        self.max_iterations
            .unwrap_or_else(|| default_max_iterations(n))
    }
}

/// Largest eigenvalue with its Perron vector, per component.
struct ComponentTop {
    pair: Eigenpair,
}

fn component_tops(
    graph: &Graph,
    cfg: &EigenConfig,
) -> Result<Vec<(crate::graph::Subgraph, ComponentTop)>> {
    component_subgraphs(graph)
        .into_iter()
        .map(|sub| {
            let pair = top_eigenpair(
                &sub.graph,
                cfg.tol,
                cfg.iterations_for(sub.graph.vertex_count()),
            )?;
            Ok((sub, ComponentTop { pair }))
        })
        .collect()
}

/// Spectral radius with its certificate: the value is the Rayleigh quotient
/// of a unit vector whose residual is at most `tol`.
pub fn spectral_radius(graph: &Graph, tol: f64) -> Result<SpectralEstimate> {
    spectral_radius_with(graph, &EigenConfig::with_tol(tol))
}

pub fn spectral_radius_with(graph: &Graph, cfg: &EigenConfig) -> Result<SpectralEstimate> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if graph.edge_count() == 0 {
        return Ok(SpectralEstimate {
            value: 0.0,
            residual: 0.0,
            iterations: 0,
            method: Method::ClosedForm,
        });
    }
    let mut best: Option<SpectralEstimate> = None;
    for sub in component_subgraphs(graph) {
        if sub.graph.edge_count() == 0 {
            continue;
        }
        let pair = top_eigenpair(
            &sub.graph,
            cfg.tol,
            cfg.iterations_for(sub.graph.vertex_count()),
        )?;
        let estimate = SpectralEstimate {
            value: pair.value,
            residual: pair.residual,
            iterations: pair.iterations,
            method: Method::Power,
        };
        if best.is_none_or(|b| estimate.value > b.value) {
            best = Some(estimate);
        }
    }
    Ok(best.expect("a graph with edges has a component with edges"))
}

/// `lambda_1(P_n) = 2 cos(pi / (n + 1))`.
pub fn path_spectral_radius(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameters(
            "path needs at least one vertex".into(),
        ));
    }
    Ok(2.0 * (PI / (n as f64 + 1.0)).cos())
}

/// Perron vector of `P_n`, `x_i = sin(i pi / (n + 1))`, unit length.
pub fn path_eigenvector(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameters(
            "path needs at least one vertex".into(),
        ));
    }
    let step = PI / (n as f64 + 1.0);
    let mut x: Vec<f64> = (1..=n).map(|i| (i as f64 * step).sin()).collect();
    let norm = power::norm(&x);
    x.iter_mut().for_each(|v| *v /= norm);
    Ok(x)
}

/// `<f, M f> / <f, f>` with one operator application.
pub fn rayleigh_quotient(op: &impl SymmetricOperator, f: &[f64]) -> Result<f64> {
    if f.len() != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            found: f.len(),
        });
    }
    let ff = power::dot(f, f);
    if ff == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut af = vec![0.0; f.len()];
    op.apply(f, &mut af);
    Ok(power::dot(f, &af) / ff)
}

/// Second largest eigenvalue (with multiplicity) of the adjacency matrix.
pub fn second_largest_eigenvalue(graph: &Graph, tol: f64) -> Result<f64> {
    second_largest_eigenvalue_with(graph, &EigenConfig::with_tol(tol))
}

pub fn second_largest_eigenvalue_with(graph: &Graph, cfg: &EigenConfig) -> Result<f64> {
    let n = graph.vertex_count();
    if n < 2 {
        return Err(Error::InvalidParameters(format!(
            "second eigenvalue needs at least 2 vertices, got {n}"
        )));
    }
    if n <= cfg.dense_threshold {
        let spectrum = dense_spectrum(graph);
        return Ok(spectrum[n - 2]);
    }
    // Second element of the multiset union of the component spectra.
    let mut candidates = Vec::new();
    for (sub, top) in component_tops(graph, cfg)? {
        let lambda1 = top.pair.value;
        candidates.push(lambda1);
        let size = sub.graph.vertex_count();
        if size < 2 {
            continue;
        }
        let unit = {
            let mut v = top.pair.vector.clone();
            let nv = power::norm(&v);
            v.iter_mut().for_each(|x| *x /= nv);
            v
        };
        let deflated = power::shifted_top_eigenvalue(
            &sub.graph,
            lambda1,
            1.0,
            &[unit],
            cfg.tol,
            cfg.iterations_for(size),
        )?;
        candidates.push(deflated.value - lambda1);
    }
    candidates.sort_by(|a, b| b.total_cmp(a));
    Ok(candidates[1])
}

/// Smallest eigenvalue of the adjacency matrix.
pub fn smallest_eigenvalue(graph: &Graph, tol: f64) -> Result<f64> {
    smallest_eigenvalue_with(graph, &EigenConfig::with_tol(tol))
}

pub fn smallest_eigenvalue_with(graph: &Graph, cfg: &EigenConfig) -> Result<f64> {
    let n = graph.vertex_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n <= cfg.dense_threshold {
        return Ok(dense_spectrum(graph)[0]);
    }
    let mut smallest = f64::INFINITY;
    for (sub, top) in component_tops(graph, cfg)? {
        let lambda1 = top.pair.value;
        let value = if sub.graph.edge_count() == 0 {
            0.0
        } else {
            let pair = power::shifted_top_eigenvalue(
                &sub.graph,
                lambda1,
                -1.0,
                &[],
                cfg.tol,
                cfg.iterations_for(sub.graph.vertex_count()),
            )?;
            lambda1 - pair.value
        };
        smallest = smallest.min(value);
    }
    Ok(smallest)
}

pub fn spectrum_summary(graph: &Graph, cfg: &EigenConfig) -> Result<SpectrumSummary> {
    let n = graph.vertex_count();
    if n <= cfg.dense_threshold && n >= 2 {
        let spectrum = dense_spectrum(graph);
        return Ok(SpectrumSummary {
            lambda1: spectrum[n - 1],
            lambda2: spectrum[n - 2],
            lambda_min: spectrum[0],
            n,
        });
    }
    Ok(SpectrumSummary {
        lambda1: spectral_radius_with(graph, cfg)?.value,
        lambda2: second_largest_eigenvalue_with(graph, cfg)?,
        lambda_min: smallest_eigenvalue_with(graph, cfg)?,
        n,
    })
}
