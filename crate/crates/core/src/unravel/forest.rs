//! The forest of non-backtracking walks of length `1..=r+1` and the test
//! vector weighted by the non-backtracking Markov chain.
//!
//! A walk `w = (v_0, ..., v_i)` sits at level `i`. The chain starts from a
//! uniform directed edge and moves to a uniform non-reversing continuation,
//! so `P(Y_i = w) = 1 / (|W_1| * prod_{j=1}^{i-1} (d(v_j) - 1))`. The test
//! vector is `f(w) = x_i * sqrt(P(Y_i = w))` where `x` is the Perron vector
//! of the path on `r + 1` vertices.
//!
//! Components `T_e` are regenerated depth-first on demand and never stored
//! together.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{subtree_sizes, DirectedEdges, NbWalk};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::spectral::path_eigenvector;

/// `P(Y_i = w)`. The numerator is always one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum WalkProbability {
    Exact { denominator: u128 },
    Log { ln: f64 },
}

impl WalkProbability {
    pub fn value(&self) -> f64 {
        match *self {
            WalkProbability::Exact { denominator } => (denominator as f64).recip(),
            WalkProbability::Log { ln } => ln.exp(),
        }
    }

    pub fn sqrt(&self) -> f64 {
        match *self {
            WalkProbability::Exact { denominator } => (denominator as f64).sqrt().recip(),
            WalkProbability::Log { ln } => (0.5 * ln).exp(),
        }
    }

    fn divided_by(self, k: usize) -> Self {
        match self {
            WalkProbability::Exact { denominator } => WalkProbability::Exact {
                denominator: denominator * k as u128,
            },
            WalkProbability::Log { ln } => WalkProbability::Log {
                ln: ln - (k as f64).ln(),
            },
        }
    }

    fn as_rational(&self) -> Option<BigRational> {
        match *self {
            WalkProbability::Exact { denominator } => {
                Some(BigRational::new(BigInt::one(), BigInt::from(denominator)))
            }
            WalkProbability::Log { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ProbabilityMode {
    /// Exact denominators when they fit in 128 bits, log-space otherwise.
    #[default]
    Auto,
    ForceLog,
}

/// One forest node as seen by a visitor.
#[derive(Debug)]
pub struct ForestNode<'a> {
    pub walk: &'a [Vertex],
    /// Walk length, `1..=r+1`.
    pub level: usize,
    pub probability: WalkProbability,
    /// Test-vector entry `f(w)`.
    pub value: f64,
}

pub struct WalkForest<'g> {
    graph: &'g Graph,
    edges: DirectedEdges,
    radius: usize,
    path_vector: Vec<f64>,
    exact: bool,
    node_count: u128,
}

pub fn build_walk_forest<'g>(graph: &'g Graph, r: usize, cap: u64) -> Result<WalkForest<'g>> {
    build_walk_forest_with(graph, r, cap, ProbabilityMode::Auto)
}

pub fn build_walk_forest_with<'g>(
    graph: &'g Graph,
    r: usize,
    cap: u64,
    mode: ProbabilityMode,
) -> Result<WalkForest<'g>> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let min = graph.min_degree();
    if min < 2 {
        return Err(Error::MinDegree {
            required: 2,
            found: min,
        });
    }
    let edges = DirectedEdges::new(graph);
    let node_count = subtree_sizes(&edges, r)
        .into_iter()
        .fold(0u128, u128::saturating_add);
    if node_count > cap as u128 {
        return Err(Error::CapExceeded {
            cap,
            partial: node_count.min(u64::MAX as u128) as u64,
        });
    }
    let branching = (graph.max_degree() - 1) as u128;
    let exact = mode == ProbabilityMode::Auto
        && (0..r)
            .try_fold(edges.len() as u128, |acc, _| acc.checked_mul(branching))
            .is_some();
    Ok(WalkForest {
        graph,
        edges,
        radius: r,
        path_vector: path_eigenvector(r + 1)?,
        exact,
        node_count,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarginalCheck {
    pub levels: usize,
    /// `sum_{w in W_i} P(Y_i = w) = 1` at every level.
    pub normalized: bool,
    /// Mass of walks ending with each directed edge is `1 / |W_1|`.
    pub stationary: bool,
    /// Mass of walks ending at `u` is `d(u) / |W_1|`.
    pub terminal_degree: bool,
}

impl MarginalCheck {
    pub fn all_hold(&self) -> bool {
        self.normalized && self.stationary && self.terminal_degree
    }
}

impl<'g> WalkForest<'g> {
    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// `|W_1| = 2|E|`, the number of components.
    pub fn component_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_count(&self) -> u128 {
        self.node_count
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Path eigenvalue `2 cos(pi / (r + 2))` weighting the levels.
    pub fn path_eigenvalue(&self) -> f64 {
        2.0 * (std::f64::consts::PI / (self.radius as f64 + 2.0)).cos()
    }

    pub fn directed_edge(&self, e: usize) -> (Vertex, Vertex) {
        self.edges.endpoints(e)
    }

    fn root_probability(&self) -> WalkProbability {
        let w1 = self.edges.len();
        if self.exact {
            WalkProbability::Exact {
                denominator: w1 as u128,
            }
        } else {
            WalkProbability::Log {
                ln: -(w1 as f64).ln(),
            }
        }
    }

    /// Depth-first traversal of `T_e`; the visitor also receives the parent
    /// node's test value.
    pub fn visit_component(&self, e: usize, mut visit: impl FnMut(&ForestNode<'_>, Option<f64>)) {
        let (u, v) = self.edges.endpoints(e);
        let mut walk = vec![u, v];
        self.descend(e, &mut walk, self.root_probability(), None, &mut visit);
    }

    pub fn visit_all(&self, mut visit: impl FnMut(&ForestNode<'_>, Option<f64>)) {
        for e in 0..self.edges.len() {
            self.visit_component(e, &mut visit);
        }
    }

    fn descend(
        &self,
        e: usize,
        walk: &mut Vec<Vertex>,
        probability: WalkProbability,
        parent_value: Option<f64>,
        visit: &mut impl FnMut(&ForestNode<'_>, Option<f64>),
    ) {
        let level = walk.len() - 1;
        let value = self.path_vector[level - 1] * probability.sqrt();
        visit(
            &ForestNode {
                walk,
                level,
                probability,
                value,
            },
            parent_value,
        );
        if level == self.radius + 1 {
            return;
        }
        let child_probability = probability.divided_by(self.edges.successor_count(e));
        for f in self.edges.successors(e) {
            walk.push(self.edges.head(f));
            self.descend(f, walk, child_probability, Some(value), visit);
            walk.pop();
        }
    }

    /// `(<f, f>, <f, A f>)` summed over the whole forest.
    ///
    /// Both sums are compensated; forests reach millions of nodes.
    pub fn rayleigh_parts(&self) -> (f64, f64) {
        let mut ff = CompensatedSum::default();
        let mut faf = CompensatedSum::default();
        self.visit_all(|node, parent| {
            ff.add(node.value * node.value);
            if let Some(p) = parent {
                faf.add(2.0 * p * node.value);
            }
        });
        (ff.total(), faf.total())
    }

    /// Exact rational check of the level marginals. Only available when the
    /// probabilities are exact.
    pub fn marginal_check(&self) -> Result<MarginalCheck> {
        if !self.exact {
            return Err(Error::InvalidParameters(
                "marginal check needs exact probabilities".into(),
            ));
        }
        let levels = self.radius + 1;
        let m = self.edges.len();
        let n = self.graph.vertex_count();
        let mut by_edge = vec![vec![BigRational::zero(); m]; levels];
        let mut by_terminal = vec![vec![BigRational::zero(); n]; levels];
        for e in 0..m {
            self.visit_component(e, |node, _| {
                let p = node.probability.as_rational().expect("exact forest");
                let k = node.walk.len();
                let edge = self
                    .edges
                    .find(node.walk[k - 2], node.walk[k - 1])
                    .expect("walk steps are edges");
                by_edge[node.level - 1][edge] += &p;
                by_terminal[node.level - 1][node.walk[k - 1]] += p;
            });
        }
        let w1 = BigInt::from(m);
        let uniform = BigRational::new(BigInt::one(), w1.clone());
        let stationary = by_edge
            .iter()
            .all(|level| level.iter().all(|p| *p == uniform));
        let terminal_degree = by_terminal.iter().all(|level| {
            level.iter().enumerate().all(|(u, p)| {
                *p == BigRational::new(BigInt::from(self.graph.degree(u)), w1.clone())
            })
        });
        let normalized = by_terminal.iter().all(|level| {
            level
                .iter()
                .fold(BigRational::zero(), |acc, p| acc + p)
                .is_one()
        });
        Ok(MarginalCheck {
            levels,
            normalized,
            stationary,
            terminal_degree,
        })
    }

    /// Walks of `T_e` in traversal order with the index of each parent.
    pub fn component_walks(&self, e: usize) -> Vec<(NbWalk, Option<usize>)> {
        let mut out: Vec<(NbWalk, Option<usize>)> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        self.visit_component(e, |node, _| {
            stack.truncate(node.level - 1);
            let parent = stack.last().copied();
            stack.push(out.len());
            out.push((
                NbWalk {
                    vertices: node.walk.to_vec(),
                },
                parent,
            ));
        });
        out
    }
}

/// Neumaier summation.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Identifies the forest node `(v_0, v_1, ..., v_i)` with the node
/// `(v_1, ..., v_i)` of `G~(v_1, r)`.
pub fn embed_in_unraveled_ball(walk: &NbWalk) -> NbWalk {
    NbWalk {
        vertices: walk.vertices[1..].to_vec(),
    }
}

/// `<f, A f> / <f, f>` for the forest test vector.
pub fn test_vector_rayleigh(forest: &WalkForest<'_>) -> f64 {
    let (ff, faf) = forest.rayleigh_parts();
    faf / ff
}
