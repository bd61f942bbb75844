//! Non-backtracking walks and the trees built from them.
//!
//! A walk `(v_0, ..., v_i)` is non-backtracking when `v_j != v_{j+2}`. The
//! unraveled ball `G~(v, r)` has one node per non-backtracking walk of
//! length at most `r` from `v`, with a walk adjacent to its one-step
//! extensions. It is the radius-`r` ball of the universal cover.

mod cover;
mod forest;

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ball_subgraph, Graph, Vertex};
use crate::spectral::{closed_walk_counts, spectral_radius, SpectralEstimate};

pub use cover::{
    cover_lower_bound, cover_spectral_radius, find_max_unraveled_vertex, forest_spectral_radius,
    unraveled_ball_radius, CoverBracket, MaxUnraveled, PivotSolver, BISECTION_WIDTH,
};
pub use forest::{
    build_walk_forest, build_walk_forest_with, embed_in_unraveled_ball, test_vector_rayleigh,
    ForestNode, MarginalCheck, ProbabilityMode, WalkForest, WalkProbability,
};

pub const DEFAULT_BALL_CAP: u64 = 1_000_000;
pub const DEFAULT_FOREST_CAP: u64 = 10_000_000;

/// A walk given by its vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NbWalk {
    pub vertices: Vec<Vertex>,
}

impl NbWalk {
    pub fn length(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn terminal(&self) -> Vertex {
        *self.vertices.last().expect("walks are nonempty")
    }

    /// Consecutive vertices adjacent and no immediate reversal.
    pub fn is_valid_in(&self, graph: &Graph) -> bool {
        !self.vertices.is_empty()
            && self.vertices.iter().all(|&v| v < graph.vertex_count())
            && self.vertices.windows(2).all(|w| graph.has_edge(w[0], w[1]))
            && self.vertices.windows(3).all(|w| w[0] != w[2])
    }
}

/// Directed edges `(u, v)` of a graph numbered in lexicographic order,
/// i.e. the length-one walks.
#[derive(Clone, Debug)]
pub struct DirectedEdges {
    offsets: Vec<usize>,
    tail: Vec<Vertex>,
    head: Vec<Vertex>,
    reverse: Vec<usize>,
}

impl DirectedEdges {
    pub fn new(graph: &Graph) -> Self {
        let n = graph.vertex_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut tail = Vec::new();
        let mut head = Vec::new();
        offsets.push(0);
        for u in 0..n {
            for &v in graph.neighbors(u) {
                tail.push(u);
                head.push(v);
            }
            offsets.push(head.len());
        }
        let reverse = (0..head.len())
            .map(|e| {
                let (u, v) = (tail[e], head[e]);
                let pos = graph
                    .neighbors(v)
                    .binary_search(&u)
                    .expect("symmetric adjacency");
                offsets[v] + pos
            })
            .collect();
        DirectedEdges {
            offsets,
            tail,
            head,
            reverse,
        }
    }

    pub fn len(&self) -> usize {
        self.head.len()
    }

    pub fn is_empty(&self) -> bool {
        self.head.is_empty()
    }

    pub fn tail(&self, e: usize) -> Vertex {
        self.tail[e]
    }

    pub fn head(&self, e: usize) -> Vertex {
        self.head[e]
    }

    pub fn endpoints(&self, e: usize) -> (Vertex, Vertex) {
        (self.tail[e], self.head[e])
    }

    pub fn out_edges(&self, u: Vertex) -> std::ops::Range<usize> {
        self.offsets[u]..self.offsets[u + 1]
    }

    /// Directed edges that continue `e` without backtracking.
    pub fn successors(&self, e: usize) -> impl Iterator<Item = usize> + '_ {
        let back = self.reverse[e];
        self.out_edges(self.head[e]).filter(move |&f| f != back)
    }

    pub fn successor_count(&self, e: usize) -> usize {
        self.out_edges(self.head[e]).len() - 1
    }

    pub fn find(&self, u: Vertex, v: Vertex) -> Option<usize> {
        let range = self.out_edges(u);
        self.head[range.clone()]
            .binary_search(&v)
            .ok()
            .map(|pos| range.start + pos)
    }
}

/// Number of nodes of `G~(v, r)` computed without enumerating them,
/// saturating at `u128::MAX`.
pub fn unraveled_ball_size(graph: &Graph, v: Vertex, r: usize) -> Result<u128> {
    graph.check_vertex(v)?;
    if r == 0 {
        return Ok(1);
    }
    let edges = DirectedEdges::new(graph);
    let below = subtree_sizes(&edges, r - 1);
    Ok(edges
        .out_edges(v)
        .fold(1u128, |acc, e| acc.saturating_add(below[e])))
}

/// `sizes[e]` = nodes in the subtree of a walk ending with `e` that has
/// `depth` further levels below it.
pub(crate) fn subtree_sizes(edges: &DirectedEdges, depth: usize) -> Vec<u128> {
    let mut sizes = vec![1u128; edges.len()];
    for _ in 0..depth {
        sizes = (0..edges.len())
            .map(|e| {
                edges
                    .successors(e)
                    .fold(1u128, |acc, f| acc.saturating_add(sizes[f]))
            })
            .collect();
    }
    sizes
}

/// Materialized unraveled ball. Node 0 is the root walk `(v)`; nodes are
/// numbered in depth-first preorder with neighbors taken in increasing id.
#[derive(Clone, Debug)]
pub struct UnraveledBall {
    pub root: Vertex,
    pub radius: usize,
    /// `parent[0]` is `None`.
    pub parent: Vec<Option<usize>>,
    /// Terminal vertex of each node's walk.
    pub label: Vec<Vertex>,
    pub depth: Vec<usize>,
    tree: Graph,
}

impl UnraveledBall {
    pub fn node_count(&self) -> usize {
        self.label.len()
    }

    /// The tree as a graph on node ids.
    pub fn tree(&self) -> &Graph {
        &self.tree
    }

    /// The walk a node stands for.
    pub fn walk(&self, node: usize) -> NbWalk {
        let mut vertices = vec![self.label[node]];
        let mut cur = node;
        while let Some(p) = self.parent[cur] {
            vertices.push(self.label[p]);
            cur = p;
        }
        vertices.reverse();
        NbWalk { vertices }
    }

    pub fn spectral_radius(&self, tol: f64) -> Result<SpectralEstimate> {
        spectral_radius(&self.tree, tol)
    }

    /// Tree edges as `parent child` lines.
    pub fn to_edge_list(&self) -> String {
        crate::graph::write_edge_list(&self.tree)
    }

    /// Sidecar mapping node id to the original terminal vertex.
    pub fn label_sidecar(&self) -> String {
        let mut out = String::from("# node label\n");
        for (node, label) in self.label.iter().enumerate() {
            writeln!(out, "{node} {label}").unwrap();
        }
        out
    }

    /// Node index of every walk, for lookups in tests and embeddings.
    pub fn walk_index(&self) -> HashMap<NbWalk, usize> {
        (0..self.node_count()).map(|i| (self.walk(i), i)).collect()
    }
}

/// Depth-first enumeration of all non-backtracking walks of length at most
/// `max_len` from `v`. Fails once more than `cap` nodes would be produced.
pub fn enumerate_nb_walks(
    graph: &Graph,
    v: Vertex,
    max_len: usize,
    cap: u64,
) -> Result<UnraveledBall> {
    graph.check_vertex(v)?;
    if cap == 0 {
        return Err(Error::InvalidParameters("node cap must be positive".into()));
    }
    let mut parent = vec![None];
    let mut label = vec![v];
    let mut depth = vec![0];
    // (node, previous vertex, next neighbor index)
    let mut stack: Vec<(usize, Option<Vertex>, usize)> = vec![(0, None, 0)];
    while let Some(top) = stack.last_mut() {
        let (node, prev, next) = *top;
        let u = label[node];
        let neighbors = graph.neighbors(u);
        if depth[node] == max_len || next >= neighbors.len() {
            stack.pop();
            continue;
        }
        top.2 += 1;
        let w = neighbors[next];
        if Some(w) == prev {
            continue;
        }
        if label.len() as u64 >= cap {
            return Err(Error::CapExceeded {
                cap,
                partial: label.len() as u64,
            });
        }
        let child = label.len();
        parent.push(Some(node));
        label.push(w);
        depth.push(depth[node] + 1);
        stack.push((child, Some(u), 0));
    }
    let edges: Vec<_> = parent
        .iter()
        .enumerate()
        .filter_map(|(c, p)| p.map(|p| (p, c)))
        .collect();
    let tree = Graph::from_edges(label.len(), &edges)?;
    Ok(UnraveledBall {
        root: v,
        radius: max_len,
        parent,
        label,
        depth,
        tree,
    })
}

/// `G~(v, r)`, materialized.
pub fn unraveled_ball(graph: &Graph, v: Vertex, r: usize, cap: u64) -> Result<UnraveledBall> {
    enumerate_nb_walks(graph, v, r, cap)
}

/// Exact closed-walk counts at `v` in the ball `G(v, r)` and at the root of
/// `G~(v, r)` for `k = 0..=max_length`.
#[derive(Clone, Debug, Serialize)]
pub struct InjectionCheck {
    pub vertex: Vertex,
    pub radius: usize,
    pub ball: crate::spectral::ClosedWalkCounts,
    pub unraveled: crate::spectral::ClosedWalkCounts,
}

impl InjectionCheck {
    /// Every ball count dominates the corresponding cover count.
    pub fn holds(&self) -> bool {
        self.ball
            .counts
            .iter()
            .zip(&self.unraveled.counts)
            .all(|(b, u)| b >= u)
    }

    /// Smallest `ball - unraveled` difference as a float (0 when equal).
    pub fn min_gap(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.ball
            .counts
            .iter()
            .zip(&self.unraveled.counts)
            .map(|(b, u)| {
                if b >= u {
                    (b - u).to_f64().unwrap_or(f64::MAX)
                } else {
                    -(u - b).to_f64().unwrap_or(f64::MAX)
                }
            })
            .fold(f64::INFINITY, f64::min)
    }
}

pub const INJECTION_NODE_CAP: u64 = 5000;

/// Counts closed walks of every length up to `max_length` at `v` in
/// `G(v, r)` and at the root of `G~(v, r)`. Mapping a cover walk to the walk
/// of its terminal vertices is injective, so the ball side must dominate.
pub fn closed_walk_injection_check(
    graph: &Graph,
    v: Vertex,
    r: usize,
    max_length: usize,
) -> Result<InjectionCheck> {
    closed_walk_injection_check_with_cap(graph, v, r, max_length, INJECTION_NODE_CAP)
}

pub fn closed_walk_injection_check_with_cap(
    graph: &Graph,
    v: Vertex,
    r: usize,
    max_length: usize,
    cap: u64,
) -> Result<InjectionCheck> {
    let ball = ball_subgraph(graph, v, r)?;
    let local = ball.local(v).expect("center lies in its ball");
    let cover = unraveled_ball(graph, v, r, cap)?;
    Ok(InjectionCheck {
        vertex: v,
        radius: r,
        ball: closed_walk_counts(&ball.graph, local, max_length)?,
        unraveled: closed_walk_counts(cover.tree(), 0, max_length)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, d_regular_tree, path, petersen};
    use crate::graph::{ball, induced_subgraph};
    use num_traits::ToPrimitive;

    /// Brute force: extend every walk by every neighbor, keep the
    /// non-backtracking ones.
    fn brute_force_walks(g: &Graph, v: Vertex, max_len: usize) -> Vec<NbWalk> {
        let mut all = vec![NbWalk { vertices: vec![v] }];
        let mut frontier = all.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for u in 0..g.vertex_count() {
                    let mut vs = w.vertices.clone();
                    vs.push(u);
                    let cand = NbWalk { vertices: vs };
                    if cand.is_valid_in(g) {
                        next.push(cand);
                    }
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        all.sort();
        all
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for (g, v, len) in [
            (complete(4).unwrap(), 0, 2),
            (petersen().unwrap(), 3, 3),
            (cycle(7).unwrap(), 2, 5),
        ] {
            let tree = enumerate_nb_walks(&g, v, len, 1_000_000).unwrap();
            let mut walks: Vec<_> = (0..tree.node_count()).map(|i| tree.walk(i)).collect();
            walks.sort();
            assert_eq!(walks, brute_force_walks(&g, v, len));
            assert_eq!(
                unraveled_ball_size(&g, v, len).unwrap(),
                tree.node_count() as u128
            );
        }
    }

    #[test]
    fn small_examples() {
        assert_eq!(
            enumerate_nb_walks(&complete(4).unwrap(), 0, 2, 100)
                .unwrap()
                .node_count(),
            10
        );
        let c = enumerate_nb_walks(&cycle(12).unwrap(), 0, 4, 100).unwrap();
        assert_eq!(c.node_count(), 9);
        assert_eq!(c.tree().max_degree(), 2);
        let single = enumerate_nb_walks(&Graph::empty(3), 1, 5, 10).unwrap();
        assert_eq!(single.node_count(), 1);
        let edge = unraveled_ball(&path(2).unwrap(), 0, 7, 10).unwrap();
        assert_eq!(edge.node_count(), 2);
    }

    #[test]
    fn cap_is_enforced() {
        match enumerate_nb_walks(&complete(5).unwrap(), 0, 6, 100) {
            Err(Error::CapExceeded { cap, partial }) => assert_eq!((cap, partial), (100, 100)),
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn regular_graphs_unravel_to_regular_trees() {
        let g = petersen().unwrap();
        for r in 1..5 {
            let b = unraveled_ball(&g, 0, r, 1_000_000).unwrap();
            let expected = 1 + 3 * (2usize.pow(r as u32) - 1);
            assert_eq!(b.node_count(), expected);
            let tree = d_regular_tree(3, r).unwrap();
            let a = b.spectral_radius(1e-11).unwrap().value;
            let t = crate::spectral::spectral_radius(&tree, 1e-11)
                .unwrap()
                .value;
            assert!((a - t).abs() < 1e-9);
        }
    }

    #[test]
    fn trees_are_their_own_cover() {
        let t = d_regular_tree(3, 3).unwrap();
        for r in 0..5 {
            let b = unraveled_ball(&t, 4, r, 10_000).unwrap();
            let induced = induced_subgraph(&t, &ball(&t, 4, r).unwrap()).unwrap();
            assert_eq!(b.node_count(), induced.graph.vertex_count());
            assert_eq!(b.tree().edge_count(), induced.graph.edge_count());
            let mut labels = b.label.clone();
            labels.sort();
            assert_eq!(labels, induced.to_original);
        }
    }

    #[test]
    fn export_formats() {
        let b = unraveled_ball(&cycle(5).unwrap(), 0, 2, 100).unwrap();
        let edges = crate::graph::parse_edge_list(&b.to_edge_list()).unwrap();
        assert_eq!(edges.edge_count(), 4);
        let sidecar = b.label_sidecar();
        assert_eq!(sidecar.lines().count(), 6);
        assert!(sidecar.lines().nth(1).unwrap().starts_with("0 0"));
    }

    #[test]
    fn directed_edges_layout() {
        let g = complete(4).unwrap();
        let e = DirectedEdges::new(&g);
        assert_eq!(e.len(), 12);
        let pairs: Vec<_> = (0..e.len()).map(|i| e.endpoints(i)).collect();
        let mut sorted = pairs.clone();
        sorted.sort();
        assert_eq!(pairs, sorted);
        let id = e.find(1, 3).unwrap();
        let succ: Vec<_> = e.successors(id).map(|f| e.endpoints(f)).collect();
        assert_eq!(succ, vec![(3, 0), (3, 2)]);
        assert_eq!(e.find(3, 3), None);
    }

    #[test]
    fn injection_examples() {
        let t = d_regular_tree(2, 3).unwrap();
        let check = closed_walk_injection_check(&t, 0, 2, 10).unwrap();
        assert_eq!(check.ball.counts, check.unraveled.counts);
        let c5 = closed_walk_injection_check(&cycle(5).unwrap(), 0, 2, 4).unwrap();
        assert_eq!(c5.ball.counts[4].to_u64(), Some(6));
        // 5-node path, middle vertex: 4-step closed walks.
        assert_eq!(c5.unraveled.counts[4].to_u64(), Some(6));
        assert!(c5.holds());
        assert!(closed_walk_injection_check(&complete(4).unwrap(), 0, 2, 8)
            .unwrap()
            .holds());
    }
}
