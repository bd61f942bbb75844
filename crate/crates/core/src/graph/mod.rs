//! Undirected simple graphs and the combinatorial operations the bounds are
//! stated in terms of: balls, induced subgraphs, ball deletion, leaf
//! stripping and robust average degree.
//!
//! Degrees and average degrees are exact rationals. Floating point only
//! enters when a bound formula is evaluated.

mod io;

use std::collections::{BTreeMap, VecDeque};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{parse_edge_list, write_edge_list};

pub type Vertex = usize;

/// Exact average degree `2|E| / |V|`.
pub type AverageDegree = Ratio<u64>;

/// Undirected simple graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    adjacency: Vec<Vec<Vertex>>,
    edge_count: usize,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertex_count: usize,
    adjacency: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;

    fn try_from(repr: GraphRepr) -> Result<Self> {
        if repr.adjacency.len() != repr.vertex_count {
            return Err(Error::DimensionMismatch {
                expected: repr.vertex_count,
                found: repr.adjacency.len(),
            });
        }
        let graph = Graph::from_adjacency(repr.adjacency)?;
        if graph.edge_count != repr.edge_count {
            return Err(Error::InvalidParameters(format!(
                "edge_count {} disagrees with adjacency ({} edges)",
                repr.edge_count, graph.edge_count
            )));
        }
        Ok(graph)
    }
}

impl From<Graph> for GraphRepr {
    fn from(graph: Graph) -> Self {
        GraphRepr {
            vertex_count: graph.vertex_count(),
            edge_count: graph.edge_count,
            adjacency: graph.adjacency,
        }
    }
}

impl Graph {
    pub fn empty(vertex_count: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); vertex_count],
            edge_count: 0,
        }
    }

    /// Builds a graph from an undirected edge list. Self-loops, repeated
    /// edges and out-of-range endpoints are rejected.
    pub fn from_edges(vertex_count: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= vertex_count {
                    return Err(Error::InvalidVertex {
                        vertex: x,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::NotSimple(format!("self-loop at vertex {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::NotSimple(format!("repeated edge {{{u}, {}}}", w[0])));
            }
        }
        Ok(Graph {
            adjacency,
            edge_count: edges.len(),
        })
    }

    /// Builds a graph from per-vertex neighbor lists, validating symmetry and
    /// simplicity. Lists need not be sorted.
    pub fn from_adjacency(mut adjacency: Vec<Vec<Vertex>>) -> Result<Self> {
        let n = adjacency.len();
        let mut degree_sum = 0;
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(&v) = list.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidVertex {
                    vertex: v,
                    vertex_count: n,
                });
            }
            if list.binary_search(&u).is_ok() {
                return Err(Error::NotSimple(format!("self-loop at vertex {u}")));
            }
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::NotSimple(format!("repeated edge {{{u}, {}}}", w[0])));
            }
            degree_sum += list.len();
        }
        for u in 0..n {
            for &v in &adjacency[u] {
                if adjacency[v].binary_search(&u).is_err() {
                    return Err(Error::NotSimple(format!(
                        "asymmetric adjacency: {v} listed under {u} but not vice versa"
                    )));
                }
            }
        }
        Ok(Graph {
            adjacency,
            edge_count: degree_sum / 2,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn adjacency(&self) -> &[Vec<Vertex>] {
        &self.adjacency
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                vertex_count: self.vertex_count(),
            })
        }
    }

    pub fn min_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adjacency.first()?.len();
        self.adjacency.iter().all(|l| l.len() == d).then_some(d)
    }

    /// Average degree `2|E|/|V|`; the empty graph has average degree 0.
    pub fn average_degree(&self) -> AverageDegree {
        if self.is_empty() {
            Ratio::from_integer(0)
        } else {
            Ratio::new(2 * self.edge_count as u64, self.vertex_count() as u64)
        }
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let mut histogram = BTreeMap::new();
        for list in &self.adjacency {
            *histogram.entry(list.len()).or_insert(0) += 1;
        }
        DegreeStats {
            min_degree: self.min_degree(),
            max_degree: self.max_degree(),
            average_degree: self.average_degree(),
            histogram,
        }
    }

    /// Breadth-first distances from `source`, stopping at `max_radius`.
    pub fn bfs_distances(&self, source: Vertex, max_radius: Option<usize>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            if max_radius.is_some_and(|r| du >= r) {
                continue;
            }
            for &w in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeStats {
    pub min_degree: usize,
    pub max_degree: usize,
    pub average_degree: AverageDegree,
    pub histogram: BTreeMap<usize, usize>,
}

/// Subset of the vertices of a graph with `vertex_count` vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    mask: Vec<bool>,
    members: Vec<Vertex>,
}

impl VertexSet {
    pub fn new(vertex_count: usize, vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut mask = vec![false; vertex_count];
        for v in vertices {
            if v >= vertex_count {
                return Err(Error::InvalidVertex {
                    vertex: v,
                    vertex_count,
                });
            }
            mask[v] = true;
        }
        Ok(Self::from_mask(mask))
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        let members = mask
            .iter()
            .enumerate()
            .filter_map(|(v, &m)| m.then_some(v))
            .collect();
        VertexSet { mask, members }
    }

    pub fn all(vertex_count: usize) -> Self {
        Self::from_mask(vec![true; vertex_count])
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.mask.get(v).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in increasing order.
    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    pub fn universe_size(&self) -> usize {
        self.mask.len()
    }

    pub fn complement(&self) -> Self {
        Self::from_mask(self.mask.iter().map(|m| !m).collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.members.iter().all(|&v| other.contains(v))
    }
}

/// A graph derived from a parent graph together with the map from its
/// vertex ids back to the parent's ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: Graph,
    pub to_original: Vec<Vertex>,
}

impl Subgraph {
    pub fn original(&self, local: Vertex) -> Vertex {
        self.to_original[local]
    }

    /// Local id of an original vertex, if it survived.
    pub fn local(&self, original: Vertex) -> Option<Vertex> {
        self.to_original.binary_search(&original).ok()
    }
}

/// Vertices at distance at most `r` from `v`.
pub fn ball(graph: &Graph, v: Vertex, r: usize) -> Result<VertexSet> {
    graph.check_vertex(v)?;
    let dist = graph.bfs_distances(v, Some(r));
    Ok(VertexSet::from_mask(
        dist.iter().map(Option::is_some).collect(),
    ))
}

/// Induced subgraph on `set`, reindexed in increasing original id order.
pub fn induced_subgraph(graph: &Graph, set: &VertexSet) -> Result<Subgraph> {
    if set.universe_size() != graph.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.vertex_count(),
            found: set.universe_size(),
        });
    }
    let mut local = vec![usize::MAX; graph.vertex_count()];
    for (i, &v) in set.members().iter().enumerate() {
        local[v] = i;
    }
    let mut edge_count = 0;
    let adjacency: Vec<Vec<Vertex>> = set
        .members()
        .iter()
        .map(|&v| {
            let list: Vec<Vertex> = graph
                .neighbors(v)
                .iter()
                .filter(|&&w| set.contains(w))
                .map(|&w| local[w])
                .collect();
            edge_count += list.len();
            list
        })
        .collect();
    Ok(Subgraph {
        graph: Graph {
            adjacency,
            edge_count: edge_count / 2,
        },
        to_original: set.members().to_vec(),
    })
}

/// The ball `G(v, r)` as an induced subgraph.
pub fn ball_subgraph(graph: &Graph, v: Vertex, r: usize) -> Result<Subgraph> {
    induced_subgraph(graph, &ball(graph, v, r)?)
}

/// Induced subgraph on the complement of `ball(v, r)`.
pub fn delete_ball(graph: &Graph, v: Vertex, r: usize) -> Result<Subgraph> {
    induced_subgraph(graph, &ball(graph, v, r)?.complement())
}

/// Result of [`robust_average_degree`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RobustDegree {
    /// Minimum over centers of the average degree after deletion.
    pub value: AverageDegree,
    /// Smallest center attaining the minimum.
    pub witness: Option<Vertex>,
    /// Whether some deletion removes every vertex.
    pub empties: bool,
}

/// Average degree of `G - ball(v, r)` without materializing the subgraph.
fn average_degree_after_deletion(graph: &Graph, v: Vertex, r: usize) -> (AverageDegree, bool) {
    let dist = graph.bfs_distances(v, Some(r));
    let mut removed_vertices = 0u64;
    let mut touching = 0u64;
    let mut internal_twice = 0u64;
    for (u, d) in dist.iter().enumerate() {
        if d.is_some() {
            removed_vertices += 1;
            touching += graph.degree(u) as u64;
            internal_twice += graph
                .neighbors(u)
                .iter()
                .filter(|&&w| dist[w].is_some())
                .count() as u64;
        }
    }
    let remaining_vertices = graph.vertex_count() as u64 - removed_vertices;
    if remaining_vertices == 0 {
        return (Ratio::from_integer(0), true);
    }
    let removed_edges = touching - internal_twice / 2;
    let remaining_edges = graph.edge_count() as u64 - removed_edges;
    (Ratio::new(2 * remaining_edges, remaining_vertices), false)
}

/// Minimum over `v` of the average degree of `G - ball(v, r)`, with the
/// empty graph counted as average degree 0.
pub fn robust_average_degree(graph: &Graph, r: usize) -> RobustDegree {
    let per_vertex = crate::par::map_indices(graph.vertex_count(), |v| {
        average_degree_after_deletion(graph, v, r)
    });
    let mut best = RobustDegree {
        value: Ratio::from_integer(0),
        witness: None,
        empties: false,
    };
    for (v, (avg, empty)) in per_vertex.into_iter().enumerate() {
        best.empties |= empty;
        if best.witness.is_none() || avg < best.value {
            best.value = avg;
            best.witness = Some(v);
        }
    }
    best
}

/// Repeatedly removes vertices of degree at most one.
pub fn strip_leaves(graph: &Graph) -> Subgraph {
    let n = graph.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| graph.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut stack: Vec<Vertex> = (0..n).filter(|&v| degree[v] <= 1).collect();
    while let Some(u) = stack.pop() {
        if !alive[u] {
            continue;
        }
        alive[u] = false;
        for &w in graph.neighbors(u) {
            if alive[w] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    stack.push(w);
                }
            }
        }
    }
    induced_subgraph(graph, &VertexSet::from_mask(alive)).expect("mask sized to graph")
}

/// Connected components ordered by their smallest vertex.
pub fn connected_components(graph: &Graph) -> Vec<VertexSet> {
    let n = graph.vertex_count();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut mask = vec![false; n];
        let mut queue = VecDeque::from([s]);
        seen[s] = true;
        while let Some(u) = queue.pop_front() {
            mask[u] = true;
            for &w in graph.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        components.push(VertexSet::from_mask(mask));
    }
    components
}

/// Component subgraphs, ordered like [`connected_components`].
pub fn component_subgraphs(graph: &Graph) -> Vec<Subgraph> {
    connected_components(graph)
        .iter()
        .map(|c| induced_subgraph(graph, c).expect("component of this graph"))
        .collect()
}

/// BFS distance, `None` when `u` and `v` lie in different components.
pub fn distance(graph: &Graph, u: Vertex, v: Vertex) -> Result<Option<usize>> {
    graph.check_vertex(u)?;
    graph.check_vertex(v)?;
    Ok(graph.bfs_distances(u, None)[v])
}

/// Largest finite distance between two vertices.
pub fn diameter(graph: &Graph) -> usize {
    crate::par::map_indices(graph.vertex_count(), |v| {
        graph
            .bfs_distances(v, None)
            .into_iter()
            .flatten()
            .max()
            .unwrap_or(0)
    })
    .into_iter()
    .max()
    .unwrap_or(0)
}

/// A distance together with the two edges attaining it.
pub type EdgeDistance = (usize, (Vertex, Vertex), (Vertex, Vertex));

/// Largest distance between two edges, where the distance between edges is
/// the smallest distance between an endpoint of one and an endpoint of the
/// other. Edges in different components are skipped. Returns the distance
/// and a witness pair.
pub fn max_edge_distance(graph: &Graph) -> Option<EdgeDistance> {
    let edges: Vec<(Vertex, Vertex)> = graph.edges().collect();
    let per_edge = crate::par::map_indices(edges.len(), |i| {
        let (a, b) = edges[i];
        let da = graph.bfs_distances(a, None);
        let db = graph.bfs_distances(b, None);
        let near = |x: Vertex| match (da[x], db[x]) {
            (Some(p), Some(q)) => Some(p.min(q)),
            _ => None,
        };
        edges
            .iter()
            .enumerate()
            .filter_map(|(j, &(c, d))| Some((near(c)?.min(near(d)?), j)))
            .max_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)))
            .map(|(dist, j)| (dist, i, j))
    });
    per_edge
        .into_iter()
        .flatten()
        .max_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)))
        .map(|(dist, i, j)| (dist, edges[i], edges[j]))
}
