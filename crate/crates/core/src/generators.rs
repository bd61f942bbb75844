//! Seeded graph families used to build verification corpora.
//!
//! Every random family draws from a ChaCha8 stream keyed by the spec's
//! seed, so `generate` is a pure function of the spec.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Pairing-model restarts allowed before giving up.
pub const PAIRING_ATTEMPTS: usize = 1000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Path { n: usize },
    Cycle { n: usize },
    Complete { n: usize },
    CompleteBipartite { a: usize, b: usize },
    Star { k: usize },
    DRegularTree { d: usize, depth: usize },
    RandomRegular { n: usize, d: usize },
    ErdosRenyi { n: usize, p: f64 },
    RandomTree { n: usize },
    Petersen,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default)]
    pub seed: u64,
    /// Keep only the 2-core: repeatedly delete vertices of degree at most 1.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub strip_leaves: bool,
}

impl GenSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        GenSpec {
            family,
            seed,
            strip_leaves: false,
        }
    }

    pub fn stripped(mut self) -> Self {
        self.strip_leaves = true;
        self
    }

    /// File-name friendly identifier: `{family}-{params}-{seed}`.
    pub fn name(&self) -> String {
        let params = match &self.family {
            Family::Path { n } => format!("path-n{n}"),
            Family::Cycle { n } => format!("cycle-n{n}"),
            Family::Complete { n } => format!("complete-n{n}"),
            Family::CompleteBipartite { a, b } => format!("complete-bipartite-a{a}-b{b}"),
            Family::Star { k } => format!("star-k{k}"),
            Family::DRegularTree { d, depth } => format!("d-regular-tree-d{d}-depth{depth}"),
            Family::RandomRegular { n, d } => format!("random-regular-n{n}-d{d}"),
            Family::ErdosRenyi { n, p } => format!("erdos-renyi-n{n}-p{p}"),
            Family::RandomTree { n } => format!("random-tree-n{n}"),
            Family::Petersen => "petersen".to_string(),
        };
        let core = if self.strip_leaves { "-core" } else { "" };
        format!("{params}{core}-s{}", self.seed)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameters(msg));
        match self.family {
            Family::Path { n } | Family::Complete { n } | Family::RandomTree { n } if n == 0 => {
                bad("n must be at least 1".into())
            }
            Family::Cycle { n } if n < 3 => bad(format!("cycle needs n >= 3, got {n}")),
            Family::CompleteBipartite { a, b } if a == 0 || b == 0 => {
                bad("both sides of a complete bipartite graph must be nonempty".into())
            }
            Family::Star { k: 0 } => bad("star needs k >= 1".into()),
            Family::DRegularTree { d: 0, .. } => bad("tree degree must be >= 1".into()),
            Family::RandomRegular { n, d } if d >= n || (n * d) % 2 == 1 => bad(format!(
                "random regular needs d < n and n*d even (n={n}, d={d})"
            )),
            Family::ErdosRenyi { p, .. } if !(0.0..=1.0).contains(&p) => {
                bad(format!("edge probability {p} outside [0, 1]"))
            }
            _ => Ok(()),
        }
    }
}

pub fn generate(spec: &GenSpec) -> Result<Graph> {
    let graph = generate_family(spec)?;
    Ok(if spec.strip_leaves {
        crate::graph::strip_leaves(&graph).graph
    } else {
        graph
    })
}

fn generate_family(spec: &GenSpec) -> Result<Graph> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.family {
        Family::Path { n } => path(n),
        Family::Cycle { n } => cycle(n),
        Family::Complete { n } => complete(n),
        Family::CompleteBipartite { a, b } => complete_bipartite(a, b),
        Family::Star { k } => complete_bipartite(1, k),
        Family::DRegularTree { d, depth } => d_regular_tree(d, depth),
        Family::RandomRegular { n, d } => random_regular(n, d, &mut rng),
        Family::ErdosRenyi { n, p } => erdos_renyi(n, p, &mut rng),
        Family::RandomTree { n } => random_tree(n, &mut rng),
        Family::Petersen => petersen(),
    }
}

pub fn path(n: usize) -> Result<Graph> {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges)
}

pub fn cycle(n: usize) -> Result<Graph> {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

pub fn complete(n: usize) -> Result<Graph> {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Graph::from_edges(n, &edges)
}

/// `K_{a,b}` with the `a` side numbered first.
pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    let edges: Vec<_> = (0..a)
        .flat_map(|u| (a..a + b).map(move |v| (u, v)))
        .collect();
    Graph::from_edges(a + b, &edges)
}

/// Root of degree `d`, internal vertices of degree `d`, numbered in BFS order.
pub fn d_regular_tree(d: usize, depth: usize) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    let mut next_id = 1;
    for level in 0..depth {
        let children = if level == 0 { d } else { d - 1 };
        let mut next = Vec::with_capacity(frontier.len() * children);
        for &parent in &frontier {
            for _ in 0..children {
                edges.push((parent, next_id));
                next.push(next_id);
                next_id += 1;
            }
        }
        frontier = next;
    }
    Graph::from_edges(next_id, &edges)
}

pub fn petersen() -> Result<Graph> {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, &edges)
}

/// Pairing model with per-pair rejection: points are matched one pair at a
/// time, redrawing any pair that would create a loop or a repeated edge.
/// When no admissible pair remains the whole attempt restarts.
fn random_regular(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    const REDRAWS: usize = 64;
    'attempt: for _ in 0..PAIRING_ATTEMPTS {
        let mut points: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        let mut adjacency: Vec<Vec<Vertex>> = vec![Vec::with_capacity(d); n];
        let mut edges = Vec::with_capacity(n * d / 2);
        while !points.is_empty() {
            let admissible = |adjacency: &[Vec<Vertex>], u: Vertex, v: Vertex| {
                u != v && !adjacency[u].contains(&v)
            };
            let mut chosen = None;
            for _ in 0..REDRAWS {
                let i = rng.random_range(0..points.len());
                let j = rng.random_range(0..points.len());
                if i != j && admissible(&adjacency, points[i], points[j]) {
                    chosen = Some((i, j));
                    break;
                }
            }
            if chosen.is_none() {
                let mut candidates = Vec::new();
                for i in 0..points.len() {
                    for j in i + 1..points.len() {
                        if admissible(&adjacency, points[i], points[j]) {
                            candidates.push((i, j));
                        }
                    }
                }
                if candidates.is_empty() {
                    continue 'attempt;
                }
                chosen = Some(candidates[rng.random_range(0..candidates.len())]);
            }
            let (i, j) = chosen.unwrap();
            let (u, v) = (points[i], points[j]);
            adjacency[u].push(v);
            adjacency[v].push(u);
            edges.push((u, v));
            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
            points.swap_remove(hi);
            points.swap_remove(lo);
        }
        return Graph::from_edges(n, &edges);
    }
    Err(Error::RetryLimit {
        attempts: PAIRING_ATTEMPTS,
    })
}

fn erdos_renyi(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Uniform labelled tree via a random Prüfer sequence.
fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if n <= 2 {
        return path(n);
    }
    let sequence: Vec<Vertex> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut remaining = vec![1usize; n];
    for &s in &sequence {
        remaining[s] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<Vertex>> =
        (0..n).filter(|&v| remaining[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &s in &sequence {
        let Reverse(leaf) = leaves.pop().expect("a Prüfer decode always has a leaf");
        edges.push((leaf, s));
        remaining[s] -= 1;
        if remaining[s] == 1 {
            leaves.push(Reverse(s));
        }
    }
    let Reverse(a) = leaves.pop().unwrap();
    let Reverse(b) = leaves.pop().unwrap();
    edges.push((a, b));
    Graph::from_edges(n, &edges)
}
