//! Independent oracles for the integration tests. Nothing here calls the
//! crate's spectral or unraveling code.

#![allow(dead_code, clippy::needless_range_loop)]

use unravel_core::Graph;

pub fn adjacency_matrix(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.vertex_count();
    let mut a = vec![vec![0.0; n]; n];
    for (u, v) in g.edges() {
        a[u][v] = 1.0;
        a[v][u] = 1.0;
    }
    a
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut values: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    values.sort_by(f64::total_cmp);
    values
}

pub fn spectrum(g: &Graph) -> Vec<f64> {
    jacobi_eigenvalues(adjacency_matrix(g))
}

pub fn top(g: &Graph) -> f64 {
    *spectrum(g).last().unwrap_or(&0.0)
}

/// The tree of non-backtracking walks of length at most `r` from `v`,
/// built by breadth-first extension.
pub fn brute_unraveled_ball(g: &Graph, v: usize, r: usize) -> Graph {
    // Each entry: (terminal vertex, previous vertex).
    let mut nodes: Vec<(usize, Option<usize>)> = vec![(v, None)];
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    for _ in 0..r {
        let mut next = Vec::new();
        for &id in &frontier {
            let (u, prev) = nodes[id];
            for &w in g.neighbors(u) {
                if Some(w) == prev {
                    continue;
                }
                nodes.push((w, Some(u)));
                edges.push((id, nodes.len() - 1));
                next.push(nodes.len() - 1);
            }
        }
        frontier = next;
    }
    Graph::from_edges(nodes.len(), &edges).unwrap()
}

/// Vertices within distance `r` of `v`, by repeated neighborhood growth.
pub fn brute_ball(g: &Graph, v: usize, r: usize) -> Vec<usize> {
    let mut inside = vec![false; g.vertex_count()];
    inside[v] = true;
    for _ in 0..r {
        let snapshot = inside.clone();
        for u in 0..g.vertex_count() {
            if snapshot[u] {
                for &w in g.neighbors(u) {
                    inside[w] = true;
                }
            }
        }
    }
    (0..g.vertex_count()).filter(|&u| inside[u]).collect()
}

pub fn induced(g: &Graph, vertices: &[usize]) -> Graph {
    let index = |x: usize| vertices.binary_search(&x).ok();
    let edges: Vec<_> = g
        .edges()
        .filter_map(|(a, b)| Some((index(a)?, index(b)?)))
        .collect();
    Graph::from_edges(vertices.len(), &edges).unwrap()
}

/// `2 cos(pi / (n + 1))`.
pub fn path_radius(n: usize) -> f64 {
    2.0 * (std::f64::consts::PI / (n as f64 + 1.0)).cos()
}
