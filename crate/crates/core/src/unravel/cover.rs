//! Spectral radii of trees of non-backtracking walks without building them.
//!
//! For a rooted tree, eliminating leaves first factors `lambda I - A` with
//! pivots `p(node) = lambda - sum over children of 1 / p(child)`, and the
//! matrix is positive definite exactly when every pivot is positive, i.e.
//! exactly when `lambda > lambda_1`. In a tree of non-backtracking walks the
//! subtree below a walk depends only on its last directed edge and on how
//! many levels remain, so the pivots fit in a table indexed by
//! `(directed edge, remaining depth)`. Bisection on `lambda` then brackets
//! the spectral radius.

use serde::Serialize;

use super::{DirectedEdges, WalkForest};
use crate::error::{Error, Result};
use crate::graph::{component_subgraphs, Graph, Vertex};

/// Bracket width at which bisection stops.
pub const BISECTION_WIDTH: f64 = 1e-13;

/// `lower <= lambda_1 < upper` up to pivot rounding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoverBracket {
    pub lower: f64,
    pub upper: f64,
}

impl CoverBracket {
    pub fn exact(value: f64) -> Self {
        CoverBracket {
            lower: value,
            upper: value,
        }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

fn pivot(lambda: f64, children: impl Iterator<Item = f64>) -> f64 {
    let mut acc = lambda;
    for c in children {
        if c <= 0.0 || c.is_nan() {
            return f64::NEG_INFINITY;
        }
        acc -= c.recip();
    }
    acc
}

fn bisect(upper: f64, mut above: impl FnMut(f64) -> bool) -> CoverBracket {
    let (mut lo, mut hi) = (0.0, upper);
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if above(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    CoverBracket {
        lower: lo,
        upper: hi,
    }
}

/// Pivot tables over the directed edges of one graph.
pub struct PivotSolver<'g> {
    graph: &'g Graph,
    edges: DirectedEdges,
}

impl<'g> PivotSolver<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        PivotSolver {
            graph,
            edges: DirectedEdges::new(graph),
        }
    }

    pub fn edges(&self) -> &DirectedEdges {
        &self.edges
    }

    fn search_ceiling(&self) -> f64 {
        self.graph.max_degree() as f64 + 1.0
    }

    /// Pivots of the subtree below a walk ending with each directed edge,
    /// `depth` levels deep. Failed subtrees carry a non-positive value.
    fn level(&self, lambda: f64, depth: usize) -> Vec<f64> {
        let m = self.edges.len();
        let mut current = vec![lambda; m];
        let mut next = vec![0.0; m];
        for _ in 0..depth {
            for (e, out) in next.iter_mut().enumerate() {
                *out = pivot(lambda, self.edges.successors(e).map(|f| current[f]));
            }
            std::mem::swap(&mut current, &mut next);
        }
        current
    }

    fn root_pivot(&self, lambda: f64, v: Vertex, below: &[f64]) -> f64 {
        pivot(lambda, self.edges.out_edges(v).map(|e| below[e]))
    }

    /// Whether `lambda` exceeds the spectral radius of `G~(v, r)` for every
    /// `v` in `roots`; on failure also reports which roots fail.
    fn balls_above(
        &self,
        lambda: f64,
        r: usize,
        roots: impl Iterator<Item = Vertex>,
    ) -> Vec<Vertex> {
        if r == 0 {
            return if lambda > 0.0 {
                Vec::new()
            } else {
                roots.collect()
            };
        }
        let below = self.level(lambda, r - 1);
        roots
            .filter(|&v| self.root_pivot(lambda, v, &below) <= 0.0)
            .collect()
    }

    /// Spectral radius of `G~(v, r)`, restricted to the directed edges a
    /// walk from `v` can reach.
    pub fn ball_radius(&self, v: Vertex, r: usize) -> CoverBracket {
        if r == 0 || self.graph.degree(v) == 0 {
            return CoverBracket::exact(0.0);
        }
        let m = self.edges.len();
        // reach[j] = edges that can be step j + 1 of a walk from v.
        let mut reach: Vec<Vec<usize>> = vec![self.edges.out_edges(v).collect()];
        let mut seen = vec![usize::MAX; m];
        for j in 1..r {
            let mut next = Vec::new();
            for &e in &reach[j - 1] {
                for f in self.edges.successors(e) {
                    if seen[f] != j {
                        seen[f] = j;
                        next.push(f);
                    }
                }
            }
            reach.push(next);
        }
        let mut values = vec![vec![0.0; m]; r];
        bisect(self.search_ceiling(), |lambda| {
            for j in (0..r).rev() {
                let (head, tail) = values.split_at_mut(j + 1);
                let row = &mut head[j];
                for &e in &reach[j] {
                    row[e] = if j + 1 == r {
                        lambda
                    } else {
                        pivot(lambda, self.edges.successors(e).map(|f| tail[0][f]))
                    };
                }
            }
            self.root_pivot(lambda, v, &values[0]) > 0.0
        })
    }

    /// Largest `lambda_1(G~(v, r))` over all `v`, with the smallest vertex
    /// whose radius is within `tol` of it.
    pub fn max_ball_radius(&self, r: usize, tol: f64) -> MaxUnraveled {
        let n = self.graph.vertex_count();
        let bracket = bisect(self.search_ceiling(), |lambda| {
            self.balls_above(lambda, r, 0..n).is_empty()
        });
        let probe = (bracket.lower - tol).max(0.0);
        let vertex = self
            .balls_above(probe, r, 0..n)
            .first()
            .copied()
            .unwrap_or(0);
        MaxUnraveled {
            vertex,
            radius: bracket,
        }
    }

    /// Largest spectral radius over the subtrees hanging below each
    /// directed edge with `depth` further levels, with a witness edge.
    pub fn max_edge_subtree_radius(&self, depth: usize, tol: f64) -> (CoverBracket, usize) {
        let failing = |lambda: f64| -> Option<usize> {
            self.level(lambda, depth).iter().position(|&p| p <= 0.0)
        };
        let bracket = bisect(self.search_ceiling(), |lambda| failing(lambda).is_none());
        let witness = failing((bracket.lower - tol).max(0.0)).unwrap_or(0);
        (bracket, witness)
    }

    /// Whether the infinite-depth pivot recursion at `lambda` settles on a
    /// positive fixed point within `max_steps` (`Some(true)`), fails
    /// (`Some(false)`), or is still undecided (`None`).
    fn fixed_point(&self, lambda: f64, max_steps: usize) -> Option<bool> {
        let m = self.edges.len();
        let mut current = vec![lambda; m];
        let mut next = vec![0.0; m];
        for _ in 0..max_steps {
            let mut change: f64 = 0.0;
            for (e, out) in next.iter_mut().enumerate() {
                *out = pivot(lambda, self.edges.successors(e).map(|f| current[f]));
                if *out <= 0.0 {
                    return Some(false);
                }
                change = change.max((current[e] - *out).abs());
            }
            std::mem::swap(&mut current, &mut next);
            if change <= 1e-14 * lambda {
                return Some(true);
            }
        }
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MaxUnraveled {
    pub vertex: Vertex,
    pub radius: CoverBracket,
}

/// `lambda_1(G~(v, r))`.
pub fn unraveled_ball_radius(graph: &Graph, v: Vertex, r: usize) -> Result<CoverBracket> {
    graph.check_vertex(v)?;
    Ok(PivotSolver::new(graph).ball_radius(v, r))
}

/// The vertex maximizing `lambda_1(G~(v, r))`, smallest id among those
/// within `tol` of the maximum.
pub fn find_max_unraveled_vertex(graph: &Graph, r: usize, tol: f64) -> Result<MaxUnraveled> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Ok(PivotSolver::new(graph).max_ball_radius(r, tol))
}

/// `lambda_1(T) = max_e lambda_1(T_e)` for the walk forest, with the
/// lexicographically smallest directed edge whose component is within `tol`
/// of the maximum.
pub fn forest_spectral_radius(
    forest: &WalkForest<'_>,
    tol: f64,
) -> (CoverBracket, (Vertex, Vertex)) {
    let solver = PivotSolver::new(forest.graph());
    let (bracket, e) = solver.max_edge_subtree_radius(forest.radius(), tol);
    (bracket, solver.edges().endpoints(e))
}

/// Spectral radius of the universal cover.
///
/// Per component: trees are their own cover; a `d`-regular component
/// covers to the `d`-regular tree (`2 sqrt(d - 1)`); an `(a, b)`-biregular
/// bipartite component to the biregular tree (`sqrt(a - 1) + sqrt(b - 1)`).
/// Otherwise the lower end is the largest radius of an edge subtree of
/// depth `depth`, and the upper end is the smallest tried `lambda` at which
/// the pivot recursion reaches a positive fixed point.
pub fn cover_spectral_radius(graph: &Graph, depth: usize) -> Result<CoverBracket> {
    cover_bracket(graph, depth, true)
}

/// As [`cover_spectral_radius`] without the fixed-point search: components
/// without a closed form report the search ceiling as their upper end.
pub fn cover_lower_bound(graph: &Graph, depth: usize) -> Result<CoverBracket> {
    cover_bracket(graph, depth, false)
}

fn cover_bracket(graph: &Graph, depth: usize, refine_upper: bool) -> Result<CoverBracket> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut best = CoverBracket::exact(0.0);
    for sub in component_subgraphs(graph) {
        let g = &sub.graph;
        let n = g.vertex_count();
        let bracket = if g.edge_count() + 1 == n {
            let solver = PivotSolver::new(g);
            solver.max_ball_radius(n, 0.0).radius
        } else if let Some(d) = g.regular_degree() {
            CoverBracket::exact(2.0 * ((d - 1) as f64).sqrt())
        } else if let Some((a, b)) = biregular_degrees(g) {
            CoverBracket::exact(((a - 1) as f64).sqrt() + ((b - 1) as f64).sqrt())
        } else {
            let solver = PivotSolver::new(g);
            let (lower, _) = solver.max_edge_subtree_radius(depth, 0.0);
            let ceiling = solver.search_ceiling();
            let mut step = 1e-10;
            let mut upper = ceiling;
            while refine_upper && lower.upper + step < ceiling {
                if solver.fixed_point(lower.upper + step, 50 * depth.max(100)) == Some(true) {
                    upper = lower.upper + step;
                    break;
                }
                step *= 4.0;
            }
            CoverBracket {
                lower: lower.lower,
                upper,
            }
        };
        if bracket.lower > best.lower {
            best = bracket;
        }
    }
    Ok(best)
}

/// Degrees `(a, b)` of a connected bipartite graph whose sides are regular.
fn biregular_degrees(graph: &Graph) -> Option<(usize, usize)> {
    let n = graph.vertex_count();
    let mut side = vec![None; n];
    side[0] = Some(false);
    let mut stack = vec![0];
    while let Some(u) = stack.pop() {
        let s = side[u].unwrap();
        for &w in graph.neighbors(u) {
            match side[w] {
                None => {
                    side[w] = Some(!s);
                    stack.push(w);
                }
                Some(t) if t == s => return None,
                _ => {}
            }
        }
    }
    let degree_of = |want: bool| {
        let mut ds = (0..n)
            .filter(|&v| side[v] == Some(want))
            .map(|v| graph.degree(v));
        let first = ds.next()?;
        ds.all(|d| d == first).then_some(first)
    };
    Some((degree_of(false)?, degree_of(true)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, complete_bipartite, cycle, d_regular_tree, path, petersen};
    use crate::spectral::{path_spectral_radius, spectral_radius};
    use crate::unravel::unraveled_ball;

    fn power_radius(g: &Graph, v: Vertex, r: usize) -> f64 {
        let ball = unraveled_ball(g, v, r, 1_000_000).unwrap();
        spectral_radius(ball.tree(), 1e-12).unwrap().value
    }

    #[test]
    fn matches_power_iteration_on_materialized_balls() {
        let mut lollipop: Vec<_> = complete(5).unwrap().edges().collect();
        lollipop.extend([(4, 5), (5, 6), (6, 7)]);
        let lollipop = Graph::from_edges(8, &lollipop).unwrap();
        for g in [
            petersen().unwrap(),
            complete(4).unwrap(),
            lollipop,
            complete_bipartite(2, 3).unwrap(),
        ] {
            for v in 0..g.vertex_count() {
                for r in 0..5 {
                    let bracket = unraveled_ball_radius(&g, v, r).unwrap();
                    let power = power_radius(&g, v, r);
                    assert!(bracket.width() <= BISECTION_WIDTH);
                    assert!((bracket.midpoint() - power).abs() < 1e-9, "v={v} r={r}");
                }
            }
        }
    }

    #[test]
    fn cycle_balls_are_paths() {
        let c = cycle(5).unwrap();
        let b = unraveled_ball_radius(&c, 0, 2).unwrap();
        assert!((b.midpoint() - 3f64.sqrt()).abs() < 1e-12);
        for r in 1..8 {
            let b = unraveled_ball_radius(&c, 1, r).unwrap();
            assert!((b.midpoint() - path_spectral_radius(2 * r + 1).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn max_over_vertices_and_witness() {
        let p = petersen().unwrap();
        let m = find_max_unraveled_vertex(&p, 3, 1e-9).unwrap();
        assert_eq!(m.vertex, 0);
        let mut lollipop: Vec<_> = complete(5).unwrap().edges().collect();
        lollipop.extend([(4, 5), (5, 6)]);
        let g = Graph::from_edges(7, &lollipop).unwrap();
        let m = find_max_unraveled_vertex(&g, 3, 1e-9).unwrap();
        let per_vertex: Vec<f64> = (0..7)
            .map(|v| unraveled_ball_radius(&g, v, 3).unwrap().midpoint())
            .collect();
        let best = per_vertex.iter().cloned().fold(f64::MIN, f64::max);
        assert!((m.radius.midpoint() - best).abs() < 1e-12);
        let expected = (0..7).find(|&v| per_vertex[v] >= best - 1e-9).unwrap();
        assert_eq!(m.vertex, expected);
        assert!(m.vertex < 5);
    }

    #[test]
    fn cover_radius_closed_forms() {
        let check = |g: Graph, want: f64| {
            let b = cover_spectral_radius(&g, 64).unwrap();
            assert!((b.lower - want).abs() < 1e-12 && (b.upper - want).abs() < 1e-12);
        };
        check(petersen().unwrap(), 2.0 * 2f64.sqrt());
        check(cycle(7).unwrap(), 2.0);
        check(complete_bipartite(2, 3).unwrap(), 1.0 + 2f64.sqrt());
        check(path(2).unwrap(), 1.0);
        let tree = d_regular_tree(3, 2).unwrap();
        let b = cover_spectral_radius(&tree, 64).unwrap();
        assert!((b.midpoint() - spectral_radius(&tree, 1e-12).unwrap().value).abs() < 1e-10);
    }

    #[test]
    fn cover_radius_brackets_irregular_graphs() {
        // K_4 with one pendant-free chord removed plus a triangle tail.
        let g = Graph::from_edges(
            6,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 3),
            ],
        )
        .unwrap();
        let b = cover_spectral_radius(&g, 200).unwrap();
        assert!(b.lower <= b.upper);
        assert!(b.width() < 0.05, "{b:?}");
        let deeper = unraveled_ball_radius(&g, 0, 12).unwrap();
        assert!(deeper.lower <= b.upper + 1e-12);
    }
}
