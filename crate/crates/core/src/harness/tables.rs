use serde::Serialize;

use crate::bounds::{corollary_lb2_rhs, theorem1_rhs};
use crate::error::{Error, Result};
use crate::graph::{ball_subgraph, Graph, Vertex};
use crate::spectral::{
    closed_walk_counts, growth_is_monotone, spectral_radius_with, walk_growth_estimate, EigenConfig,
};
use crate::unravel::{CoverBracket, PivotSolver};

use super::SCHEMA_VERSION;

/// Longest closed-walk length accepted by [`converge_table`].
pub const MAX_CONVERGE_LENGTH: usize = 4096;

/// Budget on `n * K * log2(max degree)`, roughly the number of big-integer
/// bits held during counting.
const CONVERGE_BIT_BUDGET: f64 = 4e9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergeRow {
    pub k: usize,
    /// `s_{2k}(v)` in decimal.
    pub closed_walks: String,
    pub estimate: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergeTable {
    pub schema_version: u32,
    pub graph_id: String,
    pub vertex: Vertex,
    pub max_length: usize,
    /// Spectral radius of the component of `vertex`.
    pub lambda1: f64,
    pub monotone: bool,
    pub rows: Vec<ConvergeRow>,
}

/// `s_{2k}(v)^{1/(2k)}` for `k = 1..=K/2` next to the spectral radius of
/// the component containing `v`.
pub fn converge_table(
    graph_id: &str,
    graph: &Graph,
    v: Vertex,
    max_length: usize,
    eig: &EigenConfig,
) -> Result<ConvergeTable> {
    graph.check_vertex(v)?;
    let bits =
        graph.vertex_count() as f64 * max_length as f64 * (graph.max_degree().max(2) as f64).log2();
    if max_length > MAX_CONVERGE_LENGTH || bits > CONVERGE_BIT_BUDGET {
        return Err(Error::InvalidParameters(format!(
            "walk length {max_length} exceeds the counting budget for {} vertices",
            graph.vertex_count()
        )));
    }
    let component = ball_subgraph(graph, v, graph.vertex_count())?;
    let lambda1 = spectral_radius_with(&component.graph, eig)?.value;
    let counts = closed_walk_counts(graph, v, max_length)?;
    let rows = walk_growth_estimate(&counts)
        .into_iter()
        .enumerate()
        .map(|(i, estimate)| {
            let k = i + 1;
            ConvergeRow {
                k,
                closed_walks: counts.counts[2 * k].to_str_radix(10),
                estimate,
                gap: lambda1 - estimate,
            }
        })
        .collect();
    Ok(ConvergeTable {
        schema_version: SCHEMA_VERSION,
        graph_id: graph_id.to_string(),
        vertex: v,
        max_length,
        lambda1,
        monotone: growth_is_monotone(&counts),
        rows,
    })
}

impl ConvergeTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,s_2k,estimate,gap\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.k, r.closed_walks, r.estimate, r.gap
            ));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverRow {
    pub r: usize,
    /// Smallest vertex attaining the largest unraveled ball.
    pub vertex: Vertex,
    pub lower: f64,
    pub upper: f64,
    pub theorem1_rhs: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverTable {
    pub schema_version: u32,
    pub graph_id: String,
    pub corollary_lb2_rhs: Option<f64>,
    pub min_degree_ok: bool,
    /// Rows never decrease by more than the tolerance.
    pub monotone: bool,
    /// Every row clears the `r`-dependent bound (only asserted when the
    /// minimum degree is at least 2).
    pub above_theorem1: bool,
    pub rows: Vec<CoverRow>,
}

/// `max_v lambda_1(G~(v, r))` for `r = 1..=r_max`: a nondecreasing sequence
/// of lower bounds on the spectral radius of the universal cover.
pub fn cover_table(graph_id: &str, graph: &Graph, r_max: usize, tol: f64) -> Result<CoverTable> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let solver = PivotSolver::new(graph);
    let rows: Vec<CoverRow> = (1..=r_max)
        .map(|r| {
            let best = solver.max_ball_radius(r, tol);
            let CoverBracket { lower, upper } = best.radius;
            CoverRow {
                r,
                vertex: best.vertex,
                lower,
                upper,
                theorem1_rhs: theorem1_rhs(graph, r).ok(),
            }
        })
        .collect();
    let monotone = rows.windows(2).all(|w| w[1].upper >= w[0].lower - tol);
    let above_theorem1 = rows
        .iter()
        .all(|row| row.theorem1_rhs.is_none_or(|rhs| row.upper >= rhs - tol));
    Ok(CoverTable {
        schema_version: SCHEMA_VERSION,
        graph_id: graph_id.to_string(),
        corollary_lb2_rhs: corollary_lb2_rhs(graph).ok(),
        min_degree_ok: graph.min_degree() >= 2,
        monotone,
        above_theorem1,
        rows,
    })
}

impl CoverTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,vertex,lower,upper,theorem1_rhs,corollary_lb2_rhs\n");
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.r,
                row.vertex,
                row.lower,
                row.upper,
                opt(row.theorem1_rhs),
                opt(self.corollary_lb2_rhs)
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, petersen};
    use std::f64::consts::PI;

    #[test]
    fn single_edge_is_constant() {
        let t =
            converge_table("k2", &complete(2).unwrap(), 0, 20, &EigenConfig::default()).unwrap();
        assert!(t.monotone);
        assert!(t.rows.iter().all(|r| r.estimate == 1.0));
    }

    #[test]
    fn cycle_converges_slowly() {
        let t = converge_table("c20", &cycle(20).unwrap(), 0, 40, &EigenConfig::default()).unwrap();
        assert!(t.monotone);
        assert!(t.rows.windows(2).all(|w| w[1].estimate >= w[0].estimate));
        assert!(t.rows.last().unwrap().gap < 0.3);
    }

    #[test]
    fn petersen_matches_spectral_decomposition() {
        // Spectrum 3, 1 (x5), -2 (x4); by symmetry each eigenspace puts
        // weight multiplicity/10 on a single vertex.
        let t = converge_table("p", &petersen().unwrap(), 0, 60, &EigenConfig::default()).unwrap();
        assert!((t.lambda1 - 3.0).abs() < 1e-9);
        assert!(t.monotone);
        for row in &t.rows {
            let m = 2 * row.k as i32;
            let s = (3f64.powi(m) + 5.0 + 4.0 * 2f64.powi(m)) / 10.0;
            assert!((row.estimate - s.powf(1.0 / m as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn converge_rejects_huge_lengths() {
        assert!(converge_table(
            "c",
            &cycle(5).unwrap(),
            0,
            MAX_CONVERGE_LENGTH + 1,
            &EigenConfig::default()
        )
        .is_err());
    }

    #[test]
    fn cycle_cover_sequence() {
        let t = cover_table("c40", &cycle(40).unwrap(), 6, 1e-10).unwrap();
        assert!(t.monotone && t.above_theorem1);
        for row in &t.rows {
            let want = 2.0 * (PI / (2.0 * row.r as f64 + 2.0)).cos();
            assert!((row.lower - want).abs() < 1e-9, "{row:?}");
        }
    }

    #[test]
    fn regular_cover_sequence_stays_below_tree_limit() {
        let t = cover_table("p", &petersen().unwrap(), 8, 1e-10).unwrap();
        let limit = 2.0 * 2f64.sqrt();
        assert!(t.monotone && t.above_theorem1);
        assert!(t.rows.windows(2).all(|w| w[1].lower > w[0].upper));
        assert!(t.rows.iter().all(|r| r.upper < limit));
        assert!((t.corollary_lb2_rhs.unwrap() - limit).abs() < 1e-12);
    }
}
