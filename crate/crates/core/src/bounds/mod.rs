//! Closed forms of the lower bounds and the checks that compare them with
//! computed spectra.
//!
//! Right-hand sides are evaluated in `f64` from exact degree data. Left-hand
//! sides come from [`crate::spectral`] and [`crate::unravel`].

mod checks;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::graph::{AverageDegree, Graph};

pub use checks::{
    average_degree_f64, evaluate_all, lemma4_closed_walk_check, lemma4_unravel_check,
    two_ball_deflation_check, BoundName, BoundReport, CheckConfig, GraphContext, HooryContext,
    HypothesisCheck, DEFAULT_SLACK_TOL, HOORY_LABEL,
};

pub fn ratio_to_f64(d: AverageDegree) -> f64 {
    *d.numer() as f64 / *d.denom() as f64
}

/// `sum_u d(u) sqrt(d(u) - 1)`, skipping isolated vertices.
fn degree_weighted_sum(graph: &Graph) -> f64 {
    (0..graph.vertex_count())
        .map(|u| graph.degree(u))
        .filter(|&d| d > 0)
        .map(|d| d as f64 * ((d - 1) as f64).sqrt())
        .sum()
}

/// `(1/|E|) sum_u d(u) sqrt(d(u) - 1)`: the radius-free lower bound on the
/// spectral radius of the universal cover.
pub fn corollary_lb2_rhs(graph: &Graph) -> Result<f64> {
    if graph.edge_count() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    Ok(degree_weighted_sum(graph) / graph.edge_count() as f64)
}

/// `corollary_lb2_rhs(G) * cos(pi / (r + 2))`: the guaranteed value of the
/// largest unraveled ball of radius `r`.
pub fn theorem1_rhs(graph: &Graph, r: usize) -> Result<f64> {
    Ok(corollary_lb2_rhs(graph)? * (PI / (r as f64 + 2.0)).cos())
}

/// `2 prod_u sqrt(d(u) - 1)^(d(u) / sum_v d(v))`, evaluated in log space.
pub fn amgm_rhs(graph: &Graph) -> Result<f64> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if graph.edge_count() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    let min = graph.min_degree();
    if min < 1 {
        return Err(Error::MinDegree {
            required: 1,
            found: min,
        });
    }
    let total = 2.0 * graph.edge_count() as f64;
    let log: f64 = (0..graph.vertex_count())
        .map(|u| {
            let d = graph.degree(u) as f64;
            d / total * 0.5 * (d - 1.0).ln()
        })
        .sum();
    Ok(2.0 * log.exp())
}

/// `2 sqrt(d - 1) cos(pi / (r + 2))`, the guaranteed largest ball for
/// average degree `d`.
pub fn lemma_lb3_rhs(d: AverageDegree, r: usize) -> Result<f64> {
    let d = ratio_to_f64(d);
    if d < 1.0 {
        return Err(Error::InvalidParameters(format!(
            "average degree {d} below 1"
        )));
    }
    Ok(2.0 * (d - 1.0).sqrt() * (PI / (r as f64 + 2.0)).cos())
}

/// `2 sqrt(d - 1) cos(pi / (r + 1))` for an `r`-robust average degree `d`.
pub fn theorem8_rhs(d: AverageDegree, r: usize) -> Result<f64> {
    let d = ratio_to_f64(d);
    if d < 1.0 || r < 1 {
        return Err(Error::InvalidParameters(format!(
            "needs d >= 1 and r >= 1 (d={d}, r={r})"
        )));
    }
    Ok(2.0 * (d - 1.0).sqrt() * (PI / (r as f64 + 1.0)).cos())
}

/// `2 (1 - 1/r) sqrt(d - 1) + 1/r`.
pub fn alon_boppana_classic_rhs(d: usize, r: usize) -> Result<f64> {
    if d < 2 || r < 1 {
        return Err(Error::InvalidParameters(format!(
            "needs d >= 2 and r >= 1 (d={d}, r={r})"
        )));
    }
    let r = r as f64;
    Ok(2.0 * (1.0 - 1.0 / r) * ((d - 1) as f64).sqrt() + 1.0 / r)
}

/// `2 (1 - c log(r) / r) sqrt(d - 1)`. The constant `c` is not known; this
/// is only ever reported for context.
pub fn hoory_rhs(d: AverageDegree, r: usize, c: f64) -> f64 {
    let r = r as f64;
    2.0 * (1.0 - c * r.ln() / r) * (ratio_to_f64(d) - 1.0).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, path, petersen};
    use num_rational::Ratio;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1.0)
    }

    #[test]
    fn degree_sum_examples() {
        let p = petersen().unwrap();
        assert!(close(theorem1_rhs(&p, 2).unwrap(), 2.0));
        for r in 1..8 {
            let c = theorem1_rhs(&cycle(11).unwrap(), r).unwrap();
            assert!(close(c, 2.0 * (PI / (r as f64 + 2.0)).cos()));
            assert!(c < 2.0);
            let want = 2.0 * 2f64.sqrt() * (PI / (r as f64 + 2.0)).cos();
            assert!(close(theorem1_rhs(&p, r).unwrap(), want));
        }
        assert!(matches!(
            theorem1_rhs(&Graph::empty(3), 1),
            Err(Error::EmptyEdgeSet)
        ));
    }

    #[test]
    fn limiting_form_examples() {
        assert!(close(
            corollary_lb2_rhs(&complete(4).unwrap()).unwrap(),
            2.0 * 2f64.sqrt()
        ));
        assert!(close(
            corollary_lb2_rhs(&complete(5).unwrap()).unwrap(),
            2.0 * 3f64.sqrt()
        ));
        // Degrees (2, 2, 3, 3): a 4-cycle with one chord.
        let g = Graph::from_edges(4, &[(0, 2), (2, 1), (1, 3), (3, 0), (2, 3)]).unwrap();
        let mut degrees: Vec<_> = (0..4).map(|v| g.degree(v)).collect();
        degrees.sort();
        assert_eq!(degrees, vec![2, 2, 3, 3]);
        let want = (2.0 * 2.0 * 1.0 + 2.0 * 3.0 * 2f64.sqrt()) / 5.0;
        assert!(close(corollary_lb2_rhs(&g).unwrap(), want));
    }

    #[test]
    fn amgm_examples() {
        for g in [petersen().unwrap(), complete(6).unwrap(), cycle(5).unwrap()] {
            assert!(close(amgm_rhs(&g).unwrap(), corollary_lb2_rhs(&g).unwrap()));
        }
        let g = Graph::from_edges(4, &[(0, 2), (2, 1), (1, 3), (3, 0), (2, 3)]).unwrap();
        assert!(amgm_rhs(&g).unwrap() < corollary_lb2_rhs(&g).unwrap());
        assert!(matches!(
            amgm_rhs(&Graph::empty(2)),
            Err(Error::EmptyEdgeSet)
        ));
        let isolated = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(matches!(amgm_rhs(&isolated), Err(Error::MinDegree { .. })));
        assert_eq!(amgm_rhs(&path(3).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn degree_bound_examples() {
        let two = Ratio::from_integer(2);
        assert!(close(
            lemma_lb3_rhs(two, 3).unwrap(),
            2.0 * (PI / 5.0).cos()
        ));
        assert_eq!(lemma_lb3_rhs(Ratio::from_integer(1), 4).unwrap(), 0.0);
        assert!(close(
            lemma_lb3_rhs(Ratio::from_integer(3), 4).unwrap(),
            6f64.sqrt()
        ));
        assert!(lemma_lb3_rhs(Ratio::new(1, 2), 4).is_err());

        assert!(theorem8_rhs(two, 1).unwrap().abs() < 1e-15);
        assert!(close(
            theorem8_rhs(Ratio::from_integer(4), 3).unwrap(),
            6f64.sqrt()
        ));
        let far = theorem8_rhs(Ratio::from_integer(3), 100_000).unwrap();
        assert!((far - 2.0 * 2f64.sqrt()).abs() < 1e-8);
        assert!(theorem8_rhs(two, 0).is_err());

        assert!(close(alon_boppana_classic_rhs(7, 1).unwrap(), 1.0));
        assert!(close(
            alon_boppana_classic_rhs(3, 2).unwrap(),
            2f64.sqrt() + 0.5
        ));
        assert!(alon_boppana_classic_rhs(1, 2).is_err());
    }

    #[test]
    fn robust_form_beats_logarithmic_form_eventually() {
        for r in 2..2000usize {
            let rf = r as f64;
            assert!((PI / (rf + 1.0)).cos() >= 1.0 - 5.0 / (rf * rf));
        }
        let d = Ratio::from_integer(3);
        for r in 50..200 {
            assert!(theorem8_rhs(d, r).unwrap() > hoory_rhs(d, r, 1.0));
        }
    }
}
