use std::cell::{OnceCell, RefCell};
use std::collections::BTreeMap;
use std::rc::Rc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{
    alon_boppana_classic_rhs, amgm_rhs, corollary_lb2_rhs, hoory_rhs, lemma_lb3_rhs, ratio_to_f64,
    theorem1_rhs, theorem8_rhs,
};
use crate::error::Result;
use crate::graph::{
    ball, ball_subgraph, delete_ball, diameter, max_edge_distance, robust_average_degree,
    AverageDegree, EdgeDistance, Graph, Vertex,
};
use crate::spectral::{
    dense_spectrum, spectral_radius_with, spectrum_summary, EigenConfig, SpectrumSummary,
};
use crate::unravel::{
    closed_walk_injection_check_with_cap, cover_lower_bound, CoverBracket, PivotSolver,
};

pub const DEFAULT_SLACK_TOL: f64 = 1e-9;

/// Balls at most this large get a dense eigensolve instead of power
/// iteration.
const DENSE_BALL_LIMIT: usize = 48;

/// Depths tried, in order, for the cover lower bound.
const COVER_DEPTHS: [usize; 4] = [64, 256, 1024, 4096];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    Theorem1,
    CorollaryLb2,
    AmgmHooryForm,
    LemmaLb3,
    Theorem8,
    AlonBoppanaClassic,
    Lemma4Unravel,
    Lemma4ClosedWalks,
    Theorem8Deflation,
}

impl BoundName {
    pub const ALL: [BoundName; 9] = [
        BoundName::Theorem1,
        BoundName::CorollaryLb2,
        BoundName::AmgmHooryForm,
        BoundName::LemmaLb3,
        BoundName::Theorem8,
        BoundName::AlonBoppanaClassic,
        BoundName::Lemma4Unravel,
        BoundName::Lemma4ClosedWalks,
        BoundName::Theorem8Deflation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::Theorem1 => "theorem1",
            BoundName::CorollaryLb2 => "corollary_lb2",
            BoundName::AmgmHooryForm => "amgm_hoory_form",
            BoundName::LemmaLb3 => "lemma_lb3",
            BoundName::Theorem8 => "theorem8",
            BoundName::AlonBoppanaClassic => "alon_boppana_classic",
            BoundName::Lemma4Unravel => "lemma4_unravel",
            BoundName::Lemma4ClosedWalks => "lemma4_closed_walks",
            BoundName::Theorem8Deflation => "theorem8_deflation",
        }
    }
}

impl std::fmt::Display for BoundName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One comparison `lhs >= rhs - tol`.
///
/// `lhs`, `rhs` and `slack` are absent when they could not be computed
/// (the reason is in `note`). `runtime_ms` is only filled when timing is
/// requested, so that reports stay reproducible by default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub graph_id: String,
    pub bound: BoundName,
    pub r: usize,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub slack: Option<f64>,
    pub witness: Option<Vec<Vertex>>,
    pub hypothesis_ok: bool,
    pub pass: bool,
    pub tol: f64,
    pub runtime_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        graph_id: &str,
        bound: BoundName,
        r: usize,
        lhs: Option<f64>,
        rhs: Option<f64>,
        witness: Option<Vec<Vertex>>,
        hypothesis_ok: bool,
        tol: f64,
    ) -> Self {
        let slack = lhs.zip(rhs).map(|(l, r)| l - r);
        BoundReport {
            graph_id: graph_id.to_string(),
            bound,
            r,
            lhs,
            rhs,
            slack,
            witness,
            hypothesis_ok,
            pass: hypothesis_ok && slack.is_some_and(|s| s >= -tol),
            tol,
            runtime_ms: None,
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Whether this report is a genuine violation: the hypothesis holds but
    /// the inequality does not.
    pub fn is_violation(&self) -> bool {
        self.hypothesis_ok && !self.pass
    }

    pub fn sort_key(&self) -> (&str, usize, BoundName) {
        (&self.graph_id, self.r, self.bound)
    }
}

/// Hypotheses of the bounds for one graph and radius, all recomputed from
/// the graph itself.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisCheck {
    pub r: usize,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub min_degree: usize,
    /// Minimum degree at least 2.
    pub min_degree_ok: bool,
    pub average_degree: AverageDegree,
    pub regular_degree: Option<usize>,
    /// `r`-robust average degree, 0 if some deletion empties the graph.
    pub robust_degree: AverageDegree,
    pub robust_witness: Option<Vertex>,
    pub robust_empties: bool,
    /// Robust degree at least 1 with no emptying deletion.
    pub robust_degree_ok: bool,
    pub diameter: usize,
    pub max_edge_distance: Option<usize>,
    /// Two edges at distance at least `2r`.
    pub edge_distance_ok: bool,
}

/// The logarithmic second-eigenvalue bound with `c = 1`. It is reported
/// alongside the checks and never decides pass or fail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HooryContext {
    pub graph_id: String,
    pub r: usize,
    pub c: f64,
    /// `max(lambda_2, |lambda_min|)`.
    pub lhs: f64,
    pub rhs: f64,
    pub label: String,
}

pub const HOORY_LABEL: &str = "illustrative, constant unspecified in source";

#[derive(Clone, Debug, PartialEq)]
pub struct CheckConfig {
    pub eig: EigenConfig,
    pub slack_tol: f64,
    /// Closed-walk injection checks only run on graphs this small.
    pub injection_max_vertices: usize,
    pub injection_max_length: usize,
    /// Node cap for the unraveled balls built by the injection checks.
    pub injection_node_cap: u64,
    pub record_timing: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            eig: EigenConfig::default(),
            slack_tol: DEFAULT_SLACK_TOL,
            injection_max_vertices: 12,
            injection_max_length: 12,
            injection_node_cap: crate::unravel::INJECTION_NODE_CAP,
            record_timing: false,
        }
    }
}

/// Largest eigenvalue of a small graph, dense below a size limit.
fn top_eigenvalue(graph: &Graph, eig: &EigenConfig) -> Result<f64> {
    let n = graph.vertex_count();
    if n <= DENSE_BALL_LIMIT && n > 0 {
        return Ok(dense_spectrum(graph)[n - 1]);
    }
    Ok(spectral_radius_with(graph, eig)?.value)
}

/// `lambda_1(G(v, r))` for every `v`.
fn all_ball_radii(graph: &Graph, r: usize, eig: &EigenConfig) -> Result<Vec<f64>> {
    crate::par::map_indices(graph.vertex_count(), |v| {
        top_eigenvalue(&ball_subgraph(graph, v, r)?.graph, eig)
    })
    .into_iter()
    .collect()
}

/// Index of the maximum, smallest index on ties.
fn argmax(values: &[f64]) -> Option<(Vertex, f64)> {
    values
        .iter()
        .copied()
        .enumerate()
        .fold(None, |best, (v, x)| match best {
            Some((_, b)) if x <= b => best,
            _ => Some((v, x)),
        })
}

/// Largest-ball spectral radii per vertex, or the error that stopped them.
type BallRadii = std::result::Result<Vec<f64>, String>;

/// Per-graph state shared by every check, caching the expensive
/// radius-independent quantities.
pub struct GraphContext<'g> {
    pub graph_id: String,
    pub graph: &'g Graph,
    pub cfg: CheckConfig,
    spectrum: OnceCell<std::result::Result<SpectrumSummary, String>>,
    cover: OnceCell<std::result::Result<(CoverBracket, usize), String>>,
    edge_distance: OnceCell<Option<EdgeDistance>>,
    diameter: OnceCell<usize>,
    pivot: OnceCell<PivotSolver<'g>>,
    ball_radii: RefCell<BTreeMap<usize, Rc<BallRadii>>>,
    hypotheses: RefCell<BTreeMap<usize, Rc<HypothesisCheck>>>,
}

impl<'g> GraphContext<'g> {
    pub fn new(graph_id: impl Into<String>, graph: &'g Graph, cfg: CheckConfig) -> Self {
        GraphContext {
            graph_id: graph_id.into(),
            graph,
            cfg,
            spectrum: OnceCell::new(),
            cover: OnceCell::new(),
            edge_distance: OnceCell::new(),
            diameter: OnceCell::new(),
            pivot: OnceCell::new(),
            ball_radii: RefCell::new(BTreeMap::new()),
            hypotheses: RefCell::new(BTreeMap::new()),
        }
    }

    fn tol(&self) -> f64 {
        self.cfg.slack_tol
    }

    pub fn spectrum(&self) -> std::result::Result<SpectrumSummary, String> {
        self.spectrum
            .get_or_init(|| spectrum_summary(self.graph, &self.cfg.eig).map_err(|e| e.to_string()))
            .clone()
    }

    fn pivot(&self) -> &PivotSolver<'g> {
        self.pivot.get_or_init(|| PivotSolver::new(self.graph))
    }

    /// Lower bound on the cover radius, deepened until it clears the
    /// radius-free bound or the depths run out. Returns the bracket and the
    /// depth used.
    pub fn cover(&self) -> std::result::Result<(CoverBracket, usize), String> {
        self.cover
            .get_or_init(|| {
                let target = corollary_lb2_rhs(self.graph).ok();
                let mut last = None;
                for depth in COVER_DEPTHS {
                    let bracket =
                        cover_lower_bound(self.graph, depth).map_err(|e| e.to_string())?;
                    last = Some((bracket, depth));
                    let exact = bracket.width() == 0.0;
                    if exact || target.is_none_or(|t| bracket.lower >= t - self.tol()) {
                        break;
                    }
                }
                Ok(last.expect("at least one depth"))
            })
            .clone()
    }

    pub fn edge_distance(&self) -> Option<EdgeDistance> {
        *self
            .edge_distance
            .get_or_init(|| max_edge_distance(self.graph))
    }

    pub fn diameter(&self) -> usize {
        *self.diameter.get_or_init(|| diameter(self.graph))
    }

    /// `lambda_1(G(v, r))` for every vertex.
    pub fn ball_radii(&self, r: usize) -> Rc<BallRadii> {
        if let Some(hit) = self.ball_radii.borrow().get(&r) {
            return hit.clone();
        }
        let computed =
            Rc::new(all_ball_radii(self.graph, r, &self.cfg.eig).map_err(|e| e.to_string()));
        self.ball_radii.borrow_mut().insert(r, computed.clone());
        computed
    }

    pub fn hypotheses(&self, r: usize) -> Rc<HypothesisCheck> {
        if let Some(hit) = self.hypotheses.borrow().get(&r) {
            return hit.clone();
        }
        let g = self.graph;
        let robust = robust_average_degree(g, r);
        let edge_distance = self.edge_distance().map(|(d, _, _)| d);
        let check = Rc::new(HypothesisCheck {
            r,
            vertex_count: g.vertex_count(),
            edge_count: g.edge_count(),
            min_degree: g.min_degree(),
            min_degree_ok: !g.is_empty() && g.min_degree() >= 2,
            average_degree: g.average_degree(),
            regular_degree: g.regular_degree(),
            robust_degree: robust.value,
            robust_witness: robust.witness,
            robust_empties: robust.empties,
            robust_degree_ok: !g.is_empty()
                && !robust.empties
                && robust.value >= AverageDegree::from_integer(1),
            diameter: self.diameter(),
            max_edge_distance: edge_distance,
            edge_distance_ok: edge_distance.is_some_and(|d| d >= 2 * r),
        });
        self.hypotheses.borrow_mut().insert(r, check.clone());
        check
    }

    fn timed(&self, run: impl FnOnce() -> BoundReport) -> BoundReport {
        let start = Instant::now();
        let mut report = run();
        if self.cfg.record_timing {
            report.runtime_ms = Some(start.elapsed().as_millis() as u64);
        }
        report
    }

    fn report(
        &self,
        bound: BoundName,
        r: usize,
        lhs: Option<f64>,
        rhs: Option<f64>,
        witness: Option<Vec<Vertex>>,
        hypothesis_ok: bool,
    ) -> BoundReport {
        BoundReport::new(
            &self.graph_id,
            bound,
            r,
            lhs,
            rhs,
            witness,
            hypothesis_ok,
            self.tol(),
        )
    }

    /// Largest unraveled ball against the degree sum with the cosine factor.
    pub fn theorem1(&self, r: usize) -> BoundReport {
        self.timed(|| {
            let h = self.hypotheses(r);
            let rhs = theorem1_rhs(self.graph, r).ok();
            if self.graph.is_empty() {
                return self
                    .report(BoundName::Theorem1, r, None, rhs, None, false)
                    .with_note("empty graph");
            }
            let best = self.pivot().max_ball_radius(r, self.cfg.eig.tol);
            let report = self.report(
                BoundName::Theorem1,
                r,
                Some(best.radius.lower),
                rhs,
                Some(vec![best.vertex]),
                h.min_degree_ok,
            );
            if h.min_degree_ok {
                report
            } else {
                report.with_note(format!("minimum degree {} below 2", h.min_degree))
            }
        })
    }

    fn cover_report(&self, bound: BoundName, r: usize, rhs: Result<f64>) -> BoundReport {
        let h = self.hypotheses(r);
        let rhs = rhs.ok();
        if self.graph.is_empty() {
            return self
                .report(bound, r, None, rhs, None, false)
                .with_note("empty graph");
        }
        match self.cover() {
            Ok((bracket, depth)) => {
                let report = self.report(bound, r, Some(bracket.lower), rhs, None, h.min_degree_ok);
                let mut note = format!("cover lower bound at depth {depth}");
                if !h.min_degree_ok {
                    note.push_str(&format!("; minimum degree {} below 2", h.min_degree));
                }
                report.with_note(note)
            }
            Err(e) => self
                .report(bound, r, None, rhs, None, h.min_degree_ok)
                .with_note(e),
        }
    }

    /// Cover spectral radius against the radius-free degree sum.
    pub fn corollary_lb2(&self, r: usize) -> BoundReport {
        self.timed(|| self.cover_report(BoundName::CorollaryLb2, r, corollary_lb2_rhs(self.graph)))
    }

    /// Cover spectral radius against the geometric-mean form.
    pub fn amgm(&self, r: usize) -> BoundReport {
        self.timed(|| self.cover_report(BoundName::AmgmHooryForm, r, amgm_rhs(self.graph)))
    }

    /// Largest ball against the average-degree bound.
    pub fn lemma_lb3(&self, r: usize) -> BoundReport {
        self.timed(|| {
            let h = self.hypotheses(r);
            let hypothesis_ok =
                !self.graph.is_empty() && h.average_degree >= AverageDegree::from_integer(1);
            let rhs = lemma_lb3_rhs(h.average_degree, r).ok();
            if self.graph.is_empty() {
                return self
                    .report(BoundName::LemmaLb3, r, None, rhs, None, false)
                    .with_note("empty graph");
            }
            let report = match &*self.ball_radii(r) {
                Ok(radii) => {
                    let (v, value) = argmax(radii).expect("nonempty graph");
                    self.report(
                        BoundName::LemmaLb3,
                        r,
                        Some(value),
                        rhs,
                        Some(vec![v]),
                        hypothesis_ok,
                    )
                }
                Err(e) => self
                    .report(BoundName::LemmaLb3, r, None, rhs, None, hypothesis_ok)
                    .with_note(e.clone()),
            };
            if hypothesis_ok {
                report
            } else {
                report.with_note(format!("average degree {} below 1", h.average_degree))
            }
        })
    }

    fn lambda2(&self) -> std::result::Result<f64, String> {
        if self.graph.vertex_count() < 2 {
            return Err("fewer than 2 vertices".to_string());
        }
        self.spectrum().map(|s| s.lambda2)
    }

    /// Second eigenvalue against the robust-degree bound.
    pub fn theorem8(&self, r: usize) -> BoundReport {
        self.timed(|| {
            let h = self.hypotheses(r);
            let hypothesis_ok = r >= 1 && h.robust_degree_ok;
            let rhs = theorem8_rhs(h.robust_degree, r).ok();
            let witness = h.robust_witness.map(|v| vec![v]);
            let report = match self.lambda2() {
                Ok(l2) => self.report(
                    BoundName::Theorem8,
                    r,
                    Some(l2),
                    rhs,
                    witness,
                    hypothesis_ok,
                ),
                Err(e) => {
                    return self
                        .report(BoundName::Theorem8, r, None, rhs, witness, hypothesis_ok)
                        .with_note(e)
                }
            };
            if hypothesis_ok {
                report
            } else if h.robust_empties {
                report.with_note(format!("deleting a ball of radius {r} empties the graph"))
            } else {
                report.with_note(format!("robust average degree {} below 1", h.robust_degree))
            }
        })
    }

    /// Second eigenvalue of a regular graph with two far-apart edges.
    pub fn alon_boppana_classic(&self, r: usize) -> BoundReport {
        self.timed(|| {
            let h = self.hypotheses(r);
            let regular = h.regular_degree.filter(|&d| d >= 2);
            let hypothesis_ok = r >= 1 && regular.is_some() && h.edge_distance_ok;
            let rhs = regular.and_then(|d| alon_boppana_classic_rhs(d, r).ok());
            let witness = self
                .edge_distance()
                .map(|(_, (a, b), (c, d))| vec![a, b, c, d]);
            let report = match self.lambda2() {
                Ok(l2) => self.report(
                    BoundName::AlonBoppanaClassic,
                    r,
                    Some(l2),
                    rhs,
                    witness,
                    hypothesis_ok,
                ),
                Err(e) => {
                    return self
                        .report(
                            BoundName::AlonBoppanaClassic,
                            r,
                            None,
                            rhs,
                            witness,
                            hypothesis_ok,
                        )
                        .with_note(e)
                }
            };
            if hypothesis_ok {
                report
            } else if regular.is_none() {
                report.with_note("not regular of degree at least 2")
            } else {
                report.with_note(format!(
                    "largest edge distance {:?} below {}",
                    h.max_edge_distance,
                    2 * r
                ))
            }
        })
    }

    /// Every ball dominates its unraveled ball; the report carries the
    /// vertex with the smallest margin.
    pub fn lemma4_unravel(&self, r: usize) -> BoundReport {
        self.timed(|| {
            if self.graph.is_empty() {
                return self
                    .report(BoundName::Lemma4Unravel, r, None, None, None, false)
                    .with_note("empty graph");
            }
            let radii = self.ball_radii(r);
            let radii = match &*radii {
                Ok(radii) => radii,
                Err(e) => {
                    return self
                        .report(BoundName::Lemma4Unravel, r, None, None, None, true)
                        .with_note(e.clone())
                }
            };
            let pivot = self.pivot();
            let cover: Vec<f64> = crate::par::map_indices(self.graph.vertex_count(), |v| {
                pivot.ball_radius(v, r).midpoint()
            });
            let worst = (0..radii.len())
                .min_by(|&a, &b| {
                    (radii[a] - cover[a])
                        .total_cmp(&(radii[b] - cover[b]))
                        .then(a.cmp(&b))
                })
                .expect("nonempty graph");
            self.report(
                BoundName::Lemma4Unravel,
                r,
                Some(radii[worst]),
                Some(cover[worst]),
                Some(vec![worst]),
                true,
            )
        })
    }

    /// Exact closed-walk domination of the ball over the unraveled ball,
    /// on small graphs. `lhs` is the smallest count difference, `rhs` is 0.
    pub fn lemma4_closed_walks(&self, r: usize) -> BoundReport {
        self.timed(|| {
            let n = self.graph.vertex_count();
            let limit = self.cfg.injection_max_vertices;
            if n == 0 || n > limit {
                return self
                    .report(
                        BoundName::Lemma4ClosedWalks,
                        r,
                        None,
                        Some(0.0),
                        None,
                        false,
                    )
                    .with_note(format!("exact counting limited to 1..={limit} vertices"));
            }
            let mut worst: Option<(f64, Vertex)> = None;
            for v in 0..n {
                let check = closed_walk_injection_check_with_cap(
                    self.graph,
                    v,
                    r,
                    self.cfg.injection_max_length,
                    self.cfg.injection_node_cap,
                );
                match check {
                    Ok(check) => {
                        let gap = check.min_gap();
                        if worst.is_none_or(|(g, _)| gap < g) {
                            worst = Some((gap, v));
                        }
                    }
                    Err(e) => {
                        return self
                            .report(
                                BoundName::Lemma4ClosedWalks,
                                r,
                                None,
                                Some(0.0),
                                Some(vec![v]),
                                false,
                            )
                            .with_note(e.to_string())
                    }
                }
            }
            let (gap, v) = worst.expect("nonempty graph");
            self.report(
                BoundName::Lemma4ClosedWalks,
                r,
                Some(gap),
                Some(0.0),
                Some(vec![v]),
                true,
            )
        })
    }

    /// Rebuilds the two far-apart balls of the second-eigenvalue argument.
    ///
    /// `lhs` is `lambda_2(G)` and `rhs` is `min(lambda_1(G_1), lambda_1(G_2))`.
    /// The report also fails if the balls touch, or if either ball falls
    /// short of the robust-degree bound.
    pub fn theorem8_deflation(&self, r: usize) -> BoundReport {
        self.timed(|| self.deflation_inner(r))
    }

    fn deflation_inner(&self, r: usize) -> BoundReport {
        let bound = BoundName::Theorem8Deflation;
        let h = self.hypotheses(r);
        let hypothesis_ok = r >= 1 && h.robust_degree_ok;
        if !hypothesis_ok {
            let why = if r == 0 {
                "radius must be at least 1".to_string()
            } else if h.robust_empties {
                format!("deleting a ball of radius {r} empties the graph")
            } else {
                format!("robust average degree {} below 1", h.robust_degree)
            };
            return self
                .report(bound, r, None, None, None, false)
                .with_note(why);
        }
        let fail = |note: String| {
            self.report(bound, r, None, None, None, true)
                .with_note(note)
        };
        let radii = self.ball_radii(r - 1);
        let (v1, lambda_g1) = match &*radii {
            Ok(radii) => argmax(radii).expect("nonempty graph"),
            Err(e) => return fail(e.clone()),
        };
        let rest = match delete_ball(self.graph, v1, r) {
            Ok(rest) => rest,
            Err(e) => return fail(e.to_string()),
        };
        let rest_radii = match all_ball_radii(&rest.graph, r - 1, &self.cfg.eig) {
            Ok(radii) => radii,
            Err(e) => return fail(e.to_string()),
        };
        let (local_v2, lambda_g2) = argmax(&rest_radii).expect("deletion leaves vertices");
        let v2 = rest.original(local_v2);

        let first = ball(self.graph, v1, r - 1).expect("vertex in range");
        let second_local = ball(&rest.graph, local_v2, r - 1).expect("vertex in range");
        let second: Vec<Vertex> = second_local
            .members()
            .iter()
            .map(|&u| rest.original(u))
            .collect();
        let disjoint = second.iter().all(|&u| !first.contains(u));
        let separated = second
            .iter()
            .all(|&u| self.graph.neighbors(u).iter().all(|&w| !first.contains(w)));

        let lambda2 = match self.lambda2() {
            Ok(l2) => l2,
            Err(e) => return fail(e),
        };
        let lambda_star = theorem8_rhs(h.robust_degree, r).expect("hypothesis checked");
        let floor = lambda_g1.min(lambda_g2);
        let mut report = self.report(
            bound,
            r,
            Some(lambda2),
            Some(floor),
            Some(vec![v1, v2]),
            true,
        );
        let mut problems = Vec::new();
        if !disjoint {
            problems.push("balls overlap".to_string());
        }
        if !separated {
            problems.push("balls are adjacent".to_string());
        }
        if floor < lambda_star - self.tol() {
            problems.push(format!(
                "ball radius {floor} below robust bound {lambda_star}"
            ));
        }
        let summary =
            format!("lambda1(G1)={lambda_g1}, lambda1(G2)={lambda_g2}, robust bound={lambda_star}");
        if problems.is_empty() {
            report.note = Some(summary);
        } else {
            report.pass = false;
            report.note = Some(format!("{}; {summary}", problems.join("; ")));
        }
        report
    }

    /// The six bound reports for radius `r`.
    pub fn evaluate_all(&self, r: usize) -> Vec<BoundReport> {
        vec![
            self.theorem1(r),
            self.corollary_lb2(r),
            self.amgm(r),
            self.lemma_lb3(r),
            self.theorem8(r),
            self.alon_boppana_classic(r),
        ]
    }

    /// The bound reports followed by the lemma-level checks.
    pub fn verify(&self, r: usize) -> Vec<BoundReport> {
        let mut reports = self.evaluate_all(r);
        reports.push(self.lemma4_unravel(r));
        reports.push(self.lemma4_closed_walks(r));
        reports.push(self.theorem8_deflation(r));
        reports
    }

    /// The logarithmic bound for context, when its hypotheses hold.
    pub fn hoory_context(&self, r: usize) -> Option<HooryContext> {
        let h = self.hypotheses(r);
        let two = AverageDegree::from_integer(2);
        if r < 2 || h.robust_empties || h.robust_degree < two {
            return None;
        }
        let s = self.spectrum().ok()?;
        Some(HooryContext {
            graph_id: self.graph_id.clone(),
            r,
            c: 1.0,
            lhs: s.lambda2.max(s.lambda_min.abs()),
            rhs: hoory_rhs(h.robust_degree, r, 1.0),
            label: HOORY_LABEL.to_string(),
        })
    }
}

/// Every bound for one graph and radius.
pub fn evaluate_all(
    graph_id: &str,
    graph: &Graph,
    r: usize,
    cfg: &CheckConfig,
) -> Vec<BoundReport> {
    GraphContext::new(graph_id, graph, cfg.clone()).evaluate_all(r)
}

pub fn two_ball_deflation_check(graph: &Graph, r: usize, tol: f64) -> BoundReport {
    let cfg = CheckConfig {
        slack_tol: tol,
        ..CheckConfig::default()
    };
    GraphContext::new("graph", graph, cfg).theorem8_deflation(r)
}

pub fn lemma4_unravel_check(graph: &Graph, r: usize, tol: f64) -> BoundReport {
    let cfg = CheckConfig {
        slack_tol: tol,
        ..CheckConfig::default()
    };
    GraphContext::new("graph", graph, cfg).lemma4_unravel(r)
}

pub fn lemma4_closed_walk_check(graph: &Graph, r: usize) -> BoundReport {
    GraphContext::new("graph", graph, CheckConfig::default()).lemma4_closed_walks(r)
}

/// Average degree as a float, for display.
pub fn average_degree_f64(graph: &Graph) -> f64 {
    ratio_to_f64(graph.average_degree())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, generate, petersen, Family, GenSpec};
    use std::f64::consts::PI;

    fn by_name(reports: &[BoundReport], bound: BoundName) -> &BoundReport {
        reports.iter().find(|r| r.bound == bound).unwrap()
    }

    #[test]
    fn petersen_reports() {
        let g = petersen().unwrap();
        let ctx = GraphContext::new("petersen", &g, CheckConfig::default());
        let reports = ctx.evaluate_all(2);
        assert_eq!(reports.len(), 6);
        let t1 = by_name(&reports, BoundName::Theorem1);
        assert!((t1.rhs.unwrap() - 2.0).abs() < 1e-12);
        assert!(t1.pass);
        assert_eq!(t1.witness, Some(vec![0]));
        assert!(by_name(&reports, BoundName::CorollaryLb2).pass);
        assert!(by_name(&reports, BoundName::AmgmHooryForm).pass);
        assert!(by_name(&reports, BoundName::LemmaLb3).pass);
        // Deleting any radius-2 ball empties the Petersen graph.
        assert!(!by_name(&reports, BoundName::Theorem8).hypothesis_ok);
        assert!(!by_name(&reports, BoundName::AlonBoppanaClassic).hypothesis_ok);
        for r in &reports {
            assert_eq!(r.pass, r.hypothesis_ok && r.slack.unwrap() >= -r.tol);
        }
    }

    #[test]
    fn cycle_reports() {
        let g = cycle(30).unwrap();
        let ctx = GraphContext::new("c30", &g, CheckConfig::default());
        let reports = ctx.verify(2);
        for r in &reports {
            assert!(r.pass || r.bound == BoundName::Lemma4ClosedWalks, "{r:?}");
        }
        assert!(!by_name(&reports, BoundName::Lemma4ClosedWalks).hypothesis_ok);
        let t1 = by_name(&reports, BoundName::Theorem1);
        assert!((t1.lhs.unwrap() - 2.0 * (PI / 6.0).cos()).abs() < 1e-10);
        assert!(by_name(&reports, BoundName::AlonBoppanaClassic).hypothesis_ok);
    }

    #[test]
    fn tree_reports() {
        let spec = GenSpec::new(Family::RandomTree { n: 25 }, 3);
        let g = generate(&spec).unwrap();
        let reports = GraphContext::new("tree", &g, CheckConfig::default()).evaluate_all(3);
        assert!(!by_name(&reports, BoundName::Theorem1).hypothesis_ok);
        let lb3 = by_name(&reports, BoundName::LemmaLb3);
        assert!(lb3.hypothesis_ok && lb3.pass);
    }

    #[test]
    fn complete_graph_skips_robust_bound() {
        let g = complete(5).unwrap();
        let reports = GraphContext::new("k5", &g, CheckConfig::default()).verify(2);
        let t8 = by_name(&reports, BoundName::Theorem8);
        assert!(!t8.hypothesis_ok && !t8.pass);
        assert!(!by_name(&reports, BoundName::Theorem8Deflation).hypothesis_ok);
        assert!(by_name(&reports, BoundName::Lemma4ClosedWalks).pass);
        assert!(!two_ball_deflation_check(&g, 1, 1e-9).hypothesis_ok);
    }

    #[test]
    fn deflation_on_long_cycle() {
        let g = cycle(40).unwrap();
        let report = two_ball_deflation_check(&g, 2, 1e-9);
        assert!(report.pass, "{report:?}");
        assert!((report.lhs.unwrap() - 2.0 * (2.0 * PI / 40.0).cos()).abs() < 1e-9);
        assert!((report.rhs.unwrap() - 2.0 * (PI / 4.0).cos()).abs() < 1e-9);
        let w = report.witness.unwrap();
        assert!(crate::graph::distance(&g, w[0], w[1]).unwrap().unwrap() > 2);
    }

    #[test]
    fn deflation_on_random_regular() {
        let spec = GenSpec::new(Family::RandomRegular { n: 500, d: 3 }, 11);
        let g = generate(&spec).unwrap();
        let report = two_ball_deflation_check(&g, 3, 1e-9);
        assert!(report.pass, "{report:?}");
        assert!(report.slack.unwrap() > 0.0);
    }

    #[test]
    fn logarithmic_context_never_gates() {
        let spec = GenSpec::new(Family::RandomRegular { n: 200, d: 4 }, 1);
        let g = generate(&spec).unwrap();
        let ctx = GraphContext::new("rr", &g, CheckConfig::default());
        let h = ctx.hoory_context(2).unwrap();
        assert_eq!(h.label, HOORY_LABEL);
        assert_eq!(h.c, 1.0);
        assert!(ctx.hoory_context(1).is_none());
    }

    #[test]
    fn reports_serialize_with_optional_fields() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let reports = GraphContext::new("g", &g, CheckConfig::default()).verify(1);
        let json = serde_json::to_string(&reports).unwrap();
        let back: Vec<BoundReport> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, reports);
    }
}
