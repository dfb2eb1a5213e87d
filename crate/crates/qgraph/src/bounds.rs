//! Eigenvalue bound catalog: every bound as a pure formula paired with an
//! explicit applicability predicate, plus the evaluation engine producing
//! verdict reports against computed spectra.
//!
//! Hypotheses differ per bound (not-a-cycle, connectivity thresholds,
//! Dirichlet placement, equilateral, tree); silent misuse is the main
//! correctness hazard, so applicability is evaluated from graph invariants
//! before any eigenvalue is compared. Entries marked `asserted: false` are
//! recorded for reference but excluded from soundness assertions (dual
//! normalization forms and the trivial shortest-edge candidate).

use crate::graph::{CombinatorialGraph, DiscreteSpectrum};
use crate::metric::{MetricGraph, VertexCondition};
use crate::p_laplacian::{discrete_gamma1_p, pi_p, PExponent, PGapOptions};
use crate::solver::MetricSpectrum;
use crate::surgery;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoundError {
    #[error("bound {id}: missing input: {what}")]
    MissingInput { id: &'static str, what: String },
    #[error("bound {id}: spectrum does not cover index {index}")]
    IndexOutOfRange { id: &'static str, index: usize },
    #[error("unknown bound id {0}")]
    UnknownId(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    NotApplicable,
}

/// Which eigenvalue a bound constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// gamma_1: second-smallest Laplacian eigenvalue.
    DiscreteGamma1,
    /// gamma_1^(p): discrete p-Laplacian gap.
    DiscreteGamma1P,
    /// alpha_1: second-smallest normalized-Laplacian eigenvalue.
    NormalizedAlpha1,
    /// alpha_{k-1} for k = 2..=V.
    NormalizedAlphaK,
    /// mu_1: first nonzero metric eigenvalue (natural conditions).
    MetricMu1,
    /// lambda_1 in the from-one numbering (Dirichlet present).
    MetricLambda1,
    /// lambda_k for every covered k.
    MetricLambdaK,
}

/// Catalog entry: identifier, side, target and whether the soundness sweep
/// asserts it.
#[derive(Debug, Clone, Copy)]
pub struct BoundSpec {
    pub id: &'static str,
    pub name: &'static str,
    pub side: Side,
    pub target: Target,
    pub asserted: bool,
}

/// One evaluated bound against one eigenvalue.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub id: String,
    pub side: Side,
    pub applicable: bool,
    /// Eigenvalue index for per-k bounds (from-one numbering; for normalized
    /// bounds the index k labels alpha_{k-1}).
    pub index: Option<usize>,
    pub bound: Option<f64>,
    pub eigenvalue: Option<f64>,
    /// eigenvalue - bound for lower bounds, bound - eigenvalue for upper.
    pub margin: Option<f64>,
    pub verdict: Verdict,
}

impl BoundReport {
    fn not_applicable(spec: &BoundSpec, index: Option<usize>) -> BoundReport {
        BoundReport {
            id: spec.id.to_string(),
            side: spec.side,
            applicable: false,
            index,
            bound: None,
            eigenvalue: None,
            margin: None,
            verdict: Verdict::NotApplicable,
        }
    }

    fn evaluated(
        spec: &BoundSpec,
        index: Option<usize>,
        bound: f64,
        eigenvalue: f64,
        tol: f64,
    ) -> BoundReport {
        let margin = match spec.side {
            Side::Lower => eigenvalue - bound,
            Side::Upper => bound - eigenvalue,
        };
        BoundReport {
            id: spec.id.to_string(),
            side: spec.side,
            applicable: true,
            index,
            bound: Some(bound),
            eigenvalue: Some(eigenvalue),
            margin: Some(margin),
            verdict: if margin >= -tol { Verdict::Holds } else { Verdict::Violated },
        }
    }
}

/// Absolute comparison tolerances; metric/discrete spectra carry scan-level
/// accuracy, normalized spectra are algebraic.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub lambda: f64,
    pub normalized: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { lambda: 1e-8, normalized: 1e-10 }
    }
}

/// The fixed catalog, in deterministic order.
pub fn catalog() -> Vec<BoundSpec> {
    use Side::*;
    use Target::*;
    vec![
        BoundSpec { id: "B1", name: "fiedler_lower", side: Lower, target: DiscreteGamma1, asserted: true },
        BoundSpec { id: "B2", name: "fiedler_upper", side: Upper, target: DiscreteGamma1, asserted: true },
        BoundSpec { id: "B2T", name: "fiedler_upper_tight", side: Upper, target: DiscreteGamma1, asserted: true },
        BoundSpec { id: "B3", name: "fiedler_p_lower", side: Lower, target: DiscreteGamma1P, asserted: true },
        BoundSpec { id: "B4", name: "nicaise_lower", side: Lower, target: MetricMu1, asserted: true },
        BoundSpec { id: "B5", name: "edge_count_upper", side: Upper, target: MetricMu1, asserted: true },
        BoundSpec { id: "B6", name: "connectivity_two_lower", side: Lower, target: MetricMu1, asserted: true },
        BoundSpec { id: "B7", name: "connectivity_refined_lower", side: Lower, target: MetricMu1, asserted: true },
        BoundSpec { id: "B8", name: "connectivity_quadratic_lower", side: Lower, target: MetricMu1, asserted: true },
        BoundSpec { id: "B9", name: "longest_edge_upper", side: Upper, target: MetricMu1, asserted: true },
        BoundSpec { id: "B10", name: "two_dirichlet_lower", side: Lower, target: MetricLambda1, asserted: true },
        BoundSpec { id: "B10A", name: "two_dirichlet_lower_alt_norm", side: Lower, target: MetricLambda1, asserted: false },
        BoundSpec { id: "B11", name: "one_dirichlet_lower", side: Lower, target: MetricLambda1, asserted: true },
        BoundSpec { id: "B11A", name: "one_dirichlet_lower_alt_norm", side: Lower, target: MetricLambda1, asserted: false },
        BoundSpec { id: "B12", name: "tree_diameter_lower", side: Lower, target: MetricLambda1, asserted: true },
        BoundSpec { id: "B13", name: "tree_one_neumann_lower", side: Lower, target: MetricLambda1, asserted: true },
        BoundSpec { id: "B14", name: "friedlander_all_k_lower", side: Lower, target: MetricLambdaK, asserted: true },
        BoundSpec { id: "B15", name: "betti_all_k_lower", side: Lower, target: MetricLambdaK, asserted: true },
        BoundSpec { id: "B16", name: "betti_all_k_upper", side: Upper, target: MetricLambdaK, asserted: true },
        BoundSpec { id: "B17L", name: "equilateral_lower", side: Lower, target: MetricLambdaK, asserted: true },
        BoundSpec { id: "B17U", name: "equilateral_upper", side: Upper, target: MetricLambdaK, asserted: true },
        BoundSpec { id: "B18", name: "normalized_trivial_lower", side: Lower, target: NormalizedAlpha1, asserted: true },
        BoundSpec { id: "B19", name: "normalized_connectivity_lower", side: Lower, target: NormalizedAlpha1, asserted: true },
        BoundSpec { id: "B20", name: "normalized_all_k_lower", side: Lower, target: NormalizedAlphaK, asserted: true },
        BoundSpec { id: "B21", name: "normalized_friedlander_lower", side: Lower, target: NormalizedAlphaK, asserted: true },
        BoundSpec { id: "B22", name: "normalized_all_k_upper", side: Upper, target: NormalizedAlphaK, asserted: true },
        BoundSpec { id: "B23L", name: "lollipop_lower", side: Lower, target: MetricLambdaK, asserted: true },
        BoundSpec { id: "B23U", name: "lollipop_upper", side: Upper, target: MetricLambdaK, asserted: true },
        BoundSpec { id: "BX1", name: "shortest_edge_trivial_upper", side: Upper, target: MetricMu1, asserted: false },
    ]
}

pub fn spec_by_id(id: &str) -> Result<BoundSpec, BoundError> {
    catalog()
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| BoundError::UnknownId(id.to_string()))
}

/// Precomputed invariants of a combinatorial graph.
#[derive(Debug, Clone)]
pub struct DiscreteContext {
    pub graph: CombinatorialGraph,
    pub p: PExponent,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub eta: Option<usize>,
    pub deg_max: usize,
    pub v_star: usize,
    pub simple: bool,
    pub complete: bool,
    pub cycle: bool,
}

impl DiscreteContext {
    pub fn new(g: &CombinatorialGraph, p: PExponent) -> DiscreteContext {
        DiscreteContext {
            vertex_count: g.vertex_count(),
            edge_count: g.edge_count(),
            eta: g.edge_connectivity().ok(),
            deg_max: g.max_degree(),
            v_star: g.essential_vertex_count(),
            simple: g.is_simple(),
            complete: g.is_complete_simple(),
            cycle: g.is_cycle_graph(),
            graph: g.clone(),
            p,
        }
    }
}

/// Precomputed invariants of a metric graph, taken on its canonical
/// (degree-two suppressed) form, whose spectrum is identical.
#[derive(Debug, Clone)]
pub struct MetricContext {
    pub suppressed: MetricGraph,
    pub p: PExponent,
    pub total_len: f64,
    pub l_max: f64,
    pub l_min: f64,
    /// Edge count of the canonical form with loops counted twice: the edge
    /// count entering the mu_1 <= pi^2 E^2 / L^2 bound, whose sharpness cases
    /// (flowers, pumpkins) require a loop to count as two edges.
    pub edge_count_effective: usize,
    pub eta: usize,
    pub beta: usize,
    pub neumann_leaves: usize,
    pub dirichlet_count: usize,
    /// Every Dirichlet vertex has degree one.
    pub dirichlet_all_deg_one: bool,
    /// The Dirichlet set equals the full leaf set (no Natural leaf).
    pub dirichlet_exactly_leaves: bool,
    pub is_tree: bool,
    pub is_circle: bool,
    pub is_lollipop: bool,
    pub unit_equilateral: bool,
    pub leaf_diameter: Option<f64>,
    /// Discrete edge connectivity after merging all degree-one vertices into
    /// one (the two-Dirichlet lower bound's hypothesis); None with < 2 leaves.
    pub merged_leaf_eta: Option<usize>,
}

impl MetricContext {
    pub fn new(mg: &MetricGraph, p: PExponent) -> MetricContext {
        let s = mg.suppress_degree_two();
        let leaves = s.leaves();
        let dirichlet = s.dirichlet_vertices();
        let dirichlet_all_deg_one =
            !dirichlet.is_empty() && dirichlet.iter().all(|v| s.degree(*v) == 1);
        let dirichlet_exactly_leaves = !leaves.is_empty()
            && leaves.iter().all(|v| s.condition(*v) == VertexCondition::Dirichlet)
            && dirichlet.len() == leaves.len();
        let merged_leaf_eta = if leaves.len() >= 2 {
            let mut merged = s.clone();
            let mut remaining: Vec<usize> = leaves.clone();
            remaining.sort_unstable();
            let keep = remaining[0];
            for &leaf in remaining.iter().skip(1).rev() {
                merged = surgery::join_vertices(&merged, keep, leaf)
                    .expect("leaf merging is structurally valid");
            }
            Some(merged.discrete_edge_connectivity())
        } else {
            None
        };
        MetricContext {
            total_len: s.total_length(),
            l_max: s.longest_edge(),
            l_min: s.shortest_edge(),
            edge_count_effective: s.edge_count() + s.loop_count(),
            eta: s.discrete_edge_connectivity(),
            beta: s.betti_number(),
            neumann_leaves: s.neumann_leaf_count(),
            dirichlet_count: dirichlet.len(),
            dirichlet_all_deg_one,
            dirichlet_exactly_leaves,
            is_tree: s.betti_number() == 0 && s.is_connected(),
            is_circle: s.is_circle(),
            is_lollipop: s.is_lollipop(),
            // Judged on the graph as presented: an equilateral presentation
            // with degree-two vertices suppresses into longer edges, but the
            // equilateral two-sided bound applies to the presentation (the
            // spectrum is the same and the total length is invariant).
            unit_equilateral: mg.is_unit_equilateral(),
            leaf_diameter: s.leaf_diameter().ok(),
            merged_leaf_eta,
            suppressed: s,
            p,
        }
    }

    fn has_dirichlet(&self) -> bool {
        self.dirichlet_count > 0
    }

    fn p_is_two(&self) -> bool {
        (self.p.get() - 2.0).abs() < 1e-12
    }
}

fn positive_part(x: f64) -> f64 {
    x.max(0.0)
}

/// Bound value (None = not applicable) for a metric-target catalog entry at
/// eigenvalue index k (from-one numbering; ignored by fixed-target bounds).
pub fn metric_bound_value(spec: &BoundSpec, ctx: &MetricContext, k: usize) -> Option<f64> {
    let p = ctx.p.get();
    let pp = pi_p(ctx.p);
    let l = ctx.total_len;
    let weak = p.min(2.0) - 1.0; // min(1, p-1)
    let strong = p.max(2.0) - 1.0; // max(1, p-1)
    match spec.id {
        "B4" => (!ctx.has_dirichlet() && ctx.p_is_two()).then(|| PI * PI / (l * l)),
        "B5" => (!ctx.has_dirichlet() && ctx.p_is_two()).then(|| {
            let e = ctx.edge_count_effective as f64;
            PI * PI * e * e / (l * l)
        }),
        "B6" => (!ctx.has_dirichlet() && ctx.eta >= 2)
            .then(|| (p - 1.0) * (2.0 * pp / l).powf(p)),
        "B7" => (!ctx.has_dirichlet() && ctx.eta >= 3).then(|| {
            (1..=ctx.eta)
                .map(|h| {
                    let hf = h as f64;
                    let denom = l + positive_part(hf - 2.0) * ctx.l_max;
                    (p - 1.0) * (hf * pp / denom).powf(p)
                })
                .fold(0.0, f64::max)
        }),
        "B8" => (!ctx.has_dirichlet() && ctx.eta >= 2 && ctx.p_is_two()).then(|| {
            let eta = ctx.eta as f64;
            let denom = l + ctx.l_max * positive_part(eta - 2.0);
            eta * eta * PI * PI / (denom * denom)
        }),
        "B9" => (!ctx.has_dirichlet() && ctx.p_is_two() && l < 2.0 * ctx.l_max)
            .then(|| 4.0 * PI * PI / (ctx.l_max * ctx.l_max)),
        "B10" | "B10A" => {
            let applicable = ctx.dirichlet_exactly_leaves
                && ctx.dirichlet_count >= 2
                && ctx.merged_leaf_eta.is_some_and(|eta| eta >= 2);
            let factor = if spec.id == "B10" { weak } else { strong };
            applicable.then(|| factor * (pp / l).powf(p))
        }
        "B11" | "B11A" => {
            let factor = if spec.id == "B11" { weak } else { strong };
            ctx.has_dirichlet().then(|| factor * (pp / (2.0 * l)).powf(p))
        }
        "B12" => {
            let applicable = ctx.is_tree && ctx.dirichlet_exactly_leaves && ctx.p_is_two();
            applicable
                .then(|| ctx.leaf_diameter.map(|d| PI * PI / (d * d)))
                .flatten()
        }
        "B13" => {
            // Exactly one Neumann leaf, every other leaf Dirichlet, and no
            // Dirichlet conditions away from the leaves.
            let applicable = ctx.is_tree
                && ctx.p_is_two()
                && ctx.neumann_leaves == 1
                && ctx.dirichlet_count >= 1
                && ctx.dirichlet_all_deg_one;
            applicable
                .then(|| ctx.leaf_diameter.map(|d| PI * PI / (4.0 * d * d)))
                .flatten()
        }
        "B14" => {
            let k_min = if ctx.has_dirichlet() { 1 } else { 2 };
            (ctx.p_is_two() && k >= k_min).then(|| {
                let kf = k as f64;
                kf * kf * PI * PI / (4.0 * l * l)
            })
        }
        "B15" => {
            let s = ctx.neumann_leaves + ctx.beta;
            let k_min = if ctx.has_dirichlet() { 1usize } else { 2usize };
            (ctx.p_is_two() && !ctx.is_circle && k >= s.max(k_min)).then(|| {
                let shift = k as f64 - 0.5 * s as f64;
                shift * shift * PI * PI / (l * l)
            })
        }
        "B16" => (ctx.p_is_two()
            && !ctx.is_circle
            && (ctx.dirichlet_count == 0 || ctx.dirichlet_all_deg_one))
        .then(|| {
            let s = 0.5 * (ctx.neumann_leaves + ctx.beta) as f64;
            let shift = k as f64 - 2.0 + ctx.beta as f64 + ctx.dirichlet_count as f64 + s;
            shift * shift * PI * PI / (l * l)
        }),
        "B17L" => (ctx.p_is_two() && ctx.unit_equilateral && !ctx.has_dirichlet()).then(|| {
            let shift = positive_part(k as f64 - 1.0 - l);
            shift * shift * PI * PI / (l * l)
        }),
        "B17U" => (ctx.p_is_two() && ctx.unit_equilateral && !ctx.has_dirichlet()).then(|| {
            let shift = k as f64 - 1.0 + l;
            shift * shift * PI * PI / (l * l)
        }),
        "B23L" => (ctx.p_is_two() && ctx.is_lollipop && k >= 2).then(|| {
            let shift = k as f64 - 1.0;
            shift * shift * PI * PI / (l * l)
        }),
        "B23U" => (ctx.p_is_two() && ctx.is_lollipop && k >= 2).then(|| {
            let kf = k as f64;
            kf * kf * PI * PI / (l * l)
        }),
        "BX1" => (!ctx.has_dirichlet()).then(|| (p - 1.0) * (2.0 * pp / ctx.l_min).powf(p)),
        _ => None,
    }
}

/// Bound value for a combinatorial-target entry; for the per-k normalized
/// bounds, `k` indexes alpha_{k-1}.
pub fn discrete_bound_value(
    spec: &BoundSpec,
    ctx: &DiscreteContext,
    k: usize,
) -> Result<Option<f64>, BoundError> {
    let v = ctx.vertex_count as f64;
    let e = ctx.edge_count as f64;
    let eta = || -> Result<f64, BoundError> {
        ctx.eta.map(|x| x as f64).ok_or(BoundError::MissingInput {
            id: spec.id,
            what: "edge connectivity of a single-vertex graph".into(),
        })
    };
    Ok(match spec.id {
        "B1" => Some(2.0 * eta()? * (1.0 - (PI / v).cos())),
        "B2" => {
            if ctx.simple && ctx.vertex_count >= 2 {
                Some(eta()? + 1.0)
            } else {
                None
            }
        }
        "B2T" => {
            if ctx.simple && !ctx.complete && ctx.vertex_count >= 2 {
                Some(eta()?)
            } else {
                None
            }
        }
        "B3" => {
            let path_gap = if (ctx.p.get() - 2.0).abs() < 1e-12 {
                2.0 * (1.0 - (PI / v).cos())
            } else {
                let path = surgery::generators::path(ctx.vertex_count);
                discrete_gamma1_p(&path, ctx.p, &PGapOptions { restarts: 12, ..Default::default() })
                    .map_err(|err| BoundError::MissingInput {
                        id: spec.id,
                        what: format!("path-graph p-gap: {err}"),
                    })?
                    .value
            };
            Some(eta()? * path_gap)
        }
        "B18" => Some(2.0 * eta()? / ctx.deg_max as f64 * (1.0 - (PI / v).cos())),
        "B19" => {
            let et = eta()?;
            Some(1.0 - (PI * et / (e + positive_part(et - 2.0))).cos())
        }
        "B20" => {
            let vs = ctx.v_star as f64;
            let applicable = !ctx.cycle
                && (2..=ctx.vertex_count).contains(&k)
                && k as f64 >= e - vs + 1.0;
            applicable.then(|| {
                let arg = (2.0 * k as f64 - e + vs - 1.0) * PI / (2.0 * e);
                1.0 - arg.cos()
            })
        }
        "B21" => (2..=ctx.vertex_count)
            .contains(&k)
            .then(|| 1.0 - (k as f64 * PI / (2.0 * e)).cos()),
        "B22" => {
            let vs = ctx.v_star as f64;
            let applicable = !ctx.cycle
                && (2..=ctx.vertex_count).contains(&k)
                && 2.0 * k as f64 - v - vs - 1.0 + e <= 0.0;
            applicable.then(|| {
                let arg = (2.0 * k as f64 + 3.0 * e - v - vs - 1.0) * PI / (2.0 * e);
                1.0 - arg.cos()
            })
        }
        _ => None,
    })
}

/// Evaluation outcome: reports plus per-bound errors that did not abort the
/// rest of the catalog.
#[derive(Debug, Clone, Default)]
pub struct Evaluation {
    pub reports: Vec<BoundReport>,
    pub errors: Vec<(String, String)>,
}

impl Evaluation {
    /// Violated verdicts among asserted entries.
    pub fn violations(&self) -> Vec<&BoundReport> {
        let asserted: std::collections::HashSet<&str> =
            catalog().iter().filter(|s| s.asserted).map(|s| s.id).collect();
        self.reports
            .iter()
            .filter(|r| r.verdict == Verdict::Violated && asserted.contains(r.id.as_str()))
            .collect()
    }
}

/// Evaluate every metric-target bound against a computed spectrum.
pub fn evaluate_metric_all(
    ctx: &MetricContext,
    spectrum: &MetricSpectrum,
    tol: &Tolerances,
) -> Evaluation {
    let mut out = Evaluation::default();
    let n = spectrum.eigenvalues.len();
    for spec in catalog() {
        match spec.target {
            Target::MetricMu1 => {
                let Some(mu1) = first_positive(&spectrum.eigenvalues) else {
                    out.errors
                        .push((spec.id.to_string(), "no positive eigenvalue in spectrum".into()));
                    continue;
                };
                match metric_bound_value(&spec, ctx, 0) {
                    Some(b) => {
                        out.reports.push(BoundReport::evaluated(&spec, None, b, mu1, tol.lambda))
                    }
                    None => out.reports.push(BoundReport::not_applicable(&spec, None)),
                }
            }
            Target::MetricLambda1 => {
                let lambda1 = spectrum.eigenvalues[0];
                match metric_bound_value(&spec, ctx, 1) {
                    Some(b) => out.reports.push(BoundReport::evaluated(
                        &spec,
                        Some(1),
                        b,
                        lambda1,
                        tol.lambda,
                    )),
                    None => out.reports.push(BoundReport::not_applicable(&spec, Some(1))),
                }
            }
            Target::MetricLambdaK => {
                for k in 1..=n {
                    match metric_bound_value(&spec, ctx, k) {
                        Some(b) => out.reports.push(BoundReport::evaluated(
                            &spec,
                            Some(k),
                            b,
                            spectrum.eigenvalues[k - 1],
                            tol.lambda,
                        )),
                        None => out.reports.push(BoundReport::not_applicable(&spec, Some(k))),
                    }
                }
            }
            _ => {}
        }
    }
    out
}

/// Evaluate every combinatorial-target bound; the Laplacian and normalized
/// spectra are recomputed from the graph (dense and cheap at this scale).
pub fn evaluate_discrete_all(ctx: &DiscreteContext, tol: &Tolerances) -> Evaluation {
    let mut out = Evaluation::default();
    let lap = ctx.graph.laplacian_spectrum();
    let norm: Option<DiscreteSpectrum> = ctx.graph.normalized_spectrum().ok();
    let p_gap = if (ctx.p.get() - 2.0).abs() < 1e-12 {
        (ctx.vertex_count >= 2).then(|| lap.gap())
    } else {
        discrete_gamma1_p(&ctx.graph, ctx.p, &PGapOptions { restarts: 12, ..Default::default() })
            .ok()
            .map(|r| r.value)
    };
    for spec in catalog() {
        match spec.target {
            Target::DiscreteGamma1 | Target::DiscreteGamma1P => {
                if ctx.vertex_count < 2 {
                    out.errors.push((spec.id.to_string(), "single-vertex graph".into()));
                    continue;
                }
                let eigenvalue = match spec.target {
                    Target::DiscreteGamma1 => lap.gap(),
                    _ => match p_gap {
                        Some(g) => g,
                        None => {
                            out.errors.push((spec.id.to_string(), "p-gap unavailable".into()));
                            continue;
                        }
                    },
                };
                match discrete_bound_value(&spec, ctx, 0) {
                    Ok(Some(b)) => out
                        .reports
                        .push(BoundReport::evaluated(&spec, None, b, eigenvalue, tol.lambda)),
                    Ok(None) => out.reports.push(BoundReport::not_applicable(&spec, None)),
                    Err(err) => out.errors.push((spec.id.to_string(), err.to_string())),
                }
            }
            Target::NormalizedAlpha1 | Target::NormalizedAlphaK => {
                let Some(norm) = &norm else {
                    out.errors
                        .push((spec.id.to_string(), "normalized spectrum unavailable".into()));
                    continue;
                };
                if ctx.vertex_count < 2 {
                    out.errors.push((spec.id.to_string(), "single-vertex graph".into()));
                    continue;
                }
                let ks: Vec<usize> = match spec.target {
                    Target::NormalizedAlpha1 => vec![2],
                    _ => (2..=ctx.vertex_count).collect(),
                };
                for k in ks {
                    let eigenvalue = norm.eigenvalues[k - 1];
                    let index =
                        if spec.target == Target::NormalizedAlpha1 { None } else { Some(k) };
                    match discrete_bound_value(&spec, ctx, k) {
                        Ok(Some(b)) => out.reports.push(BoundReport::evaluated(
                            &spec,
                            index,
                            b,
                            eigenvalue,
                            tol.normalized,
                        )),
                        Ok(None) => out.reports.push(BoundReport::not_applicable(&spec, index)),
                        Err(err) => out.errors.push((spec.id.to_string(), err.to_string())),
                    }
                }
            }
            _ => {}
        }
    }
    out
}

fn first_positive(eigenvalues: &[f64]) -> Option<f64> {
    eigenvalues.iter().copied().find(|&l| l > 1e-10)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{eigenvalues, SolverOptions};
    use crate::surgery::generators as gen;

    fn p2() -> PExponent {
        PExponent::new(2.0).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn catalog_is_fixed_and_unique() {
        let cat = catalog();
        assert!(cat.len() >= 23, "catalog has {} entries", cat.len());
        let mut ids: Vec<&str> = cat.iter().map(|s| s.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), catalog().len(), "duplicate bound ids");
        assert!(spec_by_id("B16").is_ok());
        assert!(spec_by_id("nope").is_err());
    }

    #[test]
    fn fiedler_lower_is_sharp_on_paths() {
        let g = gen::path(3);
        let ctx = DiscreteContext::new(&g, p2());
        let spec = spec_by_id("B1").unwrap();
        let bound = discrete_bound_value(&spec, &ctx, 0).unwrap().unwrap();
        assert!(close(bound, 1.0, 1e-12));
        assert!(close(g.spectral_gap(), 1.0, 1e-12));
    }

    #[test]
    fn fiedler_upper_needs_simple_graphs() {
        // A 3-pumpkin on two vertices has gamma_1 = 6 > eta + 1 = 4; the
        // upper bound only claims simple graphs.
        let pumpkin = CombinatorialGraph::new(2, vec![(0, 1), (0, 1), (0, 1)]).unwrap();
        let ctx = DiscreteContext::new(&pumpkin, p2());
        let spec = spec_by_id("B2").unwrap();
        assert_eq!(discrete_bound_value(&spec, &ctx, 0).unwrap(), None);
        let tight = spec_by_id("B2T").unwrap();
        assert_eq!(discrete_bound_value(&tight, &ctx, 0).unwrap(), None);
        // Complete graphs exclude only the tighter form.
        let k4 = gen::complete(4);
        let ctx = DiscreteContext::new(&k4, p2());
        assert!(discrete_bound_value(&spec, &ctx, 0).unwrap().is_some());
        assert_eq!(discrete_bound_value(&tight, &ctx, 0).unwrap(), None);
    }

    #[test]
    fn wheel_normalized_connectivity_bound() {
        let g = gen::wheel(6); // W7: E = 12, eta = 3
        let ctx = DiscreteContext::new(&g, p2());
        assert_eq!(ctx.eta, Some(3));
        let spec = spec_by_id("B19").unwrap();
        let bound = discrete_bound_value(&spec, &ctx, 0).unwrap().unwrap();
        let expected = 1.0 - (3.0 * PI / 13.0).cos();
        assert!(close(bound, expected, 1e-14));
        let alpha1 = g.normalized_gap().unwrap();
        // Closed form 1 - (2/3) cos(2 pi / 6) = 2/3.
        assert!(close(alpha1, 2.0 / 3.0, 1e-12));
        assert!(bound <= alpha1 + 1e-12);
    }

    #[test]
    fn circle_applicability_and_equalities() {
        let circle = gen::circle(2.0 * PI);
        let ctx = MetricContext::new(&circle, p2());
        assert!(ctx.is_circle);
        let spectrum = eigenvalues(&circle, 6, &SolverOptions::default()).unwrap();
        let eval = evaluate_metric_all(&ctx, &spectrum, &Tolerances::default());
        let b15: Vec<_> = eval.reports.iter().filter(|r| r.id == "B15").collect();
        assert!(!b15.is_empty());
        assert!(b15.iter().all(|r| r.verdict == Verdict::NotApplicable));
        let b16: Vec<_> = eval.reports.iter().filter(|r| r.id == "B16").collect();
        assert!(b16.iter().all(|r| r.verdict == Verdict::NotApplicable));
        // B6 and B8 hold with equality (margin ~ 0).
        for id in ["B6", "B8"] {
            let r = eval.reports.iter().find(|r| r.id == id).unwrap();
            assert_eq!(r.verdict, Verdict::Holds);
            assert!(r.margin.unwrap().abs() < 1e-7, "{id} margin {:?}", r.margin);
        }
        // B5 with loops counted twice: bound 4 pi^2 / L^2 = mu_1 exactly.
        let r = eval.reports.iter().find(|r| r.id == "B5").unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(r.margin.unwrap().abs() < 1e-7);
    }

    #[test]
    fn interval_nicaise_equality() {
        let mg = gen::interval(1.0);
        let ctx = MetricContext::new(&mg, p2());
        let spectrum = eigenvalues(&mg, 3, &SolverOptions::default()).unwrap();
        let eval = evaluate_metric_all(&ctx, &spectrum, &Tolerances::default());
        let b4 = eval.reports.iter().find(|r| r.id == "B4").unwrap();
        assert_eq!(b4.verdict, Verdict::Holds);
        assert!(b4.margin.unwrap().abs() <= 1e-10, "margin {:?}", b4.margin);
    }

    #[test]
    fn three_star_betti_upper_is_sharp_at_k2() {
        let mg = gen::equilateral(&gen::star(3), 1.0);
        let ctx = MetricContext::new(&mg, p2());
        let spec = spec_by_id("B16").unwrap();
        let bound = metric_bound_value(&spec, &ctx, 2).unwrap();
        assert!(close(bound, PI * PI / 4.0, 1e-12), "bound {bound}");
        let spectrum = eigenvalues(&mg, 2, &SolverOptions::default()).unwrap();
        assert!(close(spectrum.eigenvalues[1], PI * PI / 4.0, 1e-8));
    }

    #[test]
    fn tree_with_dirichlet_leaves_gets_diameter_and_merge_bounds() {
        let tree = gen::equilateral(&gen::star(3), 1.0);
        let leaves = tree.leaves();
        let mg =
            MetricGraph::new(tree.vertex_count(), tree.edges().to_vec(), &leaves).unwrap();
        let ctx = MetricContext::new(&mg, p2());
        let spectrum = eigenvalues(&mg, 2, &SolverOptions::default()).unwrap();
        let eval = evaluate_metric_all(&ctx, &spectrum, &Tolerances::default());
        let b12 = eval.reports.iter().find(|r| r.id == "B12").unwrap();
        assert_eq!(b12.verdict, Verdict::Holds, "{b12:?}");
        // Merging the three Dirichlet leaves yields eta = 3, so B10 applies.
        let b10 = eval.reports.iter().find(|r| r.id == "B10").unwrap();
        assert_eq!(b10.verdict, Verdict::Holds, "{b10:?}");
    }

    #[test]
    fn b15_dominates_b14_in_range() {
        // Formula-level: (k - s/2)^2 >= k^2/4 for k >= s.
        for s in 0..12usize {
            for k in s.max(2)..(s + 30) {
                let lhs = (k as f64 - 0.5 * s as f64).powi(2);
                let rhs = (k as f64).powi(2) / 4.0;
                assert!(lhs >= rhs - 1e-12, "s={s} k={k}");
            }
        }
    }

    #[test]
    fn b7_monotone_in_h_iff_long_total_length() {
        let p = PExponent::new(2.0).unwrap();
        let pp = pi_p(p);
        let value = |h: f64, l: f64, lmax: f64| {
            (h * pp / (l + positive_part(h - 2.0) * lmax)).powi(2)
        };
        // L >= 2 l_max: increasing in h >= 2.
        let (l, lmax) = (10.0, 2.0);
        for h in 2..8 {
            assert!(value(h as f64 + 1.0, l, lmax) >= value(h as f64, l, lmax) - 1e-12);
        }
        // L < 2 l_max: not monotone.
        let (l, lmax) = (3.0, 2.0);
        let seq: Vec<f64> = (2..8).map(|h| value(h as f64, l, lmax)).collect();
        assert!(seq.windows(2).any(|w| w[1] < w[0]));
    }

    #[test]
    fn lollipop_rows_present_for_all_k() {
        let mg = gen::lollipop(1.0, 0.25);
        let ctx = MetricContext::new(&mg, p2());
        assert!(ctx.is_lollipop);
        let spectrum = eigenvalues(&mg, 6, &SolverOptions::default()).unwrap();
        let eval = evaluate_metric_all(&ctx, &spectrum, &Tolerances::default());
        for id in ["B23L", "B23U"] {
            let rows: Vec<_> =
                eval.reports.iter().filter(|r| r.id == id && r.applicable).collect();
            assert_eq!(rows.len(), 5, "{id}: k = 2..6");
            assert!(rows.iter().all(|r| r.verdict == Verdict::Holds), "{rows:?}");
        }
    }

    #[test]
    fn recorded_only_entries_are_marked() {
        let cat = catalog();
        for id in ["B10A", "B11A", "BX1"] {
            assert!(!cat.iter().find(|s| s.id == id).unwrap().asserted);
        }
    }

    #[test]
    fn single_vertex_graph_reports_missing_input() {
        let g = CombinatorialGraph::new(1, vec![]).unwrap();
        let ctx = DiscreteContext::new(&g, p2());
        let eval = evaluate_discrete_all(&ctx, &Tolerances::default());
        assert!(eval.errors.iter().any(|(id, _)| id == "B1"));
    }

    #[test]
    fn p_gap_bound_evaluates_away_from_two() {
        // At p != 2 the connectivity bound compares optimizer values on both
        // sides; the pumpkin doubles the path quotient exactly.
        let p3 = PExponent::new(3.0).unwrap();
        let pumpkin = CombinatorialGraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let ctx = DiscreteContext::new(&pumpkin, p3);
        let eval = evaluate_discrete_all(&ctx, &Tolerances::default());
        let b3 = eval.reports.iter().find(|r| r.id == "B3").unwrap();
        assert_eq!(b3.verdict, Verdict::Holds, "{b3:?}");
        assert!(b3.margin.unwrap().abs() < 1e-5, "equality case margin {:?}", b3.margin);
    }
}
