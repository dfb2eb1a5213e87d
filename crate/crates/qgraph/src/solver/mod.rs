//! Eigenvalues and eigenfunctions of the second-derivative Laplacian on
//! metric graphs with Natural/Dirichlet conditions.
//!
//! Method: scan sigma_min of the secular matrix M(k) over a k-grid, bracket
//! dips, refine each bracket by golden section, classify multiplicity by the
//! number of singular values under threshold, and audit the count of found
//! eigenvalues against Weyl-style brackets derived from the Betti-number
//! bounds. The zero eigenvalue is handled symbolically (one constant function
//! per Dirichlet-free component); M(k) is not defined at k = 0 in this
//! parametrization.

mod eigenfunction;
mod scan;
mod secular;
mod von_below;

pub use eigenfunction::{
    eigenfunction, level_counts, rayleigh_quotient, Eigenfunction, LevelCount, SampledFunction,
};
pub use secular::{half_edges, secular_matrix, EdgeEnd, SecularSystem};
pub use von_below::{von_below_spectrum, VonBelowTransfer};

/// Exact L2 product of two trigonometric profiles on a parameter range;
/// shared with the symmetrization replay.
pub(crate) fn trig_inner(k: f64, c1: (f64, f64), c2: (f64, f64), x0: f64, x1: f64) -> f64 {
    eigenfunction::trig::inner(k, c1, c2, x0, x1)
}

/// Exact gradient-square integral of a trigonometric profile on a range.
pub(crate) fn trig_grad_sq(k: f64, a: f64, b: f64, x0: f64, x1: f64) -> f64 {
    eigenfunction::trig::grad_sq(k, a, b, x0, x1)
}

use crate::metric::{MetricGraph, VertexCondition, Violation};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("metric graph fails validation: {0:?}")]
    InvalidGraph(Vec<Violation>),
    #[error("scan incomplete on k in [{k_lo}, {k_hi}]: found {found} eigenvalues, expected between {expected_min} and {expected_max}")]
    ScanIncomplete { k_lo: f64, k_hi: f64, found: usize, expected_min: usize, expected_max: usize },
    #[error("lambda = {lambda} is not an eigenvalue: sigma_min = {sigma_min} above threshold {threshold}")]
    NotAnEigenvalue { lambda: f64, sigma_min: f64, threshold: f64 },
    #[error("function is zero (or numerically zero) on the whole graph")]
    ZeroFunction,
    #[error("sampled function disagrees at vertex {0}")]
    VertexMismatch(usize),
}

/// Eigenvalue numbering convention attached to a spectrum.
///
/// `FromZero` labels 0 = mu_0 < mu_1 <= ... (natural-conditions graphs);
/// `FromOne` labels lambda_1 <= lambda_2 <= ... and is used whenever
/// Dirichlet vertices are present. The stored list is identical either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    FromZero,
    FromOne,
}

/// Scan tuning knobs.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// k-grid step; default pi / (64 L).
    pub grid_step: Option<f64>,
    /// Singularity threshold relative to the Frobenius norm of M(k).
    pub sigma_threshold_rel: f64,
    /// Grid refinements (step / 4 each) after a failed completeness audit.
    pub max_rescans: u32,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { grid_step: None, sigma_threshold_rel: 1e-7, max_rescans: 3 }
    }
}

/// Scan diagnostics recorded with a spectrum.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanDiagnostics {
    pub grid_step: f64,
    pub sigma_threshold_rel: f64,
    pub k_max_scanned: f64,
    pub rescans: u32,
    /// Count audit per connected component: (found, expected_min, expected_max).
    pub audits: Vec<(usize, usize, usize)>,
}

/// Ordered metric-graph eigenvalues with multiplicities flattened in.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricSpectrum {
    pub eigenvalues: Vec<f64>,
    pub convention: Convention,
    pub diagnostics: ScanDiagnostics,
}

impl MetricSpectrum {
    /// lambda_k in the from-one numbering (k >= 1).
    pub fn lambda(&self, k: usize) -> f64 {
        self.eigenvalues[k - 1]
    }

    /// mu_j in the from-zero numbering (j >= 0); only meaningful when the
    /// zero eigenvalue is present.
    pub fn mu(&self, j: usize) -> f64 {
        self.eigenvalues[j]
    }

    /// Run lengths of equal eigenvalues (tolerance 1e-8 relative).
    pub fn multiplicity_runs(&self) -> Vec<usize> {
        let mut runs = Vec::new();
        let mut i = 0;
        while i < self.eigenvalues.len() {
            let mut j = i + 1;
            while j < self.eigenvalues.len()
                && (self.eigenvalues[j] - self.eigenvalues[i]).abs()
                    <= 1e-8 * self.eigenvalues[j].abs().max(1.0)
            {
                j += 1;
            }
            runs.push(j - i);
            i = j;
        }
        runs
    }
}

/// Split every Dirichlet vertex of degree >= 2 into degree-one Dirichlet
/// vertices. Spectrum-preserving (the form domain factorizes at a zero
/// trace), keeps edge indices and lengths; needed so the audit bounds apply.
pub(crate) fn split_dirichlet_vertices(mg: &MetricGraph) -> MetricGraph {
    let mut edges = mg.edges().to_vec();
    let mut conditions = mg.conditions().to_vec();
    for v in 0..mg.vertex_count() {
        if mg.condition(v) != VertexCondition::Dirichlet || mg.degree(v) <= 1 {
            continue;
        }
        let mut first = true;
        for edge in edges.iter_mut() {
            // Detach every half-edge after the first onto a fresh vertex.
            if edge.u == v {
                if first {
                    first = false;
                } else {
                    edge.u = conditions.len();
                    conditions.push(VertexCondition::Dirichlet);
                }
            }
            if edge.w == v {
                if first {
                    first = false;
                } else {
                    edge.w = conditions.len();
                    conditions.push(VertexCondition::Dirichlet);
                }
            }
        }
    }
    MetricGraph::with_conditions(conditions.len(), edges, conditions)
        .expect("dirichlet splitting preserves validity")
}

/// First `n` eigenvalues of the metric Laplacian.
pub fn eigenvalues(
    mg: &MetricGraph,
    n: usize,
    options: &SolverOptions,
) -> Result<MetricSpectrum, SolverError> {
    assert!(n >= 1);
    let violations: Vec<Violation> = mg
        .validate()
        .into_iter()
        .filter(|v| !matches!(v, Violation::Disconnected | Violation::SuppressibleVertex { .. }))
        .collect();
    if !violations.is_empty() {
        return Err(SolverError::InvalidGraph(violations));
    }
    let split = split_dirichlet_vertices(mg);
    let mut all = Vec::new();
    let mut diagnostics = ScanDiagnostics {
        grid_step: 0.0,
        sigma_threshold_rel: options.sigma_threshold_rel,
        k_max_scanned: 0.0,
        rescans: 0,
        audits: Vec::new(),
    };
    for comp in split.components() {
        let (sub, _) = split.induced(&comp);
        if sub.edge_count() == 0 {
            continue;
        }
        let found = scan::component_eigenvalues(&sub, n, options, &mut diagnostics)?;
        all.extend(found);
    }
    all.sort_by(f64::total_cmp);
    all.truncate(n);
    let convention = if mg.has_dirichlet() { Convention::FromOne } else { Convention::FromZero };
    Ok(MetricSpectrum { eigenvalues: all, convention, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surgery::generators as gen;
    use std::f64::consts::PI;

    fn assert_spectrum(actual: &[f64], expected: &[f64], rel: f64) {
        assert!(actual.len() >= expected.len(), "too few eigenvalues: {actual:?}");
        for (a, e) in actual.iter().zip(expected) {
            let scale = e.abs().max(1e-3);
            assert!((a - e).abs() <= rel * scale, "{a} vs {e} (all: {actual:?})");
        }
    }

    #[test]
    fn interval_neumann_eigenvalues() {
        let mg = gen::interval(1.0);
        let spec = eigenvalues(&mg, 6, &SolverOptions::default()).unwrap();
        let expected: Vec<f64> = (0..6).map(|m| (m as f64 * PI).powi(2)).collect();
        assert_spectrum(&spec.eigenvalues, &expected, 1e-9);
        assert_eq!(spec.convention, Convention::FromZero);
    }

    #[test]
    fn interval_dirichlet_eigenvalues() {
        let mg = gen::interval_with_conditions(1.0, &[0, 1]);
        let spec = eigenvalues(&mg, 5, &SolverOptions::default()).unwrap();
        let expected: Vec<f64> = (1..=5).map(|m| (m as f64 * PI).powi(2)).collect();
        assert_spectrum(&spec.eigenvalues, &expected, 1e-9);
        assert_eq!(spec.convention, Convention::FromOne);
    }

    #[test]
    fn interval_mixed_eigenvalues() {
        let mg = gen::interval_with_conditions(1.0, &[0]);
        let spec = eigenvalues(&mg, 5, &SolverOptions::default()).unwrap();
        let expected: Vec<f64> = (0..5).map(|m| ((2 * m + 1) as f64 * PI / 2.0).powi(2)).collect();
        assert_spectrum(&spec.eigenvalues, &expected, 1e-9);
    }

    #[test]
    fn circle_eigenvalues_are_double() {
        let mg = gen::circle(2.0 * PI);
        let spec = eigenvalues(&mg, 7, &SolverOptions::default()).unwrap();
        let expected = [0.0, 1.0, 1.0, 4.0, 4.0, 9.0, 9.0];
        assert_spectrum(&spec.eigenvalues, &expected, 1e-9);
    }

    #[test]
    fn equilateral_three_star() {
        let mg = gen::equilateral(&gen::star(3), 1.0);
        let spec = eigenvalues(&mg, 4, &SolverOptions::default()).unwrap();
        let q = PI / 2.0;
        let expected = [0.0, q * q, q * q, PI * PI];
        assert_spectrum(&spec.eigenvalues, &expected, 1e-8);
    }

    #[test]
    fn dirichlet_split_normalization_preserves_spectrum() {
        // Circle with a Dirichlet vertex = interval with both ends Dirichlet.
        let circle_d = crate::metric::MetricGraph::new(
            1,
            vec![crate::metric::MetricEdge { u: 0, w: 0, length: 1.0 }],
            &[0],
        )
        .unwrap();
        let spec = eigenvalues(&circle_d, 4, &SolverOptions::default()).unwrap();
        let expected: Vec<f64> = (1..=4).map(|m| (m as f64 * PI).powi(2)).collect();
        assert_spectrum(&spec.eigenvalues, &expected, 1e-9);
    }

    #[test]
    fn disconnected_union_merges_component_spectra() {
        // Two disjoint Neumann intervals of lengths 1 and 1/2.
        let mg = crate::metric::MetricGraph::new(
            4,
            vec![
                crate::metric::MetricEdge { u: 0, w: 1, length: 1.0 },
                crate::metric::MetricEdge { u: 2, w: 3, length: 0.5 },
            ],
            &[],
        )
        .unwrap();
        let spec = eigenvalues(&mg, 5, &SolverOptions::default()).unwrap();
        let expected = [0.0, 0.0, PI * PI, 4.0 * PI * PI, 4.0 * PI * PI];
        assert_spectrum(&spec.eigenvalues, &expected, 1e-9);
    }

    #[test]
    fn suppression_invariance_first_eigenvalues() {
        let g = gen::lollipop(1.5, 0.7);
        let sub = crate::surgery::subdivide_edge(&g, 0, 0.4).unwrap();
        let a = eigenvalues(&g, 6, &SolverOptions::default()).unwrap();
        let b = eigenvalues(&sub, 6, &SolverOptions::default()).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((x - y).abs() <= 1e-8 * x.abs().max(1.0), "{x} vs {y}");
        }
    }

    #[test]
    fn scaling_law() {
        let g = gen::pumpkin(&[0.8, 1.1, 1.3]);
        let c = 1.7;
        let a = eigenvalues(&g, 6, &SolverOptions::default()).unwrap();
        let b = eigenvalues(&g.scaled(c), 6, &SolverOptions::default()).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((y - x / (c * c)).abs() <= 1e-9 * x.abs().max(1.0), "{x} vs {y}");
        }
    }

    #[test]
    fn coarse_grid_without_rescans_reports_incomplete() {
        let g = gen::circle(2.0 * PI);
        let opts = SolverOptions {
            grid_step: Some(2.5),
            sigma_threshold_rel: 1e-7,
            max_rescans: 0,
        };
        let result = eigenvalues(&g, 8, &opts);
        assert!(
            matches!(result, Err(SolverError::ScanIncomplete { .. })),
            "expected incompleteness, got {result:?}"
        );
    }

    #[test]
    fn necklace_first_eigenvalue_matches_loop() {
        let g = gen::symmetric_necklace(&[0.5, 0.8], Some((0.6, 0.3)));
        let total = g.total_length();
        let spec = eigenvalues(&g, 2, &SolverOptions::default()).unwrap();
        let expected = 4.0 * PI * PI / (total * total);
        assert!((spec.eigenvalues[1] - expected).abs() <= 1e-8 * expected);
    }
}
