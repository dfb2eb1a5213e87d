//! Secular matrix assembly: the linear system in per-edge trigonometric
//! coefficients whose singularity at wavenumber k characterizes eigenvalues
//! lambda = k^2 of the metric Laplacian.
//!
//! Ansatz on edge e of length l: u_e(x) = a_e cos(kx) + b_e sin(kx), columns
//! (2e, 2e+1) = (a_e, b_e). Rows per vertex, vertices ascending, incident
//! half-edges by ascending edge index with the start end before the far end:
//!
//! * Natural vertex of degree d: d-1 chained continuity rows plus one
//!   Kirchhoff row (sum of inward derivatives).
//! * Dirichlet vertex of degree d: d trace rows.
//!
//! Total rows = sum of degrees = 2E, matching the 2E unknowns.

use crate::linalg::Matrix;
use crate::metric::{MetricGraph, VertexCondition};

/// Which end of an edge touches the vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeEnd {
    Start,
    Far,
}

/// Secular system M(k): lambda = k^2 is an eigenvalue iff M(k) is singular.
#[derive(Debug, Clone)]
pub struct SecularSystem {
    pub k: f64,
    pub matrix: Matrix,
}

impl SecularSystem {
    /// Structural norm scale max(1, k) sqrt(2E): entries are bounded by
    /// max(1, k), and unlike the Frobenius norm of M(k) this never vanishes.
    /// At a root of full multiplicity (circles) M(k) itself tends to zero,
    /// so singularity thresholds must be relative to this scale instead.
    pub fn norm_scale(&self) -> f64 {
        self.k.max(1.0) * (self.matrix.rows as f64).sqrt()
    }
}

/// Incident half-edges of a vertex in deterministic order.
pub fn half_edges(mg: &MetricGraph, v: usize) -> Vec<(usize, EdgeEnd)> {
    let mut out = Vec::new();
    for (i, e) in mg.edges().iter().enumerate() {
        if e.u == v {
            out.push((i, EdgeEnd::Start));
        }
        if e.w == v {
            out.push((i, EdgeEnd::Far));
        }
    }
    out
}

/// Value-trace coefficients (on a_e, b_e) of the half-edge at its vertex.
fn trace_coeffs(k: f64, len: f64, end: EdgeEnd) -> (f64, f64) {
    match end {
        EdgeEnd::Start => (1.0, 0.0),
        EdgeEnd::Far => ((k * len).cos(), (k * len).sin()),
    }
}

/// Inward-derivative coefficients (derivative pointing into the edge).
fn inward_derivative_coeffs(k: f64, len: f64, end: EdgeEnd) -> (f64, f64) {
    match end {
        EdgeEnd::Start => (0.0, k),
        EdgeEnd::Far => (k * (k * len).sin(), -k * (k * len).cos()),
    }
}

/// Assemble M(k) for wavenumber k > 0.
pub fn secular_matrix(mg: &MetricGraph, k: f64) -> SecularSystem {
    assert!(k > 0.0, "secular matrix is parametrized for k > 0");
    let ecount = mg.edge_count();
    let mut m = Matrix::zeros(2 * ecount, 2 * ecount);
    let mut row = 0;
    for v in 0..mg.vertex_count() {
        let incident = half_edges(mg, v);
        match mg.condition(v) {
            VertexCondition::Dirichlet => {
                for &(e, end) in &incident {
                    let (ca, cb) = trace_coeffs(k, mg.edges()[e].length, end);
                    m[(row, 2 * e)] += ca;
                    m[(row, 2 * e + 1)] += cb;
                    row += 1;
                }
            }
            VertexCondition::Natural => {
                for pair in incident.windows(2) {
                    let (e1, end1) = pair[0];
                    let (e2, end2) = pair[1];
                    let (ca1, cb1) = trace_coeffs(k, mg.edges()[e1].length, end1);
                    let (ca2, cb2) = trace_coeffs(k, mg.edges()[e2].length, end2);
                    m[(row, 2 * e1)] += ca1;
                    m[(row, 2 * e1 + 1)] += cb1;
                    m[(row, 2 * e2)] -= ca2;
                    m[(row, 2 * e2 + 1)] -= cb2;
                    row += 1;
                }
                for &(e, end) in &incident {
                    let (da, db) = inward_derivative_coeffs(k, mg.edges()[e].length, end);
                    m[(row, 2 * e)] += da;
                    m[(row, 2 * e + 1)] += db;
                }
                row += 1;
            }
        }
    }
    debug_assert_eq!(row, 2 * ecount, "row count must equal 2E");
    SecularSystem { k, matrix: m }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::svd_square;
    use crate::surgery::generators as gen;
    use std::f64::consts::PI;

    fn sigma_min_rel(mg: &MetricGraph, k: f64) -> f64 {
        let sys = secular_matrix(mg, k);
        let svd = svd_square(&sys.matrix);
        svd.values[0] / sys.norm_scale()
    }

    #[test]
    fn interval_neumann_matrix_matches_hand_assembly() {
        let mg = gen::interval(1.0);
        let k = 1.3f64;
        let sys = secular_matrix(&mg, k);
        // Vertex 0 Kirchhoff: k * b = 0 -> row (0, k).
        assert_eq!(sys.matrix[(0, 0)], 0.0);
        assert!((sys.matrix[(0, 1)] - k).abs() < 1e-15);
        // Vertex 1 Kirchhoff: k sin(k) a - k cos(k) b = 0.
        assert!((sys.matrix[(1, 0)] - k * k.sin()).abs() < 1e-15);
        assert!((sys.matrix[(1, 1)] + k * k.cos()).abs() < 1e-15);
    }

    #[test]
    fn interval_neumann_singular_iff_sin_k_zero() {
        let mg = gen::interval(1.0);
        assert!(sigma_min_rel(&mg, PI) < 1e-12);
        assert!(sigma_min_rel(&mg, 2.0 * PI) < 1e-12);
        assert!(sigma_min_rel(&mg, 0.5 * PI) > 1e-3);
    }

    #[test]
    fn interval_dirichlet_singular_iff_sin_k_zero() {
        let mg = gen::interval_with_conditions(1.0, &[0, 1]);
        assert!(sigma_min_rel(&mg, PI) < 1e-12);
        assert!(sigma_min_rel(&mg, 1.0) > 1e-3);
    }

    #[test]
    fn loop_singular_iff_cos_kl_one() {
        let mg = gen::circle(2.0);
        // cos(2k) = 1 at k = pi.
        assert!(sigma_min_rel(&mg, PI) < 1e-12);
        assert!(sigma_min_rel(&mg, 0.5 * PI) > 1e-3);
        // Double root: both singular values vanish at k = pi.
        let sys = secular_matrix(&mg, PI);
        let svd = svd_square(&sys.matrix);
        assert!(svd.values[1] / sys.norm_scale() < 1e-12);
    }

    #[test]
    fn entries_bounded_by_max_one_k() {
        let mg = gen::equilateral(&gen::star(3), 1.0);
        for &k in &[0.3, 1.0, 7.0] {
            let sys = secular_matrix(&mg, k);
            let bound: f64 = k.max(1.0) + 1e-12;
            for i in 0..sys.matrix.rows {
                for j in 0..sys.matrix.cols {
                    assert!(sys.matrix[(i, j)].abs() <= bound);
                }
            }
        }
    }
}
