//! Discrete and metric p-Laplacian machinery: p-trigonometric special
//! functions, interval eigenvalues, the strictly convex p-center, the
//! discrete spectral gap by Rayleigh-quotient minimization, and a
//! discretized upper approximation of the metric gap.

mod discrete;
mod metric_upper;
mod optimize;
mod ptrig;

pub use discrete::{discrete_gamma1_p, p_laplacian_apply, rayleigh_gradient, PGapOptions, PGapResult};
pub use metric_upper::{metric_mu1_p_upper, mu1_upper_study, MeshOptions};
pub use ptrig::{defining_integral, pi_p, pi_p_from_integral, PTrigTable};

use crate::graph::CombinatorialGraph;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PLaplacianError {
    #[error("exponent p = {0} outside (1, inf)")]
    InvalidExponent(f64),
    #[error("descent failed to reach gradient tolerance; best gradient norm {best_grad_norm}")]
    NonConvergence { best_grad_norm: f64 },
}

/// Validated exponent p in (1, inf) with its cached dual p' = p/(p-1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PExponent {
    p: f64,
    dual: f64,
}

impl PExponent {
    pub fn new(p: f64) -> Result<Self, PLaplacianError> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(PLaplacianError::InvalidExponent(p));
        }
        Ok(PExponent { p, dual: p / (p - 1.0) })
    }

    pub fn get(&self) -> f64 {
        self.p
    }

    pub fn dual(&self) -> f64 {
        self.dual
    }
}

/// sign(v) |v|^(p-1), the p-Laplacian's odd power.
pub(crate) fn phi(p: f64, v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.signum() * v.abs().powf(p - 1.0)
    }
}

/// Interval boundary condition pair for the closed-form eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalConditions {
    NeumannNeumann,
    DirichletDirichlet,
    DirichletNeumann,
}

/// First nontrivial p-Laplacian eigenvalue of an interval of length `len`:
/// (p-1)(pi_p/len)^p for NN and DD, (p-1)(pi_p/(2 len))^p for DN.
pub fn interval_eigenvalue_p(p: PExponent, len: f64, bc: IntervalConditions) -> f64 {
    assert!(len > 0.0);
    let pv = p.get();
    let effective = match bc {
        IntervalConditions::NeumannNeumann | IntervalConditions::DirichletDirichlet => len,
        IntervalConditions::DirichletNeumann => 2.0 * len,
    };
    (pv - 1.0) * (pi_p(p) / effective).powf(pv)
}

/// Unique minimizer of gamma -> sum |f(v) - gamma|^p, located by bisection on
/// the monotone derivative.
pub fn center_p(values: &[f64], p: PExponent) -> f64 {
    assert!(!values.is_empty());
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= 0.0 {
        return lo;
    }
    let pv = p.get();
    let deriv = |gamma: f64| values.iter().map(|&v| phi(pv, v - gamma)).sum::<f64>();
    crate::numeric::bisect_decreasing(&deriv, lo, hi, 1e-12 * (hi - lo))
}

/// Discrete p-Rayleigh quotient sum_e |df|^p / inf_c sum_v |f - c|^p.
pub fn rayleigh_p(g: &CombinatorialGraph, f: &[f64], p: PExponent) -> f64 {
    assert_eq!(f.len(), g.vertex_count());
    let pv = p.get();
    let num: f64 = g.edges().iter().map(|&(u, w)| (f[u] - f[w]).abs().powf(pv)).sum();
    let c = center_p(f, p);
    let den: f64 = f.iter().map(|&v| (v - c).abs().powf(pv)).sum();
    if den <= 1e-300 {
        return f64::INFINITY;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surgery::generators as gen;
    use std::f64::consts::PI;

    fn pexp(p: f64) -> PExponent {
        PExponent::new(p).unwrap()
    }

    #[test]
    fn exponent_validation() {
        assert!(PExponent::new(1.0).is_err());
        assert!(PExponent::new(f64::INFINITY).is_err());
        let p = pexp(3.0);
        assert!((p.dual() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn interval_eigenvalues_p2() {
        let p = pexp(2.0);
        let nn = interval_eigenvalue_p(p, 1.0, IntervalConditions::NeumannNeumann);
        assert!((nn - PI * PI).abs() < 1e-12);
        let dn = interval_eigenvalue_p(p, 1.0, IntervalConditions::DirichletNeumann);
        assert!((dn - PI * PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn interval_eigenvalue_p3() {
        let p = pexp(3.0);
        let nn = interval_eigenvalue_p(p, 1.0, IntervalConditions::NeumannNeumann);
        let expected = 2.0 * pi_p(p).powi(3);
        assert!((nn - expected).abs() < 1e-10);
        assert!((nn - 28.29).abs() < 0.02);
    }

    #[test]
    fn center_p2_is_the_mean() {
        let c = center_p(&[0.0, 1.0, 2.0], pexp(2.0));
        assert!((c - 1.0).abs() < 1e-9);
    }

    #[test]
    fn center_symmetric_data_is_zero() {
        for &p in &[1.5, 2.0, 3.0, 7.0] {
            let c = center_p(&[-0.8, 0.8], pexp(p));
            assert!(c.abs() < 1e-10, "p={p}: {c}");
        }
    }

    #[test]
    fn center_p4_outlier_case() {
        // Data {0, 0, 10}: stationarity 2 gamma^(p-1) = (10-gamma)^(p-1)
        // gives gamma = 10 / (1 + 2^(1/(p-1))); p = 4 -> 10 / (1 + 2^(1/3)).
        let p = pexp(4.0);
        let c = center_p(&[0.0, 0.0, 10.0], p);
        let expected = 10.0 / (1.0 + 2.0f64.powf(1.0 / 3.0));
        assert!((c - expected).abs() < 1e-8, "{c} vs {expected}");
        // Dense grid search oracle agrees.
        let objective = |g: f64| 2.0 * g.abs().powi(4) + (10.0 - g).abs().powi(4);
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..=100_000 {
            let g = 10.0 * i as f64 / 100_000.0;
            let val = objective(g);
            if val < best.0 {
                best = (val, g);
            }
        }
        assert!((c - best.1).abs() < 2e-4, "bisection {c} vs grid {}", best.1);
        // Large p pushes the center toward the midrange.
        let c32 = center_p(&[0.0, 0.0, 10.0], pexp(32.0));
        assert!((c32 - 5.0).abs() < 0.35, "{c32}");
    }

    #[test]
    fn rayleigh_quotient_invariances() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let g = gen::wheel(5);
        let p = pexp(2.5);
        for _ in 0..20 {
            let f: Vec<f64> = (0..g.vertex_count()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let base = rayleigh_p(&g, &f, p);
            let scaled: Vec<f64> = f.iter().map(|x| -2.7 * x).collect();
            let shifted: Vec<f64> = f.iter().map(|x| x + 0.9).collect();
            assert!((rayleigh_p(&g, &scaled, p) - base).abs() <= 1e-9 * base);
            assert!((rayleigh_p(&g, &shifted, p) - base).abs() <= 1e-9 * base);
        }
    }
}
