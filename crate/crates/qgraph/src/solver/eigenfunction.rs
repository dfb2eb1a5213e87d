//! Eigenfunction extraction from the secular system's null space, exact
//! trigonometric integrals, closed-form level-set counting, and the
//! piecewise-linear Rayleigh quotient.

use super::secular::secular_matrix;
use super::{split_dirichlet_vertices, SolverError, SolverOptions};
use crate::linalg::svd_square;
use crate::metric::{GraphPoint, MetricGraph, VertexCondition};

/// Exact trigonometric integrals over [x0, x1] at wavenumber k.
pub(crate) mod trig {
    /// int cos^2(kx) dx
    pub fn icc(k: f64, x0: f64, x1: f64) -> f64 {
        0.5 * (x1 - x0) + ((2.0 * k * x1).sin() - (2.0 * k * x0).sin()) / (4.0 * k)
    }

    /// int sin^2(kx) dx
    pub fn iss(k: f64, x0: f64, x1: f64) -> f64 {
        0.5 * (x1 - x0) - ((2.0 * k * x1).sin() - (2.0 * k * x0).sin()) / (4.0 * k)
    }

    /// int sin(kx) cos(kx) dx
    pub fn isc(k: f64, x0: f64, x1: f64) -> f64 {
        -((2.0 * k * x1).cos() - (2.0 * k * x0).cos()) / (4.0 * k)
    }

    /// L2 product of two trig profiles (a_i cos + b_i sin) on [x0, x1].
    pub fn inner(k: f64, c1: (f64, f64), c2: (f64, f64), x0: f64, x1: f64) -> f64 {
        let (a1, b1) = c1;
        let (a2, b2) = c2;
        a1 * a2 * icc(k, x0, x1) + (a1 * b2 + b1 * a2) * isc(k, x0, x1) + b1 * b2 * iss(k, x0, x1)
    }

    /// int (a cos(kx) + b sin(kx)) dx
    pub fn integral(k: f64, a: f64, b: f64, x0: f64, x1: f64) -> f64 {
        a * ((k * x1).sin() - (k * x0).sin()) / k - b * ((k * x1).cos() - (k * x0).cos()) / k
    }

    /// int |d/dx (a cos + b sin)|^2 dx
    pub fn grad_sq(k: f64, a: f64, b: f64, x0: f64, x1: f64) -> f64 {
        k * k * (a * a * iss(k, x0, x1) - 2.0 * a * b * isc(k, x0, x1) + b * b * icc(k, x0, x1))
    }
}

/// Per-edge trigonometric eigenfunction at wavenumber k, normalized in L2.
#[derive(Debug, Clone)]
pub struct Eigenfunction {
    graph: MetricGraph,
    k: f64,
    /// (a_e, b_e) per edge: psi_e(x) = a cos(kx) + b sin(kx).
    coeffs: Vec<(f64, f64)>,
}

/// Level-set cardinality nu(t); infinite when the function is identically t
/// on some edge (only possible for t = 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelCount {
    Finite(usize),
    Infinite,
}

impl Eigenfunction {
    pub fn wavenumber(&self) -> f64 {
        self.k
    }

    pub fn lambda(&self) -> f64 {
        self.k * self.k
    }

    pub fn graph(&self) -> &MetricGraph {
        &self.graph
    }

    pub fn coeffs(&self) -> &[(f64, f64)] {
        &self.coeffs
    }

    pub fn evaluate(&self, p: GraphPoint) -> f64 {
        let (a, b) = self.coeffs[p.edge];
        a * (self.k * p.x).cos() + b * (self.k * p.x).sin()
    }

    pub fn derivative(&self, p: GraphPoint) -> f64 {
        let (a, b) = self.coeffs[p.edge];
        self.k * (-a * (self.k * p.x).sin() + b * (self.k * p.x).cos())
    }

    /// Amplitude and phase: psi_e(x) = R cos(kx - phi).
    pub fn amplitude_phase(&self, edge: usize) -> (f64, f64) {
        let (a, b) = self.coeffs[edge];
        (a.hypot(b), b.atan2(a))
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.graph
            .edges()
            .iter()
            .enumerate()
            .map(|(e, edge)| trig::inner(self.k, self.coeffs[e], self.coeffs[e], 0.0, edge.length))
            .sum()
    }

    /// int_G psi dx (zero for positive eigenvalues on Dirichlet-free graphs).
    pub fn integral(&self) -> f64 {
        self.graph
            .edges()
            .iter()
            .enumerate()
            .map(|(e, edge)| {
                let (a, b) = self.coeffs[e];
                trig::integral(self.k, a, b, 0.0, edge.length)
            })
            .sum()
    }

    /// Trace value at a vertex (from its first incident half-edge).
    pub fn vertex_value(&self, v: usize) -> f64 {
        for (e, edge) in self.graph.edges().iter().enumerate() {
            if edge.u == v {
                return self.evaluate(GraphPoint { edge: e, x: 0.0 });
            }
            if edge.w == v {
                return self.evaluate(GraphPoint { edge: e, x: edge.length });
            }
        }
        0.0
    }

    pub fn vertex_values(&self) -> Vec<f64> {
        (0..self.graph.vertex_count()).map(|v| self.vertex_value(v)).collect()
    }

    /// Largest trace mismatch across Natural vertices.
    pub fn continuity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for v in 0..self.graph.vertex_count() {
            if self.graph.condition(v) != VertexCondition::Natural {
                continue;
            }
            let traces: Vec<f64> = super::half_edges(&self.graph, v)
                .into_iter()
                .map(|(e, end)| match end {
                    super::EdgeEnd::Start => self.evaluate(GraphPoint { edge: e, x: 0.0 }),
                    super::EdgeEnd::Far => self.evaluate(GraphPoint {
                        edge: e,
                        x: self.graph.edges()[e].length,
                    }),
                })
                .collect();
            if let (Some(min), Some(max)) = (
                traces.iter().copied().reduce(f64::min),
                traces.iter().copied().reduce(f64::max),
            ) {
                worst = worst.max(max - min);
            }
        }
        worst
    }

    /// Largest Kirchhoff-sum residual across Natural vertices.
    pub fn kirchhoff_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for v in 0..self.graph.vertex_count() {
            if self.graph.condition(v) != VertexCondition::Natural {
                continue;
            }
            let sum: f64 = super::half_edges(&self.graph, v)
                .into_iter()
                .map(|(e, end)| {
                    let len = self.graph.edges()[e].length;
                    match end {
                        super::EdgeEnd::Start => self.derivative(GraphPoint { edge: e, x: 0.0 }),
                        super::EdgeEnd::Far => -self.derivative(GraphPoint { edge: e, x: len }),
                    }
                })
                .sum();
            worst = worst.max(sum.abs());
        }
        worst
    }

    /// Largest |psi| over Dirichlet vertices.
    pub fn dirichlet_residual(&self) -> f64 {
        self.graph
            .dirichlet_vertices()
            .into_iter()
            .map(|v| self.vertex_value(v).abs())
            .fold(0.0, f64::max)
    }

    /// Range of psi over one closed edge (endpoints and interior extrema).
    pub fn edge_range(&self, e: usize) -> (f64, f64) {
        let len = self.graph.edges()[e].length;
        let (r, phi) = self.amplitude_phase(e);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for x in [0.0, len] {
            let v = self.evaluate(GraphPoint { edge: e, x });
            lo = lo.min(v);
            hi = hi.max(v);
        }
        // Interior extrema of R cos(kx - phi) at kx - phi = j pi.
        let theta0 = -phi;
        let theta1 = self.k * len - phi;
        let jmin = (theta0 / std::f64::consts::PI).ceil() as i64;
        let jmax = (theta1 / std::f64::consts::PI).floor() as i64;
        for j in jmin..=jmax {
            let theta = j as f64 * std::f64::consts::PI;
            if theta > theta0 && theta < theta1 {
                let v = if j.rem_euclid(2) == 0 { r } else { -r };
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        (lo, hi)
    }

    /// Global range of psi over the graph.
    pub fn range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for e in 0..self.graph.edge_count() {
            let (a, b) = self.edge_range(e);
            lo = lo.min(a);
            hi = hi.max(b);
        }
        (lo, hi)
    }

    /// Exceptional values: vertex traces plus the global extrema.
    pub fn exceptional_values(&self) -> Vec<f64> {
        let mut vals = self.vertex_values();
        let (lo, hi) = self.range();
        vals.push(lo);
        vals.push(hi);
        vals.sort_by(f64::total_cmp);
        vals.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
        vals
    }

    /// Midpoints between consecutive distinct exceptional values and edge
    /// extremum values: a grid that avoids the exceptional set by
    /// construction.
    pub fn default_level_grid(&self) -> Vec<f64> {
        let mut vals = self.exceptional_values();
        for e in 0..self.graph.edge_count() {
            let (lo, hi) = self.edge_range(e);
            vals.push(lo);
            vals.push(hi);
        }
        vals.sort_by(f64::total_cmp);
        vals.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
        vals.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }
}

/// Orthonormal basis of eigenfunctions at lambda > 0. The basis has one
/// function per singular value of M(sqrt(lambda)) under threshold; the sign
/// convention makes the first nonzero coefficient positive.
pub fn eigenfunction(
    mg: &MetricGraph,
    lambda: f64,
    options: &SolverOptions,
) -> Result<Vec<Eigenfunction>, SolverError> {
    assert!(lambda > 0.0, "eigenfunctions are extracted for positive eigenvalues");
    let split = split_dirichlet_vertices(mg);
    let k = lambda.sqrt();
    let sys = secular_matrix(&split, k);
    let svd = svd_square(&sys.matrix);
    let tau = options.sigma_threshold_rel * sys.norm_scale();
    let mult = svd.values.iter().take_while(|&&s| s < tau).count();
    if mult == 0 {
        return Err(SolverError::NotAnEigenvalue {
            lambda,
            sigma_min: svd.values[0],
            threshold: tau,
        });
    }
    let to_coeffs = |v: &[f64]| -> Vec<(f64, f64)> {
        (0..mg.edge_count()).map(|e| (v[2 * e], v[2 * e + 1])).collect()
    };
    let mut basis: Vec<Eigenfunction> = Vec::new();
    for idx in 0..mult {
        let mut f = Eigenfunction {
            graph: mg.clone(),
            k,
            coeffs: to_coeffs(&svd.right_vectors[idx]),
        };
        // L2 Gram-Schmidt against the basis built so far.
        for g in &basis {
            let proj: f64 = mg
                .edges()
                .iter()
                .enumerate()
                .map(|(e, edge)| trig::inner(k, f.coeffs[e], g.coeffs[e], 0.0, edge.length))
                .sum();
            for e in 0..f.coeffs.len() {
                f.coeffs[e].0 -= proj * g.coeffs[e].0;
                f.coeffs[e].1 -= proj * g.coeffs[e].1;
            }
        }
        let norm_sq = f.l2_norm_sq();
        if norm_sq <= 1e-20 {
            continue;
        }
        let scale = norm_sq.sqrt().recip();
        for c in &mut f.coeffs {
            c.0 *= scale;
            c.1 *= scale;
        }
        fix_sign(&mut f);
        basis.push(f);
    }
    Ok(basis)
}

/// Make the first significantly nonzero coefficient positive.
fn fix_sign(f: &mut Eigenfunction) {
    let max_abs = f
        .coeffs
        .iter()
        .flat_map(|c| [c.0.abs(), c.1.abs()])
        .fold(0.0, f64::max);
    for &(a, b) in &f.coeffs {
        for c in [a, b] {
            if c.abs() > 1e-9 * max_abs {
                if c < 0.0 {
                    for cc in &mut f.coeffs {
                        cc.0 = -cc.0;
                        cc.1 = -cc.1;
                    }
                }
                return;
            }
        }
    }
}

/// Number of solutions of psi = t on one edge, counted in closed form from
/// the amplitude/phase representation. Returns `None` for the identically-t
/// case (infinite level set).
fn count_on_edge(k: f64, r: f64, phi: f64, len: f64, t: f64, scale: f64) -> Option<usize> {
    if r <= 1e-13 * scale {
        // psi identically zero on this edge.
        return if t.abs() <= 1e-13 * scale { None } else { Some(0) };
    }
    let c = t / r;
    if c.abs() > 1.0 {
        return Some(0);
    }
    let theta0 = -phi;
    let theta1 = k * len - phi;
    let two_pi = 2.0 * std::f64::consts::PI;
    let count_family = |alpha: f64| -> usize {
        // Integers j with theta0 < alpha + 2 pi j < theta1 (open interval).
        let lo = (theta0 - alpha) / two_pi;
        let hi = (theta1 - alpha) / two_pi;
        let jmin = lo.floor() as i64 + 1;
        let jmax = (hi.ceil() as i64) - 1;
        (jmax - jmin + 1).max(0) as usize
    };
    if c.abs() >= 1.0 - 1e-12 {
        // Tangency: single family at the extremum phase.
        let alpha = if c > 0.0 { 0.0 } else { std::f64::consts::PI };
        return Some(count_family(alpha));
    }
    let alpha = c.acos();
    Some(count_family(alpha) + count_family(-alpha))
}

/// nu(t) for each grid value: the number of solutions of psi = t on the whole
/// graph, exact from the sinusoidal coefficients.
pub fn level_counts(psi: &Eigenfunction, t_grid: &[f64]) -> Vec<LevelCount> {
    let scale = psi
        .coeffs()
        .iter()
        .map(|c| c.0.hypot(c.1))
        .fold(0.0, f64::max);
    t_grid
        .iter()
        .map(|&t| {
            let mut total = 0usize;
            for (e, edge) in psi.graph().edges().iter().enumerate() {
                let (r, phi) = psi.amplitude_phase(e);
                match count_on_edge(psi.wavenumber(), r, phi, edge.length, t, scale) {
                    Some(c) => total += c,
                    None => return LevelCount::Infinite,
                }
            }
            LevelCount::Finite(total)
        })
        .collect()
}

/// Continuous piecewise-linear function given by samples along each edge
/// (uniform nodes including both endpoints, at least two per edge).
#[derive(Debug, Clone)]
pub struct SampledFunction {
    pub values: Vec<Vec<f64>>,
}

impl SampledFunction {
    pub fn from_eigenfunction(psi: &Eigenfunction, nodes_per_edge: usize) -> SampledFunction {
        assert!(nodes_per_edge >= 2);
        let values = psi
            .graph()
            .edges()
            .iter()
            .enumerate()
            .map(|(e, edge)| {
                (0..nodes_per_edge)
                    .map(|i| {
                        let x = edge.length * i as f64 / (nodes_per_edge - 1) as f64;
                        psi.evaluate(GraphPoint { edge: e, x })
                    })
                    .collect()
            })
            .collect();
        SampledFunction { values }
    }
}

/// Rayleigh quotient int |f'|^2 / int |f|^2 of a continuous piecewise-linear
/// sampled function; segment integrals are exact for the interpolant.
pub fn rayleigh_quotient(mg: &MetricGraph, f: &SampledFunction) -> Result<f64, SolverError> {
    assert_eq!(f.values.len(), mg.edge_count());
    let scale = f
        .values
        .iter()
        .flatten()
        .fold(0.0f64, |m, &x| m.max(x.abs()));
    // Vertex consistency across incident half-edges.
    for v in 0..mg.vertex_count() {
        let traces: Vec<f64> = super::half_edges(mg, v)
            .into_iter()
            .map(|(e, end)| match end {
                super::EdgeEnd::Start => f.values[e][0],
                super::EdgeEnd::Far => *f.values[e].last().unwrap(),
            })
            .collect();
        for pair in traces.windows(2) {
            if (pair[0] - pair[1]).abs() > 1e-9 * scale.max(1.0) {
                return Err(SolverError::VertexMismatch(v));
            }
        }
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (e, edge) in mg.edges().iter().enumerate() {
        let vals = &f.values[e];
        assert!(vals.len() >= 2);
        let h = edge.length / (vals.len() - 1) as f64;
        for w in vals.windows(2) {
            let (a, b) = (w[0], w[1]);
            num += (b - a) * (b - a) / h;
            den += h * (a * a + a * b + b * b) / 3.0;
        }
    }
    if den <= 1e-24 * scale.max(1e-12) {
        return Err(SolverError::ZeroFunction);
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{eigenvalues, SolverOptions};
    use crate::surgery::generators as gen;
    use std::f64::consts::PI;

    #[test]
    fn interval_ground_excited_state_is_cosine() {
        let mg = gen::interval(1.0);
        let basis = eigenfunction(&mg, PI * PI, &SolverOptions::default()).unwrap();
        assert_eq!(basis.len(), 1);
        let psi = &basis[0];
        // sqrt(2) cos(pi x) up to sign; sign convention picks +.
        for i in 0..=10 {
            let x = i as f64 / 10.0;
            let expected = std::f64::consts::SQRT_2 * (PI * x).cos();
            let got = psi.evaluate(GraphPoint { edge: 0, x });
            assert!((got - expected).abs() < 1e-7, "{got} vs {expected}");
        }
        assert!((psi.l2_norm_sq() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn circle_pair_is_orthonormal() {
        let mg = gen::circle(2.0 * PI);
        let basis = eigenfunction(&mg, 1.0, &SolverOptions::default()).unwrap();
        assert_eq!(basis.len(), 2);
        let ip: f64 = mg
            .edges()
            .iter()
            .enumerate()
            .map(|(e, edge)| {
                trig::inner(1.0, basis[0].coeffs()[e], basis[1].coeffs()[e], 0.0, edge.length)
            })
            .sum();
        assert!(ip.abs() < 1e-8);
        for psi in &basis {
            assert!((psi.l2_norm_sq() - 1.0).abs() < 1e-10);
            assert!(psi.continuity_residual() < 1e-8);
            assert!(psi.kirchhoff_residual() < 1e-7);
        }
    }

    #[test]
    fn three_star_first_pair_integrates_to_zero() {
        let mg = gen::equilateral(&gen::star(3), 1.0);
        let lambda = (PI / 2.0) * (PI / 2.0);
        let basis = eigenfunction(&mg, lambda, &SolverOptions::default()).unwrap();
        assert_eq!(basis.len(), 2);
        for psi in &basis {
            assert!(psi.integral().abs() < 1e-8);
            assert!(psi.continuity_residual() < 1e-8);
        }
    }

    #[test]
    fn not_an_eigenvalue_is_rejected() {
        let mg = gen::interval(1.0);
        let err = eigenfunction(&mg, 5.0, &SolverOptions::default()).unwrap_err();
        assert!(matches!(err, SolverError::NotAnEigenvalue { .. }));
    }

    #[test]
    fn dirichlet_eigenfunction_vanishes_at_the_vertex() {
        let mg = gen::interval_with_conditions(1.0, &[0]);
        let lambda = PI * PI / 4.0;
        let psi = &eigenfunction(&mg, lambda, &SolverOptions::default()).unwrap()[0];
        assert!(psi.dirichlet_residual() < 1e-8);
        assert!(psi.kirchhoff_residual() < 1e-7);
        // sqrt(2) sin(pi x / 2) up to the sign convention.
        let mid = psi.evaluate(GraphPoint { edge: 0, x: 1.0 });
        assert!((mid.abs() - std::f64::consts::SQRT_2).abs() < 1e-7);
    }

    #[test]
    fn level_counts_on_interval_and_circle() {
        let mg = gen::interval(1.0);
        let psi = &eigenfunction(&mg, PI * PI, &SolverOptions::default()).unwrap()[0];
        // Monotone cosine: every interior level is hit once.
        let counts = level_counts(psi, &[0.0, 0.5, -0.5]);
        for c in counts {
            assert_eq!(c, LevelCount::Finite(1));
        }

        let circle = gen::circle(2.0 * PI);
        let psi = &eigenfunction(&circle, 1.0, &SolverOptions::default()).unwrap()[0];
        let (lo, hi) = psi.range();
        let t = 0.5 * (lo + hi) + 0.1 * (hi - lo);
        if let LevelCount::Finite(c) = level_counts(psi, &[t])[0] {
            assert_eq!(c, 2);
        } else {
            panic!("unexpected infinite level set");
        }
    }

    #[test]
    fn pumpkin_level_count_meets_connectivity() {
        // Non-equilateral 3-pumpkin: the ground eigenfunction is simple and
        // every level strictly between the vertex values is hit 3 times.
        let mg = gen::pumpkin(&[0.8, 1.0, 1.2]);
        let spec = eigenvalues(&mg, 2, &SolverOptions::default()).unwrap();
        let lambda = spec.eigenvalues[1];
        let psi = &eigenfunction(&mg, lambda, &SolverOptions::default()).unwrap()[0];
        let vv = psi.vertex_values();
        let (lo, hi) = (vv[0].min(vv[1]), vv[0].max(vv[1]));
        let t = 0.5 * (lo + hi);
        match level_counts(psi, &[t])[0] {
            LevelCount::Finite(c) => assert!(c >= 3, "nu(t) = {c} < eta = 3"),
            LevelCount::Infinite => panic!("unexpected infinite level set"),
        }
    }

    #[test]
    fn rayleigh_quotient_examples() {
        let mg = gen::interval(1.0);
        // Linear ramp 0 -> 1: quotient 1 / (1/3) = 3.
        let ramp = SampledFunction { values: vec![vec![0.0, 1.0]] };
        assert!((rayleigh_quotient(&mg, &ramp).unwrap() - 3.0).abs() < 1e-12);
        // Hat with peak 1/2 at the midpoint: 1 / (1/12) = 12.
        let hat = SampledFunction { values: vec![vec![0.0, 0.5, 0.0]] };
        assert!((rayleigh_quotient(&mg, &hat).unwrap() - 12.0).abs() < 1e-12);
        // Dense samples of the circle ground pair converge to lambda_1.
        let circle = gen::circle(2.0 * PI);
        let psi = &eigenfunction(&circle, 1.0, &SolverOptions::default()).unwrap()[0];
        let f = SampledFunction::from_eigenfunction(psi, 257);
        let q = rayleigh_quotient(&circle, &f).unwrap();
        assert!((q - 1.0).abs() < 5e-4, "quotient {q}");
    }

    #[test]
    fn zero_function_is_rejected() {
        let mg = gen::interval(1.0);
        let z = SampledFunction { values: vec![vec![0.0, 0.0, 0.0]] };
        assert!(matches!(rayleigh_quotient(&mg, &z), Err(SolverError::ZeroFunction)));
    }

    #[test]
    fn vertex_mismatch_is_rejected() {
        let mg = gen::equilateral(&gen::star(2), 1.0);
        // Two edges sharing the center with disagreeing traces there.
        let f = SampledFunction { values: vec![vec![0.3, 1.0], vec![0.7, 1.0]] };
        assert!(matches!(rayleigh_quotient(&mg, &f), Err(SolverError::VertexMismatch(0))));
    }
}
