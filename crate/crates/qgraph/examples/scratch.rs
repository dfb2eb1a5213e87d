use qgraph::bounds::MetricContext;
use qgraph::p_laplacian::PExponent;
use qgraph::solver::{eigenvalues, SolverOptions};
use qgraph::verify::corpus;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn pattern(i: usize) -> corpus::DirichletPattern {
    match i % 4 {
        0 | 1 => corpus::DirichletPattern::None,
        2 => corpus::DirichletPattern::AllLeaves,
        _ => corpus::DirichletPattern::OneLeaf,
    }
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(123u64.wrapping_add(11));
    let graphs: Vec<_> = (0..100).map(|i| corpus::random_metric_graph(&mut rng, 7, 10, (0.2, 2.0), pattern(i))).collect();
    let mg = &graphs[32];
    let ctx = MetricContext::new(mg, PExponent::new(2.0).unwrap());
    let spec = eigenvalues(mg, 40, &SolverOptions::default()).unwrap();
    let l = ctx.total_len;
    for k in 32..=36 {
        let lam = spec.eigenvalues[k-1];
        println!("k={k}: sqrt={:.6} offset={:+.6}", lam.sqrt(), lam.sqrt()*l/PI - k as f64);
    }
}
