//! Cross-module spectral monotonicity of the surgery operators: interior
//! cuts and edge doubling never raise eigenvalues, detaching an edge end
//! lowers them by at most one index, and the guided reduction to a regular
//! pumpkin chain never increases the Rayleigh quotient along its trace.

use qgraph::p_laplacian::{discrete_gamma1_p, PExponent, PGapOptions};
use qgraph::solver::{eigenvalues, SolverOptions};
use qgraph::surgery::{self, generators as gen};
use qgraph::verify::corpus;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spectrum(mg: &qgraph::MetricGraph, n: usize) -> Vec<f64> {
    eigenvalues(mg, n, &SolverOptions::default()).unwrap().eigenvalues
}

#[test]
fn cutting_a_circle_drops_the_gap_to_the_interval_value() {
    let l = 2.0;
    let circle = gen::circle(l);
    let before = spectrum(&circle, 2);
    let pi = std::f64::consts::PI;
    assert!((before[1] - 4.0 * pi * pi / (l * l)).abs() < 1e-8);
    let cut = surgery::cut_edge(&circle, 0, 0.75).unwrap();
    let after = spectrum(&cut, 2);
    assert!((after[1] - pi * pi / (l * l)).abs() < 1e-8, "{after:?}");
}

#[test]
fn cut_edge_never_increases_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for _ in 0..12 {
        let mg = corpus::random_metric_graph(&mut rng, 5, 8, (0.4, 1.6), corpus::DirichletPattern::None);
        let e = rng.gen_range(0..mg.edge_count());
        let x = mg.edges()[e].length * rng.gen_range(0.2..0.8);
        let cut = surgery::cut_edge(&mg, e, x).unwrap();
        let before = spectrum(&mg, 6);
        let after = spectrum(&cut, 6);
        for (k, (a, b)) in after.iter().zip(&before).enumerate() {
            assert!(*a <= b + 1e-8 * b.max(1.0), "k={k}: {a} > {b}");
        }
    }
}

#[test]
fn doubling_edges_never_increases_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for _ in 0..10 {
        let mg = corpus::random_metric_graph(&mut rng, 5, 7, (0.4, 1.6), corpus::DirichletPattern::None);
        let doubled = surgery::double_edges(&mg);
        let before = spectrum(&mg, 6);
        let after = spectrum(&doubled, 6);
        for (k, (a, b)) in after.iter().zip(&before).enumerate() {
            assert!(*a <= b + 1e-8 * b.max(1.0), "k={k}: {a} > {b}");
        }
    }
}

#[test]
fn detaching_an_edge_end_interlaces() {
    // lambda_k(detached) <= lambda_k(G) <= lambda_{k+1}(detached)
    let mut rng = ChaCha8Rng::seed_from_u64(57);
    let mut done = 0;
    while done < 8 {
        let mg = corpus::random_metric_graph(&mut rng, 5, 8, (0.4, 1.6), corpus::DirichletPattern::None);
        let Some((e, v)) = (0..mg.edge_count()).find_map(|e| {
            let edge = mg.edges()[e];
            if edge.u == edge.w {
                return None;
            }
            [edge.u, edge.w].into_iter().find(|&v| mg.degree(v) >= 3).map(|v| (e, v))
        }) else {
            continue;
        };
        let Ok(detached) = surgery::detach_edge_end(&mg, e, v) else {
            continue;
        };
        let before = spectrum(&mg, 7);
        let after = spectrum(&detached, 8);
        for k in 0..7 {
            let tol = 1e-8 * before[k].max(1.0);
            assert!(after[k] <= before[k] + tol, "k={k}: {} > {}", after[k], before[k]);
            assert!(before[k] <= after[k + 1] + tol, "k={k}: {} > {}", before[k], after[k + 1]);
        }
        done += 1;
    }
}

#[test]
fn dirichlet_split_of_star_gives_mixed_interval_pieces() {
    let star = gen::equilateral(&gen::star(3), 1.0);
    let split = surgery::dirichlet_split(&star, 0, &[0]).unwrap();
    // One detached edge with a Dirichlet end (DN interval, lambda_1 =
    // pi^2/4) next to a two-edge Natural path (lambda = 0 then pi^2/4).
    let spec = spectrum(&split, 3);
    let pi = std::f64::consts::PI;
    assert!((spec[0] - 0.0).abs() < 1e-12);
    assert!((spec[1] - pi * pi / 4.0).abs() < 1e-8);
    assert!((spec[2] - pi * pi / 4.0).abs() < 1e-8);
}

#[test]
fn guided_reduction_traces_a_monotone_quotient() {
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    for &p in &[1.5, 2.0, 3.0] {
        let pe = PExponent::new(p).unwrap();
        for _ in 0..6 {
            let g = corpus::random_multigraph(&mut rng, 6, 9);
            let opts = PGapOptions { restarts: 6, ..Default::default() };
            let minimizer = match discrete_gamma1_p(&g, pe, &opts) {
                Ok(r) => r.minimizer,
                Err(_) => continue,
            };
            let reduction = surgery::reduce_to_pumpkin_chain(&g, &minimizer, pe).unwrap();
            let start = qgraph::p_laplacian::rayleigh_p(&g, &minimizer, pe);
            let mut previous = start;
            for step in &reduction.steps {
                assert!(
                    step.quotient <= previous + 1e-9 * previous.max(1.0),
                    "p={p}: quotient rose {previous} -> {} at {:?}",
                    step.quotient,
                    step.op
                );
                previous = step.quotient;
            }
            // The end graph is a regular pumpkin chain with the original
            // connectivity.
            let eta = g.edge_connectivity().unwrap();
            let chain = &reduction.chain;
            for slice in 0..chain.vertex_count() - 1 {
                assert_eq!(chain.multiplicity(slice, slice + 1), eta);
            }
            assert_eq!(chain.edge_count(), eta * (chain.vertex_count() - 1));
        }
    }
}

#[test]
fn surgery_results_stay_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for _ in 0..20 {
        let mg = corpus::random_metric_graph(&mut rng, 6, 9, (0.3, 1.7), corpus::DirichletPattern::None);
        let doubled = surgery::double_edges(&mg);
        assert!(doubled.is_valid());
        let longer = surgery::lengthen_edge(&mg, 0, mg.edges()[0].length * 1.5).unwrap();
        assert!(longer.is_valid());
        let pendant = surgery::attach_pendant(&mg, 0, 0.3).unwrap();
        assert!(pendant.is_valid());
        // Cuts may disconnect but must preserve the total length.
        let cut = surgery::cut_edge(&mg, 0, mg.edges()[0].length / 3.0).unwrap();
        assert!((cut.total_length() - mg.total_length()).abs() < 1e-12);
    }
}
