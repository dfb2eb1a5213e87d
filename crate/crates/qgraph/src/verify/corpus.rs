//! Seeded random graph corpus shared by the verification suite and tests.

use crate::graph::CombinatorialGraph;
use crate::metric::{MetricEdge, MetricGraph};
use rand::Rng;

/// Connected multigraph: a random spanning tree plus extra parallel-allowed
/// edges, no loops. `max_v >= 2`, edge count between V-1 and `max_e`.
pub fn random_multigraph<R: Rng>(rng: &mut R, max_v: usize, max_e: usize) -> CombinatorialGraph {
    let v = rng.gen_range(2..=max_v);
    let mut edges = spanning_tree(rng, v);
    let extra_cap = max_e.saturating_sub(edges.len());
    let extra = if extra_cap == 0 { 0 } else { rng.gen_range(0..=extra_cap) };
    for _ in 0..extra {
        let u = rng.gen_range(0..v);
        let mut w = rng.gen_range(0..v);
        while w == u {
            w = rng.gen_range(0..v);
        }
        edges.push((u, w));
    }
    CombinatorialGraph::new(v, edges).expect("constructed connected and loop-free")
}

/// Connected simple graph on up to `max_v` vertices with at most `max_e`
/// edges.
pub fn random_simple_connected<R: Rng>(
    rng: &mut R,
    max_v: usize,
    max_e: usize,
) -> CombinatorialGraph {
    let v = rng.gen_range(2..=max_v);
    let mut present: std::collections::HashSet<(usize, usize)> = Default::default();
    let mut edges = Vec::new();
    for (u, w) in spanning_tree(rng, v) {
        present.insert((u.min(w), u.max(w)));
        edges.push((u, w));
    }
    let possible = v * (v - 1) / 2;
    let target = rng.gen_range(edges.len()..=max_e.min(possible).max(edges.len()));
    let mut attempts = 0;
    while edges.len() < target && attempts < 200 {
        attempts += 1;
        let u = rng.gen_range(0..v);
        let w = rng.gen_range(0..v);
        if u == w {
            continue;
        }
        let key = (u.min(w), u.max(w));
        if present.insert(key) {
            edges.push(key);
        }
    }
    CombinatorialGraph::new(v, edges).expect("constructed connected simple")
}

fn spanning_tree<R: Rng>(rng: &mut R, v: usize) -> Vec<(usize, usize)> {
    (1..v).map(|w| (rng.gen_range(0..w), w)).collect()
}

/// How Dirichlet conditions are placed on a random metric graph's leaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirichletPattern {
    None,
    AllLeaves,
    AllButOneLeaf,
    OneLeaf,
}

/// Random connected metric graph: spanning tree plus extras, optional loops,
/// lengths uniform in `[len_lo, len_hi]`, Dirichlet placed on leaves by the
/// chosen pattern.
pub fn random_metric_graph<R: Rng>(
    rng: &mut R,
    max_v: usize,
    max_e: usize,
    len_range: (f64, f64),
    pattern: DirichletPattern,
) -> MetricGraph {
    let v = rng.gen_range(2..=max_v);
    let mut pairs: Vec<(usize, usize)> = spanning_tree(rng, v);
    let extra_cap = max_e.saturating_sub(pairs.len());
    let extra = if extra_cap == 0 { 0 } else { rng.gen_range(0..=extra_cap) };
    for _ in 0..extra {
        let u = rng.gen_range(0..v);
        if rng.gen_bool(0.15) {
            pairs.push((u, u)); // loop
        } else {
            let mut w = rng.gen_range(0..v);
            while w == u {
                w = rng.gen_range(0..v);
            }
            pairs.push((u, w));
        }
    }
    let edges: Vec<MetricEdge> = pairs
        .into_iter()
        .map(|(u, w)| MetricEdge { u, w, length: rng.gen_range(len_range.0..=len_range.1) })
        .collect();
    let probe = MetricGraph::new(v, edges.clone(), &[]).expect("valid structure");
    let leaves = probe.leaves();
    let dirichlet: Vec<usize> = match pattern {
        DirichletPattern::None => Vec::new(),
        DirichletPattern::AllLeaves => leaves,
        DirichletPattern::AllButOneLeaf => leaves.into_iter().skip(1).collect(),
        DirichletPattern::OneLeaf => leaves.into_iter().take(1).collect(),
    };
    MetricGraph::new(v, edges, &dirichlet).expect("valid structure")
}

/// Random tree with unit-ish lengths and at least one vertex of degree >= 3
/// when `v >= 4` (regenerates the shape otherwise).
pub fn random_metric_tree<R: Rng>(rng: &mut R, max_v: usize, len_range: (f64, f64)) -> MetricGraph {
    let v = rng.gen_range(4..=max_v.max(4));
    loop {
        let pairs = spanning_tree(rng, v);
        let mut deg = vec![0usize; v];
        for &(u, w) in &pairs {
            deg[u] += 1;
            deg[w] += 1;
        }
        if deg.iter().all(|&d| d < 3) {
            continue;
        }
        let edges = pairs
            .into_iter()
            .map(|(u, w)| MetricEdge { u, w, length: rng.gen_range(len_range.0..=len_range.1) })
            .collect();
        return MetricGraph::new(v, edges, &[]).expect("valid tree");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn corpora_are_valid_and_deterministic() {
        let mut a = ChaCha8Rng::seed_from_u64(5);
        let mut b = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let ga = random_multigraph(&mut a, 7, 12);
            let gb = random_multigraph(&mut b, 7, 12);
            assert_eq!(ga, gb);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let g = random_metric_graph(&mut rng, 6, 10, (0.2, 2.0), DirichletPattern::None);
            assert!(g.is_valid(), "{:?}", g.validate());
        }
        for _ in 0..10 {
            let t = random_metric_tree(&mut rng, 7, (0.5, 1.5));
            assert_eq!(t.betti_number(), 0);
            assert!(t.is_valid());
        }
    }
}
