//! Canonical graph family generators with documented vertex labelings, so
//! serialized fixtures stay byte-stable.

use crate::graph::CombinatorialGraph;
use crate::metric::{MetricEdge, MetricGraph};

/// Path graph P_v: vertices 0..v in order, edges (i, i+1).
pub fn path(v: usize) -> CombinatorialGraph {
    assert!(v >= 1, "path needs at least one vertex");
    let edges = (0..v.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    CombinatorialGraph::new(v, edges).expect("path is valid")
}

/// Cycle graph C_n: vertices 0..n, edges (i, i+1 mod n). Needs n >= 3 to stay
/// loop-free and simple.
pub fn cycle(n: usize) -> CombinatorialGraph {
    assert!(n >= 3, "cycle needs at least three vertices");
    let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
    CombinatorialGraph::new(n, edges).expect("cycle is valid")
}

/// Complete graph K_n.
pub fn complete(n: usize) -> CombinatorialGraph {
    assert!(n >= 2);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((i, j));
        }
    }
    CombinatorialGraph::new(n, edges).expect("complete graph is valid")
}

/// Complete bipartite K_{n,m}: part A = 0..n, part B = n..n+m.
pub fn complete_bipartite(n: usize, m: usize) -> CombinatorialGraph {
    assert!(n >= 1 && m >= 1);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..m {
            edges.push((i, n + j));
        }
    }
    CombinatorialGraph::new(n + m, edges).expect("complete bipartite graph is valid")
}

/// Star S_{leaves+1}: center 0, leaves 1..=leaves.
pub fn star(leaves: usize) -> CombinatorialGraph {
    assert!(leaves >= 1);
    let edges = (1..=leaves).map(|i| (0, i)).collect();
    CombinatorialGraph::new(leaves + 1, edges).expect("star is valid")
}

/// Wheel W_{n+1}: hub 0, rim cycle 1..=n; 2n edges.
pub fn wheel(n: usize) -> CombinatorialGraph {
    assert!(n >= 3);
    let mut edges: Vec<(usize, usize)> = (1..=n).map(|i| (0, i)).collect();
    for i in 1..=n {
        let j = if i == n { 1 } else { i + 1 };
        edges.push((i, j));
    }
    CombinatorialGraph::new(n + 1, edges).expect("wheel is valid")
}

/// Hypercube Q_d on 2^d vertices labeled by bit pattern.
pub fn hypercube(d: usize) -> CombinatorialGraph {
    assert!(d >= 1);
    let n = 1usize << d;
    let mut edges = Vec::new();
    for v in 0..n {
        for b in 0..d {
            let w = v ^ (1 << b);
            if v < w {
                edges.push((v, w));
            }
        }
    }
    CombinatorialGraph::new(n, edges).expect("hypercube is valid")
}

/// Petersen graph: outer 5-cycle 0..5, inner pentagram 5..10, spokes i -- i+5.
pub fn petersen() -> CombinatorialGraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, i + 5));
    }
    CombinatorialGraph::new(10, edges).expect("petersen is valid")
}

/// Unit-or-scaled equilateral metrization of a combinatorial graph: same
/// labels, every edge of length `len`, all conditions Natural.
pub fn equilateral(g: &CombinatorialGraph, len: f64) -> MetricGraph {
    let edges = g
        .edges()
        .iter()
        .map(|&(u, w)| MetricEdge { u, w, length: len })
        .collect();
    MetricGraph::new(g.vertex_count(), edges, &[]).expect("metrization is valid")
}

/// Single interval of length `len`: vertices 0, 1.
pub fn interval(len: f64) -> MetricGraph {
    MetricGraph::new(2, vec![MetricEdge { u: 0, w: 1, length: len }], &[]).unwrap()
}

/// Interval with Dirichlet conditions at the listed endpoints (0 and/or 1).
pub fn interval_with_conditions(len: f64, dirichlet: &[usize]) -> MetricGraph {
    MetricGraph::new(2, vec![MetricEdge { u: 0, w: 1, length: len }], dirichlet).unwrap()
}

/// Circle of total length `len`: one vertex with one loop.
pub fn circle(len: f64) -> MetricGraph {
    MetricGraph::new(1, vec![MetricEdge { u: 0, w: 0, length: len }], &[]).unwrap()
}

/// Pumpkin (dipole): vertices 0, 1 joined by one edge per listed length.
pub fn pumpkin(lengths: &[f64]) -> MetricGraph {
    assert!(!lengths.is_empty());
    let edges = lengths.iter().map(|&l| MetricEdge { u: 0, w: 1, length: l }).collect();
    MetricGraph::new(2, edges, &[]).unwrap()
}

/// Pumpkin chain: vertices 0..=n; slice i joins i and i+1 with the listed
/// parallel edge lengths.
pub fn pumpkin_chain(slices: &[Vec<f64>]) -> MetricGraph {
    assert!(!slices.is_empty());
    let mut edges = Vec::new();
    for (i, slice) in slices.iter().enumerate() {
        assert!(!slice.is_empty());
        for &l in slice {
            edges.push(MetricEdge { u: i, w: i + 1, length: l });
        }
    }
    MetricGraph::new(slices.len() + 1, edges, &[]).unwrap()
}

/// eta-regular pumpkin chain with `pumpkins` slices and total length `total`;
/// every edge gets length total / (pumpkins * eta).
pub fn regular_pumpkin_chain(eta: usize, pumpkins: usize, total: f64) -> MetricGraph {
    assert!(eta >= 1 && pumpkins >= 1 && total > 0.0);
    let len = total / (pumpkins * eta) as f64;
    let slices: Vec<Vec<f64>> = (0..pumpkins).map(|_| vec![len; eta]).collect();
    pumpkin_chain(&slices)
}

/// Flower: loops of the given lengths at a single vertex.
pub fn flower(loop_lengths: &[f64]) -> MetricGraph {
    assert!(!loop_lengths.is_empty());
    let edges = loop_lengths.iter().map(|&l| MetricEdge { u: 0, w: 0, length: l }).collect();
    MetricGraph::new(1, edges, &[]).unwrap()
}

/// Stower: loops plus pendant star edges at the center vertex 0; star tips
/// are vertices 1..=star_lengths.len(), all conditions Natural.
pub fn stower(loop_lengths: &[f64], star_lengths: &[f64]) -> MetricGraph {
    let mut edges: Vec<MetricEdge> =
        loop_lengths.iter().map(|&l| MetricEdge { u: 0, w: 0, length: l }).collect();
    for (i, &l) in star_lengths.iter().enumerate() {
        edges.push(MetricEdge { u: 0, w: 1 + i, length: l });
    }
    MetricGraph::new(1 + star_lengths.len(), edges, &[]).unwrap()
}

/// Lollipop (lasso): loop of length `loop_len` at vertex 0 plus a pendant
/// edge of length `pendant` to vertex 1.
pub fn lollipop(loop_len: f64, pendant: f64) -> MetricGraph {
    MetricGraph::new(
        2,
        vec![
            MetricEdge { u: 0, w: 0, length: loop_len },
            MetricEdge { u: 0, w: 1, length: pendant },
        ],
        &[],
    )
    .unwrap()
}

/// Pumpkin dumbbell: two k-pumpkins (vertices 0-1 and 2-3) joined by a handle
/// edge 1 -- 2.
pub fn pumpkin_dumbbell(k: usize, pumpkin_edge: f64, handle: f64) -> MetricGraph {
    assert!(k >= 2);
    let mut edges = Vec::new();
    for _ in 0..k {
        edges.push(MetricEdge { u: 0, w: 1, length: pumpkin_edge });
    }
    edges.push(MetricEdge { u: 1, w: 2, length: handle });
    for _ in 0..k {
        edges.push(MetricEdge { u: 2, w: 3, length: pumpkin_edge });
    }
    MetricGraph::new(4, edges, &[]).unwrap()
}

/// Symmetric necklace: 2-regular pumpkin chain whose slice i has two parallel
/// edges of length `slice_lengths[i]` each, with optional loops at the two
/// terminal vertices.
pub fn symmetric_necklace(slice_lengths: &[f64], end_loops: Option<(f64, f64)>) -> MetricGraph {
    assert!(!slice_lengths.is_empty());
    let n = slice_lengths.len();
    let mut edges = Vec::new();
    for (i, &l) in slice_lengths.iter().enumerate() {
        edges.push(MetricEdge { u: i, w: i + 1, length: l });
        edges.push(MetricEdge { u: i, w: i + 1, length: l });
    }
    if let Some((a, b)) = end_loops {
        edges.push(MetricEdge { u: 0, w: 0, length: a });
        edges.push(MetricEdge { u: n, w: n, length: b });
    }
    MetricGraph::new(n + 1, edges, &[]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_invariants() {
        assert_eq!(wheel(6).vertex_count(), 7);
        assert_eq!(wheel(6).edge_count(), 12);
        for n in 3..8 {
            assert_eq!(wheel(n).betti_number(), n);
        }
        assert_eq!(star(3).vertex_count(), 4);
        assert_eq!(hypercube(3).edge_count(), 12);
        assert_eq!(petersen().edge_count(), 15);
        assert!(petersen().is_simple());
    }

    #[test]
    fn regular_chain_edge_lengths_and_connectivity() {
        let g = regular_pumpkin_chain(3, 2, 6.0);
        assert_eq!(g.edge_count(), 6);
        for e in g.edges() {
            assert!((e.length - 1.0).abs() < 1e-15);
        }
        assert_eq!(g.discrete_edge_connectivity(), 3);
    }

    #[test]
    fn flower_has_connectivity_two() {
        assert_eq!(flower(&[1.0, 2.0]).discrete_edge_connectivity(), 2);
    }

    #[test]
    fn necklace_shape() {
        let g = symmetric_necklace(&[1.0, 0.5], Some((0.4, 0.4)));
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.discrete_edge_connectivity(), 2);
    }
}
