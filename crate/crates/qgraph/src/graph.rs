//! Combinatorial multigraph model: Laplacian and normalized Laplacian
//! matrices, dense eigensolving, edge connectivity and the Betti number.
//!
//! Graphs are finite, connected, loop-free multigraphs. Parallel edges are
//! stored as repeated vertex pairs rather than weights so that edge deletion
//! keeps unambiguous semantics.

use crate::linalg::{Matrix, MatrixError, SymmetricMatrix};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("vertex count must be at least 1")]
    Empty,
    #[error("edge ({0}, {1}) is a loop; loops are not allowed")]
    Loop(usize, usize),
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    VertexOutOfRange(usize, usize, usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex {0} is isolated; normalized Laplacian needs all degrees >= 1")]
    IsolatedVertex(usize),
    #[error("edge connectivity is undefined on a single vertex")]
    SingleVertex,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Which matrix a [`DiscreteSpectrum`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Laplacian,
    NormalizedLaplacian,
}

/// Ordered eigenvalues of a discrete Laplacian-type matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscreteSpectrum {
    pub eigenvalues: Vec<f64>,
    pub matrix_kind: MatrixKind,
}

impl DiscreteSpectrum {
    /// Lowest nonzero eigenvalue (second entry for connected graphs).
    pub fn gap(&self) -> f64 {
        self.eigenvalues[1]
    }
}

/// Finite connected multigraph without loops.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinatorialGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl CombinatorialGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::Empty);
        }
        for &(u, w) in &edges {
            if u >= vertex_count || w >= vertex_count {
                return Err(GraphError::VertexOutOfRange(u, w, vertex_count));
            }
            if u == w {
                return Err(GraphError::Loop(u, w));
            }
        }
        let g = CombinatorialGraph { vertex_count, edges };
        if !g.is_connected_subset(&[]) {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Degree counting multiplicity.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(u, w)| u == v || w == v).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.vertex_count];
        for &(u, w) in &self.edges {
            d[u] += 1;
            d[w] += 1;
        }
        d
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    /// Number of parallel edges between an unordered pair.
    pub fn multiplicity(&self, u: usize, w: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| (a == u && b == w) || (a == w && b == u))
            .count()
    }

    /// True when no pair of vertices is joined by more than one edge.
    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        for &(u, w) in &self.edges {
            let key = (u.min(w), u.max(w));
            if !seen.insert(key) {
                return false;
            }
        }
        true
    }

    pub fn is_complete_simple(&self) -> bool {
        let n = self.vertex_count;
        self.is_simple() && self.edges.len() == n * (n - 1) / 2
    }

    /// Simple cycle graph on >= 3 vertices: connected and 2-regular.
    pub fn is_cycle_graph(&self) -> bool {
        self.vertex_count >= 3 && self.is_simple() && self.degrees().iter().all(|&d| d == 2)
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.vertex_count
    }

    /// Number of vertices of degree > 1.
    pub fn essential_vertex_count(&self) -> usize {
        self.degrees().iter().filter(|&&d| d > 1).count()
    }

    /// Betti number E - V + 1 (the number of independent cycles).
    pub fn betti_number(&self) -> usize {
        self.edges.len() + 1 - self.vertex_count
    }

    /// Connectivity after removing the edges at positions `removed`.
    fn is_connected_subset(&self, removed: &[usize]) -> bool {
        let mut uf = UnionFind::new(self.vertex_count);
        for (idx, &(u, w)) in self.edges.iter().enumerate() {
            if !removed.contains(&idx) {
                uf.union(u, w);
            }
        }
        uf.component_count() == 1
    }

    /// Graph Laplacian: degree (with multiplicity) on the diagonal, minus the
    /// number of parallel edges off-diagonal. Rows sum to zero.
    pub fn laplacian_matrix(&self) -> SymmetricMatrix {
        let n = self.vertex_count;
        let mut data = vec![0.0f64; n * n];
        for &(u, w) in &self.edges {
            data[u * n + u] += 1.0;
            data[w * n + w] += 1.0;
            data[u * n + w] -= 1.0;
            data[w * n + u] -= 1.0;
        }
        SymmetricMatrix::new(n, data).expect("laplacian is symmetric by construction")
    }

    /// Signed incidence matrix for the orientation given by `flip` (edge e runs
    /// w -> u instead of u -> w when `flip[e]`). Satisfies L = I * I^T for any
    /// orientation.
    pub fn signed_incidence(&self, flip: &[bool]) -> Matrix {
        assert_eq!(flip.len(), self.edges.len());
        let mut m = Matrix::zeros(self.vertex_count, self.edges.len());
        for (e, &(u, w)) in self.edges.iter().enumerate() {
            let (init, term) = if flip[e] { (w, u) } else { (u, w) };
            m[(init, e)] += 1.0;
            m[(term, e)] -= 1.0;
        }
        m
    }

    /// Normalized Laplacian D^{-1/2} L D^{-1/2}; spectrum lies in [0, 2].
    pub fn normalized_laplacian_matrix(&self) -> Result<SymmetricMatrix, GraphError> {
        let deg = self.degrees();
        if let Some(v) = deg.iter().position(|&d| d == 0) {
            return Err(GraphError::IsolatedVertex(v));
        }
        let lap = self.laplacian_matrix();
        let n = self.vertex_count;
        let inv_sqrt: Vec<f64> = deg.iter().map(|&d| 1.0 / (d as f64).sqrt()).collect();
        let mut data = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = inv_sqrt[i] * lap.entry(i, j) * inv_sqrt[j];
            }
        }
        Ok(SymmetricMatrix::new(n, data)?)
    }

    /// Laplacian spectrum (eigenvalues nondecreasing).
    pub fn laplacian_spectrum(&self) -> DiscreteSpectrum {
        DiscreteSpectrum {
            eigenvalues: self.laplacian_matrix().eigenvalues(),
            matrix_kind: MatrixKind::Laplacian,
        }
    }

    /// Normalized-Laplacian spectrum (eigenvalues nondecreasing, in [0, 2]).
    pub fn normalized_spectrum(&self) -> Result<DiscreteSpectrum, GraphError> {
        Ok(DiscreteSpectrum {
            eigenvalues: self.normalized_laplacian_matrix()?.eigenvalues(),
            matrix_kind: MatrixKind::NormalizedLaplacian,
        })
    }

    /// Spectral gap gamma_1: the second-smallest Laplacian eigenvalue.
    pub fn spectral_gap(&self) -> f64 {
        self.laplacian_spectrum().gap()
    }

    /// Normalized gap alpha_1: the second-smallest normalized-Laplacian eigenvalue.
    pub fn normalized_gap(&self) -> Result<f64, GraphError> {
        Ok(self.normalized_spectrum()?.gap())
    }

    /// Fiedler vector: eigenvector of the second-smallest Laplacian eigenvalue.
    pub fn fiedler_vector(&self) -> Vec<f64> {
        let (_, vecs) = self.laplacian_matrix().sorted_eigenpairs();
        vecs[1].clone()
    }

    /// Edge connectivity via s-t max-flow with unit capacity per parallel edge,
    /// minimized over t.
    pub fn edge_connectivity(&self) -> Result<usize, GraphError> {
        if self.vertex_count < 2 {
            return Err(GraphError::SingleVertex);
        }
        let n = self.vertex_count;
        let mut cap = vec![vec![0i64; n]; n];
        for &(u, w) in &self.edges {
            cap[u][w] += 1;
            cap[w][u] += 1;
        }
        let mut best = usize::MAX;
        for t in 1..n {
            let flow = max_flow(&cap, 0, t);
            best = best.min(flow);
        }
        Ok(best)
    }

    /// Exhaustive minimum edge cut, feasible for E <= ~16. Cross-check oracle
    /// for [`Self::edge_connectivity`].
    pub fn edge_connectivity_exhaustive(&self) -> Result<usize, GraphError> {
        if self.vertex_count < 2 {
            return Err(GraphError::SingleVertex);
        }
        let e = self.edges.len();
        assert!(e <= 20, "exhaustive connectivity search is limited to small edge counts");
        let mut best = e;
        for mask in 1u32..(1u32 << e) {
            let size = mask.count_ones() as usize;
            if size >= best {
                continue;
            }
            let removed: Vec<usize> = (0..e).filter(|i| mask & (1 << i) != 0).collect();
            if !self.is_connected_subset(&removed) {
                best = size;
            }
        }
        Ok(best)
    }
}

/// BFS (Edmonds-Karp) max flow on a dense capacity matrix.
fn max_flow(cap: &[Vec<i64>], s: usize, t: usize) -> usize {
    let n = cap.len();
    let mut residual: Vec<Vec<i64>> = cap.to_vec();
    let mut total = 0i64;
    loop {
        let mut parent = vec![usize::MAX; n];
        parent[s] = s;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if parent[v] == usize::MAX && residual[u][v] > 0 {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[t] == usize::MAX {
            break;
        }
        let mut bottleneck = i64::MAX;
        let mut v = t;
        while v != s {
            let u = parent[v];
            bottleneck = bottleneck.min(residual[u][v]);
            v = u;
        }
        let mut v = t;
        while v != s {
            let u = parent[v];
            residual[u][v] -= bottleneck;
            residual[v][u] += bottleneck;
            v = u;
        }
        total += bottleneck;
    }
    total as usize
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    count: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), count: n }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra] = rb;
            self.count -= 1;
        }
    }

    pub fn component_count(&self) -> usize {
        self.count
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surgery::generators as gen;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn constructor_rejects_loops_and_disconnection() {
        assert_eq!(CombinatorialGraph::new(2, vec![(0, 0)]), Err(GraphError::Loop(0, 0)));
        assert_eq!(
            CombinatorialGraph::new(4, vec![(0, 1), (2, 3)]),
            Err(GraphError::Disconnected)
        );
        assert!(CombinatorialGraph::new(1, vec![]).is_ok());
        // Degree-zero vertices have no normalized Laplacian.
        let lonely = CombinatorialGraph::new(1, vec![]).unwrap();
        assert_eq!(
            lonely.normalized_laplacian_matrix().unwrap_err(),
            GraphError::IsolatedVertex(0)
        );
    }

    #[test]
    fn laplacian_path3() {
        let g = gen::path(3);
        let l = g.laplacian_matrix();
        let expected = [[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]];
        for (i, row) in expected.iter().enumerate() {
            for (j, want) in row.iter().enumerate() {
                assert_eq!(l.entry(i, j), *want);
            }
        }
    }

    #[test]
    fn laplacian_doubled_edge() {
        let g = CombinatorialGraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let l = g.laplacian_matrix();
        assert_eq!(l.entry(0, 0), 2.0);
        assert_eq!(l.entry(0, 1), -2.0);
    }

    #[test]
    fn laplacian_k3() {
        let g = gen::complete(3);
        let l = g.laplacian_matrix();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 2.0 } else { -1.0 };
                assert_eq!(l.entry(i, j), want);
            }
        }
    }

    #[test]
    fn normalized_laplacian_p2_and_star() {
        let p2 = gen::path(2);
        let l = p2.normalized_laplacian_matrix().unwrap();
        assert_eq!(l.entry(0, 0), 1.0);
        assert!(close(l.entry(0, 1), -1.0, 1e-15));

        let s4 = gen::star(3);
        let spec = s4.normalized_spectrum().unwrap();
        let expected = [0.0, 1.0, 1.0, 2.0];
        for (v, e) in spec.eigenvalues.iter().zip(expected) {
            assert!(close(*v, e, 1e-12), "{v} vs {e}");
        }
    }

    #[test]
    fn normalized_laplacian_c4() {
        let c4 = gen::cycle(4);
        let spec = c4.normalized_spectrum().unwrap();
        let expected = [0.0, 1.0, 1.0, 2.0];
        for (v, e) in spec.eigenvalues.iter().zip(expected) {
            assert!(close(*v, e, 1e-12));
        }
    }

    #[test]
    fn eigenvalues_of_path_and_triangle_laplacians() {
        let p3 = gen::path(3).laplacian_spectrum();
        for (v, e) in p3.eigenvalues.iter().zip([0.0, 1.0, 3.0]) {
            assert!(close(*v, e, 1e-12));
        }
        let k3 = gen::complete(3).laplacian_spectrum();
        for (v, e) in k3.eigenvalues.iter().zip([0.0, 3.0, 3.0]) {
            assert!(close(*v, e, 1e-12));
        }
    }

    #[test]
    fn edge_connectivity_families() {
        assert_eq!(gen::path(5).edge_connectivity().unwrap(), 1);
        assert_eq!(gen::star(4).edge_connectivity().unwrap(), 1);
        assert_eq!(gen::cycle(6).edge_connectivity().unwrap(), 2);
        assert_eq!(gen::complete(4).edge_connectivity().unwrap(), 3);
        assert_eq!(gen::complete(4).edge_connectivity_exhaustive().unwrap(), 3);
        assert_eq!(
            CombinatorialGraph::new(1, vec![]).unwrap().edge_connectivity(),
            Err(GraphError::SingleVertex)
        );
    }

    #[test]
    fn betti_numbers() {
        assert_eq!(gen::path(6).betti_number(), 0);
        assert_eq!(gen::wheel(6).betti_number(), 6); // V=7, E=12
        assert_eq!(gen::cycle(5).betti_number(), 1);
    }

    #[test]
    fn spectral_gaps_match_closed_forms() {
        // gamma_1(P_V) = 2(1 - cos(pi/V)); V = 3 gives exactly 1.
        let g = gen::path(3);
        assert!(close(g.spectral_gap(), 1.0, 1e-12));
        // Complete graph attains eta + 1.
        assert!(close(gen::complete(3).spectral_gap(), 3.0, 1e-12));
        // alpha_1 of the 3-leaf star is 1.
        assert!(close(gen::star(3).normalized_gap().unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn laplacian_equals_incidence_product_for_any_orientation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let g = crate::verify::corpus::random_multigraph(&mut rng, 6, 10);
            let flips: Vec<bool> = (0..g.edge_count()).map(|_| rng.gen_bool(0.5)).collect();
            let inc = g.signed_incidence(&flips);
            let lap = g.laplacian_matrix();
            let n = g.vertex_count();
            for i in 0..n {
                for j in 0..n {
                    let prod: f64 = (0..g.edge_count()).map(|e| inc[(i, e)] * inc[(j, e)]).sum();
                    assert!(close(prod, lap.entry(i, j), 1e-14));
                }
            }
        }
    }

    #[test]
    fn deleting_an_edge_never_increases_the_gap() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 200 {
            let g = crate::verify::corpus::random_multigraph(&mut rng, 7, 12);
            let e = rng.gen_range(0..g.edge_count());
            let Ok(smaller) = crate::surgery::delete_edge(&g, e) else {
                continue;
            };
            let before = g.spectral_gap();
            let after = smaller.spectral_gap();
            assert!(after <= before + 1e-10, "gap increased: {before} -> {after}");
            checked += 1;
        }
    }

    #[test]
    fn max_flow_connectivity_matches_exhaustive_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..60 {
            let g = crate::verify::corpus::random_multigraph(&mut rng, 6, 12);
            assert_eq!(
                g.edge_connectivity().unwrap(),
                g.edge_connectivity_exhaustive().unwrap()
            );
        }
    }

    #[test]
    fn normalized_gap_sandwich() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let g = crate::verify::corpus::random_multigraph(&mut rng, 7, 12);
            let gamma = g.spectral_gap();
            let alpha = g.normalized_gap().unwrap();
            let dmin = g.min_degree() as f64;
            let dmax = g.max_degree() as f64;
            assert!(alpha * dmax >= gamma - 1e-9);
            assert!(gamma >= alpha * dmin - 1e-9);
        }
    }

    #[test]
    fn eigenvalue_count_and_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..20 {
            let g = crate::verify::corpus::random_multigraph(&mut rng, 8, 14);
            let l = g.laplacian_matrix();
            let spec = g.laplacian_spectrum();
            assert_eq!(spec.eigenvalues.len(), l.dim());
            let sum: f64 = spec.eigenvalues.iter().sum();
            assert!(close(sum, l.trace(), 1e-9 * l.trace().abs().max(1.0)));
            // Connected: exactly one (near-)zero eigenvalue, others positive.
            assert!(spec.eigenvalues[0].abs() < 1e-10);
            assert!(spec.eigenvalues[1] > 1e-8);
        }
    }
}
