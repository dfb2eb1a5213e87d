//! Metric (quantum) graph model: edges with positive lengths and a fixed
//! orientation, per-vertex Natural or Dirichlet conditions, degree-two
//! suppression, metric and discrete edge connectivity, lengths and diameters.
//!
//! Loops (u = w) and parallel edges are first-class. Validation is
//! diagnostic: surgery operations legitimately produce disconnected graphs
//! (Dirichlet splitting, interior cuts), so the constructor only rejects
//! structurally impossible input and `validate` reports everything else.

use crate::graph::{CombinatorialGraph, GraphError, UnionFind};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexCondition {
    /// Continuity plus Kirchhoff current conservation; reduces to Neumann at
    /// degree-one vertices.
    Natural,
    /// Function vanishes at the vertex.
    Dirichlet,
}

/// Edge with a fixed orientation u -> w defining the coordinate x in [0, len].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricEdge {
    pub u: usize,
    pub w: usize,
    pub length: f64,
}

/// A point of the metric graph: coordinate x along edge `edge`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphPoint {
    pub edge: usize,
    pub x: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum MetricGraphError {
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    VertexOutOfRange(usize, usize, usize),
    #[error("vertex {0} out of range for condition map")]
    ConditionOutOfRange(usize),
    #[error("graph has no vertices")]
    Empty,
    #[error("graph has loops; operation needs a loop-free graph")]
    HasLoops,
    #[error("graph has fewer than two degree-one vertices")]
    NoLeaves,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A single invariant violation reported by [`MetricGraph::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonPositiveLength { edge: usize, length: f64 },
    Disconnected,
    NoEdges,
    /// Natural degree-two vertex other than the single-vertex cycle case; the
    /// graph is valid but not in canonical form.
    SuppressibleVertex { vertex: usize },
}

/// Metric graph with per-vertex conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricGraph {
    vertex_count: usize,
    edges: Vec<MetricEdge>,
    conditions: Vec<VertexCondition>,
}

impl MetricGraph {
    pub fn new(
        vertex_count: usize,
        edges: Vec<MetricEdge>,
        dirichlet: &[usize],
    ) -> Result<Self, MetricGraphError> {
        if vertex_count == 0 {
            return Err(MetricGraphError::Empty);
        }
        for e in &edges {
            if e.u >= vertex_count || e.w >= vertex_count {
                return Err(MetricGraphError::VertexOutOfRange(e.u, e.w, vertex_count));
            }
        }
        let mut conditions = vec![VertexCondition::Natural; vertex_count];
        for &v in dirichlet {
            if v >= vertex_count {
                return Err(MetricGraphError::ConditionOutOfRange(v));
            }
            conditions[v] = VertexCondition::Dirichlet;
        }
        Ok(MetricGraph { vertex_count, edges, conditions })
    }

    pub fn with_conditions(
        vertex_count: usize,
        edges: Vec<MetricEdge>,
        conditions: Vec<VertexCondition>,
    ) -> Result<Self, MetricGraphError> {
        assert_eq!(conditions.len(), vertex_count);
        let dirichlet: Vec<usize> = conditions
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == VertexCondition::Dirichlet)
            .map(|(v, _)| v)
            .collect();
        MetricGraph::new(vertex_count, edges, &dirichlet)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[MetricEdge] {
        &self.edges
    }

    pub fn condition(&self, v: usize) -> VertexCondition {
        self.conditions[v]
    }

    pub fn conditions(&self) -> &[VertexCondition] {
        &self.conditions
    }

    pub fn dirichlet_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count)
            .filter(|&v| self.conditions[v] == VertexCondition::Dirichlet)
            .collect()
    }

    pub fn has_dirichlet(&self) -> bool {
        self.conditions.contains(&VertexCondition::Dirichlet)
    }

    /// Degree counting loops twice.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.u == v) as usize + (e.w == v) as usize)
            .sum()
    }

    /// Degree-one vertices.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.vertex_count).filter(|&v| self.degree(v) == 1).collect()
    }

    /// Degree-one vertices with the Natural (= Neumann) condition.
    pub fn neumann_leaf_count(&self) -> usize {
        self.leaves()
            .into_iter()
            .filter(|&v| self.conditions[v] == VertexCondition::Natural)
            .count()
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|e| e.u == e.w)
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|e| e.u == e.w).count()
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    pub fn longest_edge(&self) -> f64 {
        self.edges.iter().map(|e| e.length).fold(0.0, f64::max)
    }

    pub fn shortest_edge(&self) -> f64 {
        self.edges.iter().map(|e| e.length).fold(f64::INFINITY, f64::min)
    }

    /// Betti number E - V + 1 per connected component summed; for a connected
    /// graph this is the number of independent cycles.
    pub fn betti_number(&self) -> usize {
        let comps = self.component_count();
        (self.edges.len() + comps).saturating_sub(self.vertex_count)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count);
        for e in &self.edges {
            uf.union(e.u, e.w);
        }
        uf.component_count()
    }

    /// Vertex partition into connected components (sorted vertex lists).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.vertex_count);
        for e in &self.edges {
            uf.union(e.u, e.w);
        }
        let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in 0..self.vertex_count {
            by_root.entry(uf.find(v)).or_default().push(v);
        }
        by_root.into_values().collect()
    }

    /// The subgraph induced by a vertex set, with vertices relabeled in the
    /// given order. Also returns the original edge index of each kept edge.
    pub fn induced(&self, vertices: &[usize]) -> (MetricGraph, Vec<usize>) {
        let mut index = vec![usize::MAX; self.vertex_count];
        for (new, &old) in vertices.iter().enumerate() {
            index[old] = new;
        }
        let mut edges = Vec::new();
        let mut edge_map = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if index[e.u] != usize::MAX && index[e.w] != usize::MAX {
                edges.push(MetricEdge { u: index[e.u], w: index[e.w], length: e.length });
                edge_map.push(i);
            }
        }
        let conditions = vertices.iter().map(|&v| self.conditions[v]).collect();
        (
            MetricGraph { vertex_count: vertices.len(), edges, conditions },
            edge_map,
        )
    }

    /// Diagnostic invariant check; empty iff the graph is a valid compact
    /// connected metric graph in canonical form.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if !e.length.is_finite() || e.length <= 0.0 {
                out.push(Violation::NonPositiveLength { edge: i, length: e.length });
            }
        }
        if self.edges.is_empty() {
            out.push(Violation::NoEdges);
        }
        if !self.is_connected() {
            out.push(Violation::Disconnected);
        }
        for v in 0..self.vertex_count {
            if self.conditions[v] != VertexCondition::Natural || self.degree(v) != 2 {
                continue;
            }
            let incident = self
                .edges
                .iter()
                .filter(|e| e.u == v || e.w == v)
                .count();
            // A lone loop is the single-vertex cycle exception.
            if incident != 1 {
                out.push(Violation::SuppressibleVertex { vertex: v });
            }
        }
        out
    }

    /// No hard violations; suppressible degree-two vertices are allowed (the
    /// spectrum does not see them and [`Self::suppress_degree_two`] removes
    /// them).
    pub fn is_valid(&self) -> bool {
        self.validate()
            .iter()
            .all(|v| matches!(v, Violation::SuppressibleVertex { .. }))
    }

    /// Multiply all edge lengths by `c > 0`.
    pub fn scaled(&self, c: f64) -> MetricGraph {
        assert!(c > 0.0);
        let mut g = self.clone();
        for e in &mut g.edges {
            e.length *= c;
        }
        g
    }

    /// All edge lengths equal within relative tolerance 1e-12.
    pub fn is_equilateral(&self) -> bool {
        if self.edges.is_empty() {
            return false;
        }
        let l0 = self.edges[0].length;
        self.edges.iter().all(|e| (e.length - l0).abs() <= 1e-12 * l0.abs().max(1.0))
    }

    /// Equilateral with every edge of length 1 (within 1e-12).
    pub fn is_unit_equilateral(&self) -> bool {
        self.edges.iter().all(|e| (e.length - 1.0).abs() <= 1e-12) && !self.edges.is_empty()
    }

    /// Remove Natural degree-two vertices by merging their incident edges,
    /// repeated to a fixpoint. The single-vertex cycle (a lone loop) is kept,
    /// and Dirichlet vertices are never suppressed. Spectrum-preserving.
    pub fn suppress_degree_two(&self) -> MetricGraph {
        let mut g = self.clone();
        loop {
            let mut target = None;
            for v in 0..g.vertex_count {
                if g.conditions[v] != VertexCondition::Natural || g.degree(v) != 2 {
                    continue;
                }
                let incident: Vec<usize> = g
                    .edges
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| e.u == v || e.w == v)
                    .map(|(i, _)| i)
                    .collect();
                // A lone loop at v is the cycle-graph exception.
                if incident.len() == 1 {
                    continue;
                }
                target = Some((v, incident[0], incident[1]));
                break;
            }
            let Some((v, i1, i2)) = target else {
                break;
            };
            let e1 = g.edges[i1];
            let e2 = g.edges[i2];
            let a = if e1.u == v { e1.w } else { e1.u };
            let b = if e2.u == v { e2.w } else { e2.u };
            let merged = MetricEdge { u: a, w: b, length: e1.length + e2.length };
            let mut edges: Vec<MetricEdge> = g
                .edges
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != i1 && *i != i2)
                .map(|(_, e)| *e)
                .collect();
            edges.push(merged);
            g = MetricGraph { vertex_count: g.vertex_count, edges, conditions: g.conditions.clone() };
            g = g.drop_isolated_vertices();
        }
        g
    }

    /// Remove vertices of degree zero, relabeling the rest in order.
    fn drop_isolated_vertices(&self) -> MetricGraph {
        let keep: Vec<usize> = (0..self.vertex_count).filter(|&v| self.degree(v) > 0).collect();
        if keep.len() == self.vertex_count {
            return self.clone();
        }
        self.induced(&keep).0
    }

    /// Metric edge connectivity per interior cuts: 1 when a single cut
    /// disconnects (the graph has a non-loop bridge or is an interval-like
    /// tree edge), otherwise 2 (one can always cut any edge twice).
    pub fn metric_edge_connectivity(&self) -> usize {
        for i in 0..self.edges.len() {
            let e = self.edges[i];
            if e.u == e.w {
                continue; // cutting inside a loop never disconnects
            }
            // Cutting inside edge i splits it in two; equivalent to deleting
            // the edge when checking connectivity of the rest plus the stubs.
            let mut uf = UnionFind::new(self.vertex_count);
            for (j, f) in self.edges.iter().enumerate() {
                if j != i {
                    uf.union(f.u, f.w);
                }
            }
            if uf.component_count() > 1 {
                return 1;
            }
        }
        2
    }

    /// Discrete edge connectivity: suppress degree-two vertices, use the
    /// flower convention (single remaining vertex => 2), otherwise the minimal
    /// number of non-loop edges of the reduced graph whose deletion
    /// disconnects it. Deleting loops never disconnects, so loops are excluded
    /// from cut sets.
    pub fn discrete_edge_connectivity(&self) -> usize {
        let reduced = self.suppress_degree_two();
        if reduced.vertex_count == 1 {
            return 2; // flower graphs, including the cycle
        }
        let n = reduced.vertex_count;
        let mut cap = vec![vec![0i64; n]; n];
        for e in &reduced.edges {
            if e.u != e.w {
                cap[e.u][e.w] += 1;
                cap[e.w][e.u] += 1;
            }
        }
        let mut best = usize::MAX;
        for t in 1..n {
            best = best.min(dense_max_flow(&cap, 0, t));
        }
        best
    }

    /// Canonically a circle: the suppressed graph is one Natural vertex with
    /// a single loop.
    pub fn is_circle(&self) -> bool {
        let s = self.suppress_degree_two();
        s.vertex_count == 1
            && s.edges.len() == 1
            && s.edges[0].u == s.edges[0].w
            && s.conditions[0] == VertexCondition::Natural
    }

    /// Canonically a lollipop/lasso: one loop plus a pendant edge, all
    /// conditions Natural.
    pub fn is_lollipop(&self) -> bool {
        let s = self.suppress_degree_two();
        if s.vertex_count != 2 || s.edges.len() != 2 || s.has_dirichlet() {
            return false;
        }
        let loops = s.edges.iter().filter(|e| e.u == e.w).count();
        let plain = s.edges.iter().filter(|e| e.u != e.w).count();
        loops == 1 && plain == 1
    }

    /// Forget lengths; requires a loop-free graph.
    pub fn underlying_combinatorial(&self) -> Result<CombinatorialGraph, MetricGraphError> {
        if self.has_loops() {
            return Err(MetricGraphError::HasLoops);
        }
        let edges = self.edges.iter().map(|e| (e.u, e.w)).collect();
        Ok(CombinatorialGraph::new(self.vertex_count, edges)?)
    }

    /// All-pairs shortest vertex distances (Dijkstra from each vertex).
    pub fn vertex_distances(&self) -> Vec<Vec<f64>> {
        let n = self.vertex_count;
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for e in &self.edges {
            if e.u != e.w {
                adj[e.u].push((e.w, e.length));
                adj[e.w].push((e.u, e.length));
            }
        }
        let mut dist = vec![vec![f64::INFINITY; n]; n];
        for s in 0..n {
            let d = &mut dist[s];
            d[s] = 0.0;
            let mut heap = std::collections::BinaryHeap::new();
            heap.push((std::cmp::Reverse(ordered(0.0)), s));
            while let Some((std::cmp::Reverse(du), u)) = heap.pop() {
                let du = du.0;
                if du > d[u] {
                    continue;
                }
                for &(v, len) in &adj[u] {
                    let alt = du + len;
                    if alt < d[v] {
                        d[v] = alt;
                        heap.push((std::cmp::Reverse(ordered(alt)), v));
                    }
                }
            }
        }
        dist
    }

    /// Largest distance between any two points of the graph (vertices or
    /// interior points). Vertex distances come from Dijkstra; the interior
    /// maximum over a pair of edges has a closed form.
    pub fn metric_diameter(&self) -> f64 {
        let dist = self.vertex_distances();
        let mut best = 0.0f64;
        let m = self.edges.len();
        for i in 0..m {
            for j in i..m {
                best = best.max(self.edge_pair_sup(&dist, i, j));
            }
        }
        best
    }

    /// Farthest-pair distance for points x on edge i, y on edge j.
    ///
    /// d(x, y) is the min of four linear endpoint routes, hence jointly
    /// concave and piecewise linear in (x, y); its maximum over the rectangle
    /// sits at a breakpoint of the x-marginal, which we enumerate.
    fn edge_pair_sup(&self, dist: &[Vec<f64>], i: usize, j: usize) -> f64 {
        let ei = self.edges[i];
        let ej = self.edges[j];
        if i == j {
            // Points on one edge: either along the edge or around through the
            // endpoints. max over x <= y of min(y - x, x + d(u,w) + l - y)
            // is attained where both routes agree; d(u,w) <= l always.
            let around = dist[ei.u][ei.w];
            return 0.5 * (ei.length + around);
        }
        let duu = dist[ei.u][ej.u];
        let dwu = dist[ei.w][ej.u];
        let duw = dist[ei.u][ej.w];
        let dww = dist[ei.w][ej.w];
        if !(duu.is_finite() && dwu.is_finite() && duw.is_finite() && dww.is_finite()) {
            return 0.0; // different components; sup over the pair is not defined
        }
        let p = |x: f64| (x + duu).min(ei.length - x + dwu); // d(x, u_j)
        let q = |x: f64| (x + duw).min(ei.length - x + dww); // d(x, w_j)
        let value = |x: f64| -> f64 {
            let (pv, qv) = (p(x), q(x));
            let y_star = (0.5 * (ej.length + qv - pv)).clamp(0.0, ej.length);
            (y_star + pv).min(ej.length - y_star + qv)
        };
        // Breakpoints: branch switches of P and Q, plus where the inner
        // optimum y* hits an end of edge j (Q - P = +-l_j on each linear
        // segment of Q - P).
        let b1 = 0.5 * (ei.length + dwu - duu);
        let b2 = 0.5 * (ei.length + dww - duw);
        let mut xs: Vec<f64> = vec![0.0, ei.length];
        for b in [b1, b2] {
            if b > 0.0 && b < ei.length {
                xs.push(b);
            }
        }
        xs.sort_by(f64::total_cmp);
        let segments: Vec<(f64, f64)> = xs.windows(2).map(|w| (w[0], w[1])).collect();
        for (s0, s1) in segments {
            if s1 - s0 <= 0.0 {
                continue;
            }
            // Q - P is linear on [s0, s1]; solve Q - P = +-l_j.
            let f0 = q(s0) - p(s0);
            let f1 = q(s1) - p(s1);
            for target in [ej.length, -ej.length] {
                if (f0 - target) * (f1 - target) < 0.0 {
                    let t = (target - f0) / (f1 - f0);
                    xs.push(s0 + t * (s1 - s0));
                }
            }
        }
        xs.into_iter().map(value).fold(0.0, f64::max)
    }

    /// Maximum distance among degree-one vertices.
    pub fn leaf_diameter(&self) -> Result<f64, MetricGraphError> {
        let leaves = self.leaves();
        if leaves.len() < 2 {
            return Err(MetricGraphError::NoLeaves);
        }
        let dist = self.vertex_distances();
        let mut best = 0.0f64;
        for (a, &u) in leaves.iter().enumerate() {
            for &w in &leaves[a + 1..] {
                best = best.max(dist[u][w]);
            }
        }
        Ok(best)
    }
}

fn ordered(x: f64) -> OrderedF64 {
    OrderedF64(x)
}

#[derive(PartialEq, PartialOrd)]
struct OrderedF64(f64);

impl Eq for OrderedF64 {}

#[allow(clippy::derive_ord_xor_partial_ord)]
impl Ord for OrderedF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn dense_max_flow(cap: &[Vec<i64>], s: usize, t: usize) -> usize {
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
