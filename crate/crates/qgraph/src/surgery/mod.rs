//! Graph transformation operators: edge-to-path replacement, edge deletion,
//! interior cuts, Dirichlet splitting, edge doubling, end detachment,
//! subdivision, vertex joining, pendant attachment and lengthening. Each
//! returns a new value; results are revalidated by callers where needed.

pub mod generators;
mod symmetrize;

pub use symmetrize::{symmetrize_positive_part, Symmetrization, SymmetrizeError};

use crate::graph::CombinatorialGraph;
use crate::metric::{MetricEdge, MetricGraph, VertexCondition};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SurgeryError {
    #[error("edge index {0} out of range")]
    BadEdge(usize),
    #[error("vertex index {0} out of range")]
    BadVertex(usize),
    #[error("path must start and end at the replaced edge's endpoints")]
    BadRange,
    #[error("deleting this edge would disconnect the graph")]
    WouldDisconnect,
    #[error("cut coordinate {x} outside the open interval (0, {len})")]
    OutOfRange { x: f64, len: f64 },
    #[error("edge subset is not a proper subset of the edges incident to the vertex")]
    BadSubset,
    #[error("vertex degree {0} is below the required minimum {1}")]
    DegreeTooLow(usize, usize),
    #[error("new length must be positive and at least the current length")]
    BadLength,
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
    #[error(transparent)]
    Metric(#[from] crate::metric::MetricGraphError),
}

/// Serializable description of one surgery step, applied in order by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurgeryOp {
    ReplaceEdgeByPath { edge: usize, path: Vec<usize> },
    DeleteEdge { edge: usize },
    CutEdge { edge: usize, x: f64 },
    JoinVertices { keep: usize, merge: usize },
    DirichletSplit { vertex: usize, edges: Vec<usize> },
    DoubleEdges,
    AttachPendant { vertex: usize, length: f64 },
    DetachEdgeEnd { edge: usize, vertex: usize },
    LengthenEdge { edge: usize, length: f64 },
    SubdivideEdge { edge: usize, x: f64 },
}

/// Replace an edge by the path through the listed vertices, which must start
/// and end at the edge's endpoints. The path edges are added in addition to
/// all existing edges.
pub fn replace_edge_by_path(
    g: &CombinatorialGraph,
    edge: usize,
    path: &[usize],
) -> Result<CombinatorialGraph, SurgeryError> {
    let &(u, w) = g.edges().get(edge).ok_or(SurgeryError::BadEdge(edge))?;
    if path.len() < 2 {
        return Err(SurgeryError::BadRange);
    }
    let (first, last) = (path[0], *path.last().unwrap());
    if !((first == u && last == w) || (first == w && last == u)) {
        return Err(SurgeryError::BadRange);
    }
    for &v in path {
        if v >= g.vertex_count() {
            return Err(SurgeryError::BadVertex(v));
        }
    }
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != edge)
        .map(|(_, e)| *e)
        .collect();
    for pair in path.windows(2) {
        edges.push((pair[0], pair[1]));
    }
    Ok(CombinatorialGraph::new(g.vertex_count(), edges)?)
}

/// Delete an edge, requiring the result to stay connected.
pub fn delete_edge(
    g: &CombinatorialGraph,
    edge: usize,
) -> Result<CombinatorialGraph, SurgeryError> {
    if edge >= g.edge_count() {
        return Err(SurgeryError::BadEdge(edge));
    }
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != edge)
        .map(|(_, e)| *e)
        .collect();
    CombinatorialGraph::new(g.vertex_count(), edges).map_err(|e| match e {
        crate::graph::GraphError::Disconnected => SurgeryError::WouldDisconnect,
        other => SurgeryError::Graph(other),
    })
}

/// Cut an edge at interior coordinate x: the edge is severed into two pendant
/// pieces with new Natural degree-one vertices. Total length is preserved;
/// the result may be disconnected.
pub fn cut_edge(mg: &MetricGraph, edge: usize, x: f64) -> Result<MetricGraph, SurgeryError> {
    let e = *mg.edges().get(edge).ok_or(SurgeryError::BadEdge(edge))?;
    if !(x > 0.0 && x < e.length) {
        return Err(SurgeryError::OutOfRange { x, len: e.length });
    }
    let n = mg.vertex_count();
    let mut edges: Vec<MetricEdge> = mg
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != edge)
        .map(|(_, f)| *f)
        .collect();
    edges.push(MetricEdge { u: e.u, w: n, length: x });
    edges.push(MetricEdge { u: n + 1, w: e.w, length: e.length - x });
    let mut conditions = mg.conditions().to_vec();
    conditions.extend([VertexCondition::Natural, VertexCondition::Natural]);
    Ok(MetricGraph::with_conditions(n + 2, edges, conditions)?)
}

/// Insert a Natural degree-two vertex at coordinate x of an edge, keeping the
/// metric structure (and therefore the spectrum) unchanged.
pub fn subdivide_edge(mg: &MetricGraph, edge: usize, x: f64) -> Result<MetricGraph, SurgeryError> {
    let e = *mg.edges().get(edge).ok_or(SurgeryError::BadEdge(edge))?;
    if !(x > 0.0 && x < e.length) {
        return Err(SurgeryError::OutOfRange { x, len: e.length });
    }
    let n = mg.vertex_count();
    let mut edges: Vec<MetricEdge> = mg
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != edge)
        .map(|(_, f)| *f)
        .collect();
    edges.push(MetricEdge { u: e.u, w: n, length: x });
    edges.push(MetricEdge { u: n, w: e.w, length: e.length - x });
    let mut conditions = mg.conditions().to_vec();
    conditions.push(VertexCondition::Natural);
    Ok(MetricGraph::with_conditions(n + 1, edges, conditions)?)
}

/// Impose the Dirichlet condition at `vertex` for the listed incident edges:
/// each is detached from the vertex and given a new Dirichlet endpoint. The
/// subset must be proper (one cannot split all d edges). The result may be
/// disconnected.
pub fn dirichlet_split(
    mg: &MetricGraph,
    vertex: usize,
    split_edges: &[usize],
) -> Result<MetricGraph, SurgeryError> {
    if vertex >= mg.vertex_count() {
        return Err(SurgeryError::BadVertex(vertex));
    }
    let deg = mg.degree(vertex);
    if split_edges.len() >= deg {
        return Err(SurgeryError::BadSubset);
    }
    let mut seen = std::collections::HashSet::new();
    for &e in split_edges {
        let edge = mg.edges().get(e).ok_or(SurgeryError::BadEdge(e))?;
        if edge.u != vertex && edge.w != vertex {
            return Err(SurgeryError::BadSubset);
        }
        if !seen.insert(e) {
            return Err(SurgeryError::BadSubset);
        }
    }
    let mut edges = mg.edges().to_vec();
    let mut conditions = mg.conditions().to_vec();
    for &e in split_edges {
        let new_vertex = conditions.len();
        conditions.push(VertexCondition::Dirichlet);
        let f = &mut edges[e];
        // A loop at the vertex detaches one of its two ends.
        if f.u == vertex {
            f.u = new_vertex;
        } else {
            f.w = new_vertex;
        }
    }
    Ok(MetricGraph::with_conditions(conditions.len(), edges, conditions)?)
}

/// Substitute every edge with two parallel edges of the same length.
pub fn double_edges(mg: &MetricGraph) -> MetricGraph {
    let mut edges = Vec::with_capacity(mg.edge_count() * 2);
    for e in mg.edges() {
        edges.push(*e);
        edges.push(*e);
    }
    MetricGraph::with_conditions(mg.vertex_count(), edges, mg.conditions().to_vec())
        .expect("doubling preserves validity")
}

/// Detach one end of an edge from a vertex of degree >= 3 onto a new Natural
/// degree-one vertex. Reduces the Betti number by one; requires that the
/// graph stays connected.
pub fn detach_edge_end(
    mg: &MetricGraph,
    edge: usize,
    vertex: usize,
) -> Result<MetricGraph, SurgeryError> {
    let e = *mg.edges().get(edge).ok_or(SurgeryError::BadEdge(edge))?;
    if e.u != vertex && e.w != vertex {
        return Err(SurgeryError::BadVertex(vertex));
    }
    let deg = mg.degree(vertex);
    if deg < 3 {
        return Err(SurgeryError::DegreeTooLow(deg, 3));
    }
    let mut edges = mg.edges().to_vec();
    let mut conditions = mg.conditions().to_vec();
    let new_vertex = conditions.len();
    conditions.push(VertexCondition::Natural);
    if edges[edge].u == vertex {
        edges[edge].u = new_vertex;
    } else {
        edges[edge].w = new_vertex;
    }
    let candidate = MetricGraph::with_conditions(conditions.len(), edges, conditions)?;
    if !candidate.is_connected() {
        return Err(SurgeryError::WouldDisconnect);
    }
    Ok(candidate)
}

/// Identify vertex `merge` with vertex `keep` (vertex gluing). The merged
/// vertex keeps `keep`'s condition unless either side is Dirichlet.
pub fn join_vertices(
    mg: &MetricGraph,
    keep: usize,
    merge: usize,
) -> Result<MetricGraph, SurgeryError> {
    let n = mg.vertex_count();
    if keep >= n || merge >= n || keep == merge {
        return Err(SurgeryError::BadVertex(merge.max(keep)));
    }
    let relabel = |v: usize| -> usize {
        if v == merge {
            keep
        } else if v > merge {
            v - 1
        } else {
            v
        }
    };
    let edges: Vec<MetricEdge> = mg
        .edges()
        .iter()
        .map(|e| MetricEdge { u: relabel(e.u), w: relabel(e.w), length: e.length })
        .collect();
    let mut conditions = Vec::with_capacity(n - 1);
    for v in 0..n {
        if v == merge {
            continue;
        }
        let mut c = mg.condition(v);
        if v == keep
            && (mg.condition(keep) == VertexCondition::Dirichlet
                || mg.condition(merge) == VertexCondition::Dirichlet)
        {
            c = VertexCondition::Dirichlet;
        }
        conditions.push(c);
    }
    Ok(MetricGraph::with_conditions(n - 1, edges, conditions)?)
}

/// Attach a pendant edge of the given length at a vertex; the new endpoint is
/// a Natural degree-one vertex.
pub fn attach_pendant(
    mg: &MetricGraph,
    vertex: usize,
    length: f64,
) -> Result<MetricGraph, SurgeryError> {
    if vertex >= mg.vertex_count() {
        return Err(SurgeryError::BadVertex(vertex));
    }
    if !length.is_finite() || length <= 0.0 {
        return Err(SurgeryError::BadLength);
    }
    let mut edges = mg.edges().to_vec();
    let mut conditions = mg.conditions().to_vec();
    let new_vertex = conditions.len();
    conditions.push(VertexCondition::Natural);
    edges.push(MetricEdge { u: vertex, w: new_vertex, length });
    Ok(MetricGraph::with_conditions(conditions.len(), edges, conditions)?)
}

/// Increase an edge's length (eigenvalue-decreasing for Natural conditions).
pub fn lengthen_edge(
    mg: &MetricGraph,
    edge: usize,
    new_length: f64,
) -> Result<MetricGraph, SurgeryError> {
    let e = mg.edges().get(edge).ok_or(SurgeryError::BadEdge(edge))?;
    if !new_length.is_finite() || new_length < e.length || new_length <= 0.0 {
        return Err(SurgeryError::BadLength);
    }
    let mut edges = mg.edges().to_vec();
    edges[edge].length = new_length;
    Ok(MetricGraph::with_conditions(mg.vertex_count(), edges, mg.conditions().to_vec())?)
}

/// Apply a metric surgery script in order.
pub fn apply_metric_ops(mg: &MetricGraph, ops: &[SurgeryOp]) -> Result<MetricGraph, SurgeryError> {
    let mut g = mg.clone();
    for op in ops {
        g = match op {
            SurgeryOp::CutEdge { edge, x } => cut_edge(&g, *edge, *x)?,
            SurgeryOp::SubdivideEdge { edge, x } => subdivide_edge(&g, *edge, *x)?,
            SurgeryOp::DirichletSplit { vertex, edges } => dirichlet_split(&g, *vertex, edges)?,
            SurgeryOp::DoubleEdges => double_edges(&g),
            SurgeryOp::AttachPendant { vertex, length } => attach_pendant(&g, *vertex, *length)?,
            SurgeryOp::DetachEdgeEnd { edge, vertex } => detach_edge_end(&g, *edge, *vertex)?,
            SurgeryOp::LengthenEdge { edge, length } => lengthen_edge(&g, *edge, *length)?,
            SurgeryOp::JoinVertices { keep, merge } => join_vertices(&g, *keep, *merge)?,
            SurgeryOp::ReplaceEdgeByPath { .. } | SurgeryOp::DeleteEdge { .. } => {
                return Err(SurgeryError::BadSubset);
            }
        };
    }
    Ok(g)
}

/// Apply a combinatorial surgery script in order.
pub fn apply_combinatorial_ops(
    g: &CombinatorialGraph,
    ops: &[SurgeryOp],
) -> Result<CombinatorialGraph, SurgeryError> {
    let mut out = g.clone();
    for op in ops {
        out = match op {
            SurgeryOp::ReplaceEdgeByPath { edge, path } => replace_edge_by_path(&out, *edge, path)?,
            SurgeryOp::DeleteEdge { edge } => delete_edge(&out, *edge)?,
            _ => return Err(SurgeryError::BadSubset),
        };
    }
    Ok(out)
}

/// One step of the pumpkin-chain reduction trace.
#[derive(Debug, Clone)]
pub struct ReductionStep {
    pub op: SurgeryOp,
    /// Rayleigh quotient of the (sorted) minimizer on the graph after the step.
    pub quotient: f64,
}

/// Outcome of replaying the edge-to-path reduction with a given minimizer.
#[derive(Debug, Clone)]
pub struct PumpkinChainReduction {
    /// Vertex permutation: `order[i]` is the original index of sorted vertex i.
    pub order: Vec<usize>,
    pub steps: Vec<ReductionStep>,
    /// Final eta-regular pumpkin chain in sorted vertex labels.
    pub chain: CombinatorialGraph,
}

/// Replay the proof-style reduction of a graph to an eta-regular pumpkin
/// chain guided by the minimizer `f`: sort vertices by f, replace every long
/// edge by the path through the intermediate sorted vertices, then delete
/// excess parallel edges down to eta per slice. Every step's Rayleigh
/// quotient (exponent `p`) is recorded; the sequence never increases.
pub fn reduce_to_pumpkin_chain(
    g: &CombinatorialGraph,
    f: &[f64],
    p: crate::p_laplacian::PExponent,
) -> Result<PumpkinChainReduction, SurgeryError> {
    assert_eq!(f.len(), g.vertex_count());
    let eta = g.edge_connectivity()?;
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.sort_by(|&a, &b| f[a].total_cmp(&f[b]));
    let mut rank = vec![0usize; g.vertex_count()];
    for (pos, &v) in order.iter().enumerate() {
        rank[v] = pos;
    }
    // Relabel so vertex i has the i-th smallest value; then the minimizer in
    // sorted coordinates is nondecreasing.
    let sorted_edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(u, w)| {
            let (a, b) = (rank[u], rank[w]);
            (a.min(b), a.max(b))
        })
        .collect();
    let mut current = CombinatorialGraph::new(g.vertex_count(), sorted_edges)?;
    let f_sorted: Vec<f64> = order.iter().map(|&v| f[v]).collect();
    let mut steps = Vec::new();
    loop {
        let long = current
            .edges()
            .iter()
            .position(|&(u, w)| w.max(u) - w.min(u) >= 2);
        let Some(edge) = long else {
            break;
        };
        let (u, w) = current.edges()[edge];
        let (lo, hi) = (u.min(w), u.max(w));
        let path: Vec<usize> = (lo..=hi).collect();
        current = replace_edge_by_path(&current, edge, &path)?;
        steps.push(ReductionStep {
            op: SurgeryOp::ReplaceEdgeByPath { edge, path },
            quotient: crate::p_laplacian::rayleigh_p(&current, &f_sorted, p),
        });
    }
    // Delete excess parallel edges down to eta per slice.
    for slice in 0..current.vertex_count().saturating_sub(1) {
        while current.multiplicity(slice, slice + 1) > eta {
            let edge = current
                .edges()
                .iter()
                .position(|&(u, w)| (u.min(w), u.max(w)) == (slice, slice + 1))
                .expect("slice edge exists");
            current = delete_edge(&current, edge)?;
            steps.push(ReductionStep {
                op: SurgeryOp::DeleteEdge { edge },
                quotient: crate::p_laplacian::rayleigh_p(&current, &f_sorted, p),
            });
        }
    }
    Ok(PumpkinChainReduction { order, steps, chain: current })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Violation;
    use generators as gen;

    #[test]
    fn replace_chord_makes_pumpkin_chain() {
        // P3 plus the chord (0, 2); replacing the chord doubles both path edges.
        let g = CombinatorialGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let out = replace_edge_by_path(&g, 2, &[0, 1, 2]).unwrap();
        assert_eq!(out.multiplicity(0, 1), 2);
        assert_eq!(out.multiplicity(1, 2), 2);
        assert_eq!(out.edge_count(), 4);
    }

    #[test]
    fn replace_k3_edge_through_middle() {
        let g = gen::complete(3);
        let edge = g.edges().iter().position(|&(u, w)| (u, w) == (0, 2)).unwrap();
        let out = replace_edge_by_path(&g, edge, &[0, 1, 2]).unwrap();
        assert_eq!(out.multiplicity(0, 1), 2);
        assert_eq!(out.multiplicity(1, 2), 2);
        assert_eq!(out.multiplicity(0, 2), 0);
    }

    #[test]
    fn replace_rejects_bad_range() {
        let g = gen::complete(3);
        assert_eq!(replace_edge_by_path(&g, 0, &[0, 2]).unwrap_err(), SurgeryError::BadRange);
    }

    #[test]
    fn delete_edge_cases() {
        let pumpkin3 = CombinatorialGraph::new(2, vec![(0, 1), (0, 1), (0, 1)]).unwrap();
        let out = delete_edge(&pumpkin3, 0).unwrap();
        assert_eq!(out.edge_count(), 2);
        let p3 = gen::path(3);
        assert_eq!(delete_edge(&p3, 0).unwrap_err(), SurgeryError::WouldDisconnect);
    }

    #[test]
    fn cut_interval_and_circle() {
        let i = gen::interval(1.0);
        let cut = cut_edge(&i, 0, 0.5).unwrap();
        assert_eq!(cut.edge_count(), 2);
        assert!((cut.total_length() - 1.0).abs() < 1e-15);
        assert!(cut.validate().contains(&Violation::Disconnected));

        let c = gen::circle(2.0);
        let cut = cut_edge(&c, 0, 1.0).unwrap();
        assert!(cut.is_connected());
        assert_eq!(cut.leaves().len(), 2);

        let l = gen::lollipop(1.0, 0.5);
        let cut = cut_edge(&l, 1, 0.25).unwrap();
        assert!(cut.validate().contains(&Violation::Disconnected));
    }

    #[test]
    fn cut_rejects_out_of_range() {
        let i = gen::interval(1.0);
        assert!(matches!(cut_edge(&i, 0, 1.0), Err(SurgeryError::OutOfRange { .. })));
    }

    #[test]
    fn dirichlet_split_star() {
        let s = gen::equilateral(&gen::star(3), 1.0);
        let split = dirichlet_split(&s, 0, &[0]).unwrap();
        assert!(!split.is_connected());
        assert_eq!(split.dirichlet_vertices().len(), 1);
        // r = deg(v) is rejected.
        assert_eq!(dirichlet_split(&s, 0, &[0, 1, 2]).unwrap_err(), SurgeryError::BadSubset);
        // r = 0 is the identity.
        let same = dirichlet_split(&s, 0, &[]).unwrap();
        assert_eq!(same, s);
    }

    #[test]
    fn double_edges_shapes() {
        let i = gen::interval(1.0);
        let d = double_edges(&i);
        assert_eq!(d.edge_count(), 2);
        assert!((d.total_length() - 2.0).abs() < 1e-15);
        let s = gen::equilateral(&gen::star(3), 1.0);
        let d = double_edges(&s);
        assert_eq!(d.edge_count(), 6);
        for v in 1..4 {
            assert_eq!(d.degree(v), 2);
        }
    }

    #[test]
    fn detach_edge_end_on_lollipop() {
        let l = gen::lollipop(1.0, 0.5);
        assert_eq!(l.betti_number(), 1);
        let detached = detach_edge_end(&l, 0, 0).unwrap();
        assert_eq!(detached.betti_number(), 0);
        assert!(detached.is_connected());

        // On a circle the junction has degree two after suppression.
        let c = gen::circle(1.0);
        assert!(matches!(detach_edge_end(&c, 0, 0), Err(SurgeryError::DegreeTooLow(2, 3))));
    }

    #[test]
    fn join_and_pendant_and_lengthen() {
        let i = gen::interval(1.0);
        let joined = join_vertices(&i, 0, 1).unwrap();
        assert_eq!(joined.vertex_count(), 1);
        assert!(joined.has_loops());

        let with_pendant = attach_pendant(&i, 0, 0.5).unwrap();
        assert_eq!(with_pendant.leaves().len(), 2);

        let longer = lengthen_edge(&i, 0, 2.0).unwrap();
        assert!((longer.total_length() - 2.0).abs() < 1e-15);
        assert!(lengthen_edge(&i, 0, 0.5).is_err());
    }
}
