//! Spectral toolkit for combinatorial and metric (quantum) graphs.
//!
//! The crate computes discrete, normalized and metric-graph Laplacian spectra,
//! p-Laplacian spectral gaps, edge-connectivity invariants, and evaluates a
//! catalog of eigenvalue bounds (Fiedler, Nicaise, Band–Lévy, Friedlander,
//! Ariturk, von Below style) against those spectra.
//!
//! Layout:
//!
//! * [`graph`] — combinatorial multigraphs, Laplacian / normalized Laplacian,
//!   dense eigensolving, edge connectivity, Betti number.
//! * [`metric`] — metric graphs with Natural/Dirichlet vertex conditions,
//!   degree-two suppression, metric and discrete edge connectivity, diameters.
//! * [`solver`] — eigenvalues and eigenfunctions of the metric Laplacian via
//!   secular-matrix singular-value scanning; von Below transference; level-set
//!   diagnostics.
//! * [`p_laplacian`] — p-trigonometric functions, interval p-Laplacian
//!   eigenvalues, discrete and metric p-spectral-gap minimization.
//! * [`bounds`] — the bound catalog with applicability predicates and the
//!   report engine.
//! * [`surgery`] — graph transformations (edge/path replacement, cutting,
//!   Dirichlet splitting, doubling, detaching), graph family generators, and
//!   the eigenfunction symmetrization check.
//! * [`io`] — JSON/CSV formats and run configuration.
//! * [`verify`] — the reproducible verification suite and its random corpus.

pub mod bounds;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod metric;
pub mod numeric;
pub mod p_laplacian;
pub mod solver;
pub mod surgery;
pub mod verify;

pub use graph::CombinatorialGraph;
pub use metric::MetricGraph;
