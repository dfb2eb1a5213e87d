//! Von Below transference: for an equilateral metric graph with unit edge
//! lengths, lambda = (arccos(1 - alpha))^2 maps normalized-Laplacian
//! eigenvalues alpha in (0, 2) bijectively (with multiplicities) onto the
//! metric Laplacian spectrum inside (0, pi^2).

use crate::graph::CombinatorialGraph;

/// Transferred spectrum in (0, pi^2).
#[derive(Debug, Clone)]
pub struct VonBelowTransfer {
    /// Transferred eigenvalues, sorted, multiplicities flattened in.
    pub eigenvalues: Vec<f64>,
    /// True when some alpha ~ 2 was excluded. For a non-bipartite unicyclic
    /// graph pi^2 can be a metric eigenvalue even though 2 is not a
    /// normalized-Laplacian eigenvalue, so the boundary is not resolved here;
    /// the secular solver is ground truth at lambda = pi^2.
    pub alpha_two_excluded: bool,
}

/// Map the normalized-Laplacian spectrum of `g` (interpreted as the unit
/// equilateral metric graph) into metric eigenvalues below pi^2.
///
/// `g` is loop-free by construction of [`CombinatorialGraph`].
pub fn von_below_spectrum(g: &CombinatorialGraph) -> VonBelowTransfer {
    let alphas = g
        .normalized_spectrum()
        .expect("connected graphs have no isolated vertices")
        .eigenvalues;
    let mut eigenvalues = Vec::new();
    let mut alpha_two_excluded = false;
    for alpha in alphas {
        if alpha <= 1e-10 {
            continue;
        }
        if alpha >= 2.0 - 1e-10 {
            alpha_two_excluded = true;
            continue;
        }
        let k = (1.0 - alpha).acos();
        eigenvalues.push(k * k);
    }
    eigenvalues.sort_by(f64::total_cmp);
    VonBelowTransfer { eigenvalues, alpha_two_excluded }
}
