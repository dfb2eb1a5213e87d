//! Dense linear algebra for small matrices: cyclic Jacobi eigendecomposition
//! of real symmetric matrices, one-sided Jacobi SVD, and an LU-based smallest
//! singular value estimate used while scanning secular matrices.
//!
//! Everything here is O(n^3) and intended for n up to a few dozen; that is
//! enough for the graph sizes this crate targets and keeps the solver free of
//! external numeric backends.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MatrixError {
    #[error("matrix is not symmetric: |a[{i},{j}] - a[{j},{i}]| = {delta}")]
    NonSymmetric { i: usize, j: usize, delta: f64 },
    #[error("dimension mismatch: expected {expected} entries, got {got}")]
    BadDimension { expected: usize, got: usize },
}

/// Dense row-major rectangular matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        self.data
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Real symmetric matrix, validated on construction.
///
/// Symmetry tolerance is 1e-12 relative to the largest entry magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self, MatrixError> {
        if data.len() != n * n {
            return Err(MatrixError::BadDimension { expected: n * n, got: data.len() });
        }
        let scale = data.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
        for i in 0..n {
            for j in (i + 1)..n {
                let delta = (data[i * n + j] - data[j * n + i]).abs();
                if delta > 1e-12 * scale {
                    return Err(MatrixError::NonSymmetric { i, j, delta });
                }
            }
        }
        Ok(SymmetricMatrix { n, data })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = f(i, j);
            }
        }
        SymmetricMatrix::new(n, data).expect("generator must be symmetric")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.entry(i, i)).sum()
    }

    /// All eigenvalues, sorted nondecreasing.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let (mut vals, _) = self.eigen_decomposition();
        vals.sort_by(|a, b| a.total_cmp(b));
        vals
    }

    /// Eigenvalues with matching orthonormal eigenvectors, sorted nondecreasing.
    pub fn sorted_eigenpairs(&self) -> (Vec<f64>, Vec<Vec<f64>>) {
        let (vals, vecs) = self.eigen_decomposition();
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        let sorted_vals = order.iter().map(|&i| vals[i]).collect();
        let sorted_vecs = order.iter().map(|&i| vecs.column(i)).collect();
        (sorted_vals, sorted_vecs)
    }

    /// Cyclic Jacobi eigendecomposition; eigenvectors are columns, unsorted.
    fn eigen_decomposition(&self) -> (Vec<f64>, Matrix) {
        let n = self.n;
        let mut a = Matrix { rows: n, cols: n, data: self.data.clone() };
        let mut v = Matrix::identity(n);
        if n <= 1 {
            return ((0..n).map(|i| a[(i, i)]).collect(), v);
        }
        let scale = self.data.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
        for _sweep in 0..64 {
            let mut off = 0.0f64;
            for i in 0..n {
                for j in (i + 1)..n {
                    off = off.max(a[(i, j)].abs());
                }
            }
            if off <= 1e-15 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    if apq.abs() <= 1e-18 * scale {
                        continue;
                    }
                    let app = a[(p, p)];
                    let aqq = a[(q, q)];
                    let tau = (aqq - app) / (2.0 * apq);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    for i in 0..n {
                        if i != p && i != q {
                            let aip = a[(i, p)];
                            let aiq = a[(i, q)];
                            a[(i, p)] = c * aip - s * aiq;
                            a[(p, i)] = a[(i, p)];
                            a[(i, q)] = s * aip + c * aiq;
                            a[(q, i)] = a[(i, q)];
                        }
                    }
                    a[(p, p)] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                    a[(q, q)] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    for i in 0..n {
                        let vip = v[(i, p)];
                        let viq = v[(i, q)];
                        v[(i, p)] = c * vip - s * viq;
                        v[(i, q)] = s * vip + c * viq;
                    }
                }
            }
        }
        ((0..n).map(|i| a[(i, i)]).collect(), v)
    }
}

/// Singular value decomposition data for a square matrix.
///
/// `values[i]` ascending, `right_vectors[i]` the matching right singular
/// vector (unit 2-norm).
#[derive(Debug, Clone)]
pub struct Svd {
    pub values: Vec<f64>,
    pub right_vectors: Vec<Vec<f64>>,
}

/// One-sided Jacobi SVD of a square matrix.
///
/// Columns of the working copy are orthogonalized by plane rotations; the
/// accumulated rotations give the right singular vectors and the resulting
/// column norms the singular values.
pub fn svd_square(m: &Matrix) -> Svd {
    assert_eq!(m.rows, m.cols, "svd_square expects a square matrix");
    let n = m.rows;
    let mut a = m.clone();
    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm().max(1e-300);
    let eps = 1e-15;
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for i in 0..n {
                    let x = a[(i, p)];
                    let y = a[(i, q)];
                    app += x * x;
                    aqq += y * y;
                    apq += x * y;
                }
                if apq.abs() <= eps * (app.sqrt() * aqq.sqrt()).max(eps * scale * scale) {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..n {
                    let x = a[(i, p)];
                    let y = a[(i, q)];
                    a[(i, p)] = c * x - s * y;
                    a[(i, q)] = s * x + c * y;
                }
                for i in 0..n {
                    let x = v[(i, p)];
                    let y = v[(i, q)];
                    v[(i, p)] = c * x - s * y;
                    v[(i, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut pairs: Vec<(f64, Vec<f64>)> = (0..n)
        .map(|j| {
            let norm = (0..n).map(|i| a[(i, j)].powi(2)).sum::<f64>().sqrt();
            (norm, v.column(j))
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Svd {
        values: pairs.iter().map(|p| p.0).collect(),
        right_vectors: pairs.into_iter().map(|p| p.1).collect(),
    }
}

/// LU factorization with partial pivoting. `None` when numerically singular
/// to working precision (which callers treat as sigma_min ~ 0).
struct Lu {
    n: usize,
    lu: Matrix,
    piv: Vec<usize>,
    swaps: usize,
}

fn lu_factor(m: &Matrix) -> Option<Lu> {
    let n = m.rows;
    let mut lu = m.clone();
    let mut piv: Vec<usize> = (0..n).collect();
    let mut swaps = 0usize;
    for k in 0..n {
        let mut pmax = k;
        let mut vmax = lu[(k, k)].abs();
        for i in (k + 1)..n {
            let v = lu[(i, k)].abs();
            if v > vmax {
                vmax = v;
                pmax = i;
            }
        }
        if vmax == 0.0 {
            return None;
        }
        if pmax != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(pmax, j)];
                lu[(pmax, j)] = tmp;
            }
            piv.swap(k, pmax);
            swaps += 1;
        }
        let pivot = lu[(k, k)];
        for i in (k + 1)..n {
            let f = lu[(i, k)] / pivot;
            lu[(i, k)] = f;
            for j in (k + 1)..n {
                let delta = f * lu[(k, j)];
                lu[(i, j)] -= delta;
            }
        }
    }
    Some(Lu { n, lu, piv, swaps })
}

impl Lu {
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for j in 0..i {
                x[i] -= self.lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                x[i] -= self.lu[(i, j)] * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    /// Solve A^T y = b via the same factorization (PA = LU => A^T = U^T L^T P).
    fn solve_transposed(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = b.to_vec();
        // U^T z = b (forward substitution on U^T)
        for i in 0..n {
            for j in 0..i {
                y[i] -= self.lu[(j, i)] * y[j];
            }
            y[i] /= self.lu[(i, i)];
        }
        // L^T w = z (back substitution on L^T, unit diagonal)
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                y[i] -= self.lu[(j, i)] * y[j];
            }
        }
        // x = P^T w
        let mut x = vec![0.0; n];
        for (row, &p) in self.piv.iter().enumerate() {
            x[p] = y[row];
        }
        x
    }
}

/// Cheap estimate of the smallest singular value of a square matrix.
///
/// A couple of inverse-iteration steps on a fixed deterministic start vector:
/// sigma_min <= ||v|| / ||A^{-1} v|| with equality in the limit. The estimate
/// never undershoots by more than the iteration's convergence factor and is
/// only used to locate scan minima; classification happens via [`svd_square`].
pub fn smallest_singular_estimate(m: &Matrix) -> f64 {
    smin_estimate_and_det_sign(m).0
}

/// Smallest-singular-value estimate together with the sign of det(M), both
/// from one LU factorization. The sign is exact (pivot parity times diagonal
/// signs) and scale-free, which makes it the reliable detector for
/// arbitrarily narrow simple roots that any sigma sampling can step over.
pub fn smin_estimate_and_det_sign(m: &Matrix) -> (f64, i8) {
    let n = m.rows;
    if n == 0 {
        return (0.0, 0);
    }
    let Some(lu) = lu_factor(m) else {
        return (0.0, 0);
    };
    let mut sign = if lu.swaps % 2 == 0 { 1i8 } else { -1i8 };
    for i in 0..n {
        let d = lu.lu[(i, i)];
        if d == 0.0 {
            sign = 0;
            break;
        }
        if d < 0.0 {
            sign = -sign;
        }
    }
    // Deterministic pseudo-random start with all components active.
    let mut v: Vec<f64> = (0..n)
        .map(|i| {
            let x = ((i as u64).wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407) >> 33) as f64;
            x / (1u64 << 31) as f64 - 1.0 + 0.5 / (n as f64)
        })
        .collect();
    normalize(&mut v);
    let mut sigma = f64::INFINITY;
    for _ in 0..3 {
        // One step of inverse iteration on A^T A = A^{-1} A^{-T} applied to v,
        // driving v toward the right singular vector of the smallest sigma.
        let y = lu.solve_transposed(&v);
        let z = lu.solve(&y);
        let norm = norm2(&z);
        if !norm.is_finite() || norm == 0.0 {
            return (0.0, sign);
        }
        v = z;
        normalize(&mut v);
        let av = m.matvec(&v);
        sigma = norm2(&av);
    }
    (sigma, sign)
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn normalize(v: &mut [f64]) {
    let n = norm2(v);
    if n > 0.0 {
        for x in v {
            *x /= n;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(rows: Vec<Vec<f64>>) -> SymmetricMatrix {
        let n = rows.len();
        SymmetricMatrix::new(n, rows.into_iter().flatten().collect()).unwrap()
    }

    #[test]
    fn rejects_asymmetric_input() {
        let err = SymmetricMatrix::new(2, vec![1.0, 2.0, 3.0, 4.0]).unwrap_err();
        assert!(matches!(err, MatrixError::NonSymmetric { .. }));
    }

    #[test]
    fn identity_eigenvalues() {
        let m = sym(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
        let vals = m.eigenvalues();
        for v in vals {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn path_laplacian_eigenvalues() {
        // Laplacian of P3 has characteristic polynomial -l(l-1)(l-3).
        let m = sym(vec![vec![1.0, -1.0, 0.0], vec![-1.0, 2.0, -1.0], vec![0.0, -1.0, 1.0]]);
        let vals = m.eigenvalues();
        let expected = [0.0, 1.0, 3.0];
        for (v, e) in vals.iter().zip(expected) {
            assert!((v - e).abs() < 1e-12, "{v} vs {e}");
        }
    }

    #[test]
    fn eigenpairs_satisfy_residual_bound() {
        let m = sym(vec![
            vec![4.0, 1.0, -2.0, 0.5],
            vec![1.0, 3.0, 0.0, -1.0],
            vec![-2.0, 0.0, 5.0, 2.0],
            vec![0.5, -1.0, 2.0, 1.0],
        ]);
        let (vals, vecs) = m.sorted_eigenpairs();
        let norm = (0..4).map(|i| (0..4).map(|j| m.entry(i, j).powi(2)).sum::<f64>()).sum::<f64>().sqrt();
        for (lambda, x) in vals.iter().zip(&vecs) {
            let mut r = 0.0f64;
            for i in 0..4 {
                let mx: f64 = (0..4).map(|j| m.entry(i, j) * x[j]).sum();
                r += (mx - lambda * x[i]).powi(2);
            }
            assert!(r.sqrt() <= 1e-10 * norm, "residual {} too large", r.sqrt());
        }
        // Trace equals eigenvalue sum.
        let tr = m.trace();
        let sum: f64 = vals.iter().sum();
        assert!((tr - sum).abs() < 1e-9 * tr.abs().max(1.0));
    }

    #[test]
    fn svd_of_diagonal() {
        let mut m = Matrix::zeros(3, 3);
        m[(0, 0)] = 3.0;
        m[(1, 1)] = -1.0;
        m[(2, 2)] = 0.5;
        let svd = svd_square(&m);
        let expected = [0.5, 1.0, 3.0];
        for (v, e) in svd.values.iter().zip(expected) {
            assert!((v - e).abs() < 1e-13);
        }
    }

    #[test]
    fn svd_detects_rank_deficiency() {
        // Rank-1 matrix: two zero singular values.
        let m = Matrix::from_rows(vec![
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 6.0],
            vec![-1.0, -2.0, -3.0],
        ]);
        let svd = svd_square(&m);
        assert!(svd.values[0] < 1e-12);
        assert!(svd.values[1] < 1e-12);
        assert!(svd.values[2] > 1.0);
        // Null vector annihilates the matrix.
        let v = &svd.right_vectors[0];
        let mv = m.matvec(v);
        assert!(norm2(&mv) < 1e-12);
    }

    #[test]
    fn sigma_min_estimate_brackets_truth() {
        let m = Matrix::from_rows(vec![
            vec![2.0, 1.0, 0.0],
            vec![0.5, -3.0, 1.0],
            vec![1.0, 0.2, 0.7],
        ]);
        let svd = svd_square(&m);
        let est = smallest_singular_estimate(&m);
        assert!(est >= svd.values[0] * 0.999, "estimate {est} below sigma_min {}", svd.values[0]);
        assert!(est <= svd.values[0] * 5.0 + 1e-12, "estimate {est} far above sigma_min {}", svd.values[0]);
    }

    #[test]
    fn sigma_min_estimate_zero_for_singular() {
        let m = Matrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0]]);
        let est = smallest_singular_estimate(&m);
        assert!(est < 1e-14);
    }
}
