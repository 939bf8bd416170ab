//! Linear-algebra kernels for the constraint solver: LAPACK-backed dense SVD
//! for rank certification and small corrections, and a hand-rolled sparse
//! CGLS for the large least-squares steps where a dense factorization would
//! dominate the runtime.

use ndarray::{Array1, Array2};
use ndarray_linalg::{JobSvd, SVDDC};

/// Singular values of `a`, descending.
pub fn singular_values(a: &Array2<f64>) -> Array1<f64> {
    let (_, s, _) = a.svddc(JobSvd::None).expect("LAPACK svd failed");
    s
}

/// Number of singular values above `rel_tol * sigma_max`. An all-zero matrix
/// has rank zero.
pub fn rank_from_singular_values(s: &Array1<f64>, rel_tol: f64) -> usize {
    let smax = s.iter().cloned().fold(0.0f64, f64::max);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > rel_tol * smax).count()
}

/// Minimum-norm damped least-squares solution of `a x ~ b` through the full
/// SVD: `x = V diag(s / (s^2 + damping^2)) U^T b`. With `damping = 0` this is
/// the pseudo-inverse; small damping regularizes steps taken near singular
/// configurations without biasing well-conditioned directions.
pub fn svd_least_squares(a: &Array2<f64>, b: &Array1<f64>, damping: f64) -> Array1<f64> {
    let (u, s, vt) = a.svddc(JobSvd::Some).expect("LAPACK svd failed");
    let u = u.expect("svd left vectors");
    let vt = vt.expect("svd right vectors");
    let utb = u.t().dot(b);
    let mut w = Array1::zeros(s.len());
    let smax = s.iter().cloned().fold(0.0f64, f64::max);
    let floor = smax * 1e-14;
    for i in 0..s.len() {
        let si = s[i];
        if si > floor {
            w[i] = si / (si * si + damping * damping) * utb[i];
        }
    }
    vt.t().dot(&w)
}

/// Row-compressed sparse matrix: per-row `(column, value)` entry lists.
#[derive(Debug, Clone)]
pub struct SparseRowMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Vec<(usize, f64)>>,
}

impl SparseRowMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseRowMatrix { rows, cols, entries: vec![Vec::new(); rows] }
    }

    /// Accumulates `value` into `(row, col)`.
    pub fn add(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.rows && col < self.cols);
        let entries = &mut self.entries[row];
        if let Some(e) = entries.iter_mut().find(|e| e.0 == col) {
            e.1 += value;
        } else {
            entries.push((col, value));
        }
    }

    pub fn apply(&self, x: &Array1<f64>) -> Array1<f64> {
        let mut y = Array1::zeros(self.rows);
        for (i, row) in self.entries.iter().enumerate() {
            let mut acc = 0.0;
            for &(j, v) in row {
                acc += v * x[j];
            }
            y[i] = acc;
        }
        y
    }

    pub fn apply_transpose(&self, y: &Array1<f64>) -> Array1<f64> {
        let mut x = Array1::zeros(self.cols);
        for (i, row) in self.entries.iter().enumerate() {
            let yi = y[i];
            if yi != 0.0 {
                for &(j, v) in row {
                    x[j] += v * yi;
                }
            }
        }
        x
    }

    /// Extends the matrix with empty rows; shrinking is not supported.
    pub fn resize_rows(&mut self, rows: usize) {
        assert!(rows >= self.rows);
        self.entries.resize_with(rows, Vec::new);
        self.rows = rows;
    }

    /// Dense copy, for rank audits on matrices small enough to factor.
    pub fn to_dense(&self) -> Array2<f64> {
        let mut a = Array2::zeros((self.rows, self.cols));
        for (i, row) in self.entries.iter().enumerate() {
            for &(j, v) in row {
                a[(i, j)] += v;
            }
        }
        a
    }
}

/// CGLS on the damped normal equations: minimizes
/// `|A x - b|^2 + damping^2 |x|^2` without forming `A^T A`. Returns the
/// iterate when the normal-equation residual falls below
/// `tol * |A^T b|` or after `max_iter` sweeps.
pub fn cgls_damped(
    a: &SparseRowMatrix,
    b: &Array1<f64>,
    damping: f64,
    tol: f64,
    max_iter: usize,
) -> Array1<f64> {
    let mut x = Array1::zeros(a.cols);
    let mut r = b.clone();
    let mut s = a.apply_transpose(&r);
    let s0_norm = s.dot(&s).sqrt();
    if s0_norm == 0.0 {
        return x;
    }
    let mut p = s.clone();
    let mut gamma = s.dot(&s);
    let d2 = damping * damping;
    for _ in 0..max_iter {
        let q = a.apply(&p);
        let denom = q.dot(&q) + d2 * p.dot(&p);
        if denom == 0.0 {
            break;
        }
        let alpha = gamma / denom;
        x.scaled_add(alpha, &p);
        r.scaled_add(-alpha, &q);
        s = a.apply_transpose(&r);
        s.scaled_add(-d2, &x);
        let gamma_new = s.dot(&s);
        if gamma_new.sqrt() <= tol * s0_norm {
            break;
        }
        p = &s + &(&p * (gamma_new / gamma));
        gamma = gamma_new;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn svd_of_rank_one_matrix() {
        let a = array![[1.0, 2.0], [2.0, 4.0]];
        let s = singular_values(&a);
        assert!((s[0] - 5.0).abs() < 1e-12);
        assert!(s[1].abs() < 1e-12);
        assert_eq!(rank_from_singular_values(&s, 1e-8), 1);
    }

    #[test]
    fn least_squares_recovers_exact_solution() {
        let a = array![[2.0, 0.0], [0.0, 3.0], [1.0, 1.0]];
        let x_true = array![0.5, -1.5];
        let b = a.dot(&x_true);
        let x = svd_least_squares(&a, &b, 0.0);
        assert!((&x - &x_true).iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn cgls_matches_dense_least_squares() {
        let mut a = SparseRowMatrix::zeros(4, 3);
        let dense = array![
            [1.0, 0.5, 0.0],
            [0.0, 2.0, -1.0],
            [0.3, 0.0, 1.0],
            [1.0, 1.0, 1.0]
        ];
        for i in 0..4 {
            for j in 0..3 {
                if dense[(i, j)] != 0.0 {
                    a.add(i, j, dense[(i, j)]);
                }
            }
        }
        let b = array![1.0, -2.0, 0.5, 0.0];
        let x_dense = svd_least_squares(&dense, &b, 0.0);
        let x_cgls = cgls_damped(&a, &b, 0.0, 1e-14, 200);
        for j in 0..3 {
            assert!((x_dense[j] - x_cgls[j]).abs() < 1e-10);
        }
    }

    #[test]
    fn sparse_transpose_apply_agrees_with_dense() {
        let mut a = SparseRowMatrix::zeros(3, 2);
        a.add(0, 0, 1.0);
        a.add(1, 1, 2.0);
        a.add(2, 0, -1.0);
        a.add(2, 1, 0.5);
        let y = array![1.0, 2.0, 3.0];
        let x = a.apply_transpose(&y);
        let d = a.to_dense();
        let expected = d.t().dot(&y);
        assert!((&x - &expected).iter().all(|v| v.abs() < 1e-14));
    }
}
