//! One-sided Jacobi SVD for the small dense matrices used here.
//!
//! nalgebra 0.33's bidiagonal SVD returns factorizations with `O(0.1)`
//! reconstruction error on some rank-deficient tall inputs (for instance
//! stacked `Q - I` blocks of a reflection group), so the registration and
//! fixed-subspace code uses this instead.

use nalgebra::{DMatrix, DVector};

const MAX_SWEEPS: usize = 80;

/// `A = U · diag(σ) · Vᵀ` for an `m × n` matrix with `m >= n`.
///
/// `U` is `m × n` with orthonormal columns (completed arbitrarily where
/// `σ = 0`), `V` is `n × n` orthogonal, and `σ` is sorted in descending order.
pub(crate) struct Svd {
    pub u: DMatrix<f64>,
    pub sigma: DVector<f64>,
    pub v: DMatrix<f64>,
}

pub(crate) fn svd(a: &DMatrix<f64>) -> Svd {
    let (m, n) = a.shape();
    assert!(m >= n, "svd expects a tall or square matrix");
    let mut w = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dot(&w.column(q));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: alloc::vec::Vec<usize> = (0..n).collect();
    let norms: alloc::vec::Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));

    let largest = norms.iter().copied().fold(0.0, f64::max);
    let mut u = DMatrix::<f64>::zeros(m, n);
    let mut sigma = DVector::<f64>::zeros(n);
    let mut v_sorted = DMatrix::<f64>::zeros(n, n);
    for (k, &j) in order.iter().enumerate() {
        sigma[k] = norms[j];
        v_sorted.set_column(k, &v.column(j));
        let candidate =
            (largest > 0.0 && norms[j] > 1e-12 * largest).then(|| w.column(j) / norms[j]);
        let col = orthonormal_against(&u, k, candidate);
        u.set_column(k, &col);
    }
    Svd {
        u,
        sigma,
        v: v_sorted,
    }
}

fn rotate(mat: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    for i in 0..mat.nrows() {
        let xp = mat[(i, p)];
        let xq = mat[(i, q)];
        mat[(i, p)] = c * xp - s * xq;
        mat[(i, q)] = s * xp + c * xq;
    }
}

/// Unit vector orthogonal to the first `k` columns of `basis`, preferring
/// `candidate` and falling back to coordinate axes.
fn orthonormal_against(
    basis: &DMatrix<f64>,
    k: usize,
    candidate: Option<DVector<f64>>,
) -> DVector<f64> {
    let m = basis.nrows();
    let project = |mut x: DVector<f64>| {
        // twice for stability
        for _ in 0..2 {
            for j in 0..k {
                let d = basis.column(j).dot(&x);
                x -= basis.column(j) * d;
            }
        }
        x
    };
    if let Some(c) = candidate {
        let x = project(c);
        let norm = x.norm();
        if norm > 0.5 {
            return x / norm;
        }
    }
    let mut best = DVector::<f64>::zeros(m);
    let mut best_norm = 0.0;
    for axis in 0..m {
        let x = project(DVector::from_fn(
            m,
            |i, _| if i == axis { 1.0 } else { 0.0 },
        ));
        let norm = x.norm();
        if norm > best_norm {
            best_norm = norm;
            best = x;
        }
    }
    best / best_norm
}

pub(crate) fn singular_values(a: &DMatrix<f64>) -> DVector<f64> {
    if a.nrows() >= a.ncols() {
        svd(a).sigma
    } else {
        svd(&a.transpose()).sigma
    }
}
