//! Minimal dense symmetric linear algebra: Cholesky factorization, solves
//! and log-determinants. All matrices are row-major `n × n` slices. The
//! dimensions in this crate stay small (feature counts), so no blocking or
//! pivoting is needed beyond an optional ridge added by callers.

use alloc::vec;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float as _;

/// Lower-triangular Cholesky factor of a symmetric positive-definite
/// matrix, or `None` if the matrix is not (numerically) positive-definite.
pub fn cholesky(a: &[f64], n: usize) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= 0.0 || !sum.is_finite() {
                    return None;
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    Some(l)
}

/// Solves `L Lᵀ x = b` given the Cholesky factor `L`.
pub fn cholesky_solve(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(b.len(), n);
    // forward: L y = b
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i * n + k] * y[k];
        }
        y[i] = sum / l[i * n + i];
    }
    // backward: Lᵀ x = y
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = y[i];
        for k in (i + 1)..n {
            sum -= l[k * n + i] * x[k];
        }
        x[i] = sum / l[i * n + i];
    }
    x
}

/// `ln det(A)` from the Cholesky factor of `A`.
pub fn cholesky_logdet(l: &[f64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        acc += l[i * n + i].ln();
    }
    2.0 * acc
}

/// Solves `(A + ridge·I) x = b` for symmetric positive-semidefinite `A`.
pub fn solve_spd_ridge(a: &[f64], n: usize, b: &[f64], ridge: f64) -> Option<Vec<f64>> {
    let mut ar = a.to_vec();
    for i in 0..n {
        ar[i * n + i] += ridge;
    }
    let l = cholesky(&ar, n)?;
    Some(cholesky_solve(&l, n, b))
}
