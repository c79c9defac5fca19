//! Double-precision fallback used only for non-certified checks.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::Matrix;

/// Singular values below `REL_TOL · σ_max` count as zero.
pub const REL_TOL: f64 = 1e-9;

/// Numerical rank by singular values with the relative tolerance
/// [`REL_TOL`].
pub fn numeric_rank(m: &Matrix<Complex64>) -> usize {
    numeric_rank_tol(m, REL_TOL)
}

pub fn numeric_rank_tol(m: &Matrix<Complex64>, rel_tol: f64) -> usize {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return 0;
    }
    let dm = DMatrix::from_fn(r, c, |i, j| m[(i, j)]);
    let sv = dm.singular_values();
    let max = sv.iter().cloned().fold(0.0f64, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}
