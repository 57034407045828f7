//! Small dense complex matrix helpers.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Relative singular-value threshold used for numerical rank.
pub const RANK_RTOL: f64 = 1e-10;

/// Number of singular values above `max(rows, cols) * sigma_max * 1e-10`.
pub fn numerical_rank(m: &CMatrix) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let largest = sv.iter().copied().fold(0.0_f64, f64::max);
    if largest == 0.0 {
        return 0;
    }
    let tol = m.nrows().max(m.ncols()) as f64 * largest * RANK_RTOL;
    sv.iter().filter(|&&s| s > tol).count()
}

/// Concatenates blocks with `rows` rows side by side.
pub fn hstack(rows: usize, blocks: &[&CMatrix]) -> CMatrix {
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        assert_eq!(b.nrows(), rows, "hstack row mismatch");
        out.view_mut((0, at), (rows, b.ncols())).copy_from(b);
        at += b.ncols();
    }
    out
}

/// Real matrix from row-major data.
pub fn real(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_basics() {
        assert_eq!(numerical_rank(&CMatrix::zeros(3, 2)), 0);
        assert_eq!(numerical_rank(&CMatrix::zeros(3, 0)), 0);
        assert_eq!(numerical_rank(&real(2, 2, &[1.0, 2.0, 2.0, 4.0])), 1);
        assert_eq!(
            numerical_rank(&real(2, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, 1.0])),
            2
        );
        // tolerance is scale-aware
        assert_eq!(numerical_rank(&real(2, 2, &[1e-20, 0.0, 0.0, 2e-20])), 2);
        assert_eq!(numerical_rank(&real(2, 2, &[1.0, 0.0, 0.0, 1e-12])), 1);
    }

    #[test]
    fn complex_rank() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        // second column is i times the first
        let m = CMatrix::from_row_slice(2, 2, &[one, i, i, -one]);
        assert_eq!(numerical_rank(&m), 1);
    }

    #[test]
    fn stacking() {
        let a = real(2, 1, &[1.0, 2.0]);
        let b = real(2, 2, &[3.0, 4.0, 5.0, 6.0]);
        let s = hstack(2, &[&a, &b]);
        assert_eq!(s, real(2, 3, &[1.0, 3.0, 4.0, 2.0, 5.0, 6.0]));
        assert_eq!(hstack(3, &[]).shape(), (3, 0));
    }
}
