//! A small measurement matrix with a hand-picked kernel.
//!
//! The 2x4 matrix below has kernel spanned by `u = (-1, -1, 0, 3)` and
//! `v = (1, -3, 0.5, 1.5)`. That kernel is engineered so the binary
//! property holds on `K = {0, 1}` while the uniform positive property
//! fails there: the indicator `1_K` is recovered uniquely by the unit-box
//! program, yet the shrunken signal `0.5 * 1_K` is not.

use nalgebra::{DMatrix, DVector};

/// Rows orthogonal to the kernel above (integer entries, exact).
pub fn counterexample_2x4() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 4, &[-1.0, 1.0, 8.0, 0.0, 15.0, 9.0, 0.0, 8.0])
}

/// The two kernel generators.
pub fn counterexample_kernel() -> (DVector<f64>, DVector<f64>) {
    (
        DVector::from_column_slice(&[-1.0, -1.0, 0.0, 3.0]),
        DVector::from_column_slice(&[1.0, -3.0, 0.5, 1.5]),
    )
}

/// The same matrix with orthonormalized rows (identical kernel).
pub fn counterexample_2x4_orthonormal() -> DMatrix<f64> {
    let a = counterexample_2x4();
    let r0 = a.row(0).transpose();
    let r1 = a.row(1).transpose();
    let e0 = &r0 / r0.norm();
    let mut e1 = &r1 - &e0 * e0.dot(&r1);
    e1 /= e1.norm();
    DMatrix::from_rows(&[e0.transpose(), e1.transpose()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_annihilate_the_kernel() {
        let a = counterexample_2x4();
        let (u, v) = counterexample_kernel();
        assert!((&a * u).norm() < 1e-12);
        assert!((&a * v).norm() < 1e-12);
    }

    #[test]
    fn orthonormal_variant_shares_the_kernel() {
        let q = counterexample_2x4_orthonormal();
        let (u, v) = counterexample_kernel();
        assert!((&q * u).norm() < 1e-12);
        assert!((&q * v).norm() < 1e-12);
        let gram = &q * q.transpose();
        assert!((gram - DMatrix::identity(2, 2)).norm() < 1e-12);
    }
}
