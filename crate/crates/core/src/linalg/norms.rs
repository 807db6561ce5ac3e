use super::matrix::{DenseMatrix, Matrix};
use super::scalar::Scalar;

/// `sqrt(sum_{i != j} |M_ij|^2)` for a square matrix.
pub fn off_diagonal_norm<T: Scalar>(m: &DenseMatrix<T>) -> f64 {
    assert!(m.is_square(), "off_diagonal_norm needs a square matrix");
    let n = m.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for (j, x) in m.row(i).iter().enumerate() {
            if i != j {
                acc += x.abs2();
            }
        }
    }
    acc.sqrt()
}

/// Largest singular value estimate by power iteration on `XᵀX`, started from
/// the normalized all-ones vector.
pub fn spectral_norm_estimate(x: &Matrix, steps: usize) -> f64 {
    let n = x.ncols();
    if n == 0 {
        return 0.0;
    }
    let xt = x.transpose();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut sigma2 = 0.0;
    for _ in 0..steps {
        let w = xt.matvec(&x.matvec(&v));
        let norm = super::norm2(&w);
        if norm == 0.0 {
            return 0.0;
        }
        sigma2 = super::dot(&v, &w);
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / norm;
        }
    }
    sigma2.max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn diagonal_matrix_has_zero_off_norm() {
        assert_eq!(off_diagonal_norm(&Matrix::from_diagonal(&[1.0, -2.0, 5.0])), 0.0);
    }

    #[test]
    fn small_examples() {
        let swap = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        assert!((off_diagonal_norm(&swap) - 2f64.sqrt()).abs() < 1e-15);
        let m = Matrix::from_rows(&[[1.0, 3.0], [4.0, 1.0]]);
        assert_eq!(off_diagonal_norm(&m), 5.0);
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let m = Matrix::from_diagonal(&[1.0, -3.0, 2.0]);
        assert!((spectral_norm_estimate(&m, 200) - 3.0).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn off_norm_ignores_diagonal(
            entries in prop::collection::vec(-10.0f64..10.0, 16),
            diag in prop::collection::vec(-100.0f64..100.0, 4),
        ) {
            let m = Matrix::from_fn(4, 4, |i, j| entries[i * 4 + j]);
            let shifted = m.add(&Matrix::from_diagonal(&diag));
            prop_assert_eq!(off_diagonal_norm(&m), off_diagonal_norm(&shifted));
        }
    }
}
