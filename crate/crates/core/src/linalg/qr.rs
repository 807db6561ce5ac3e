//! Householder QR with the positive-diagonal convention `R_ii > 0`.

use super::matrix::DenseMatrix;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Relative floor on `|R_ii|` below which a matrix is treated as rank deficient.
pub const RANK_FLOOR: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct QrFactors<T> {
    /// Orthogonal (real) or unitary (complex) factor.
    pub q: DenseMatrix<T>,
    /// Upper triangular with strictly positive real diagonal.
    pub r: DenseMatrix<T>,
}

/// Factors a square matrix as `M = QR`.
pub fn qr_factor<T: Scalar>(m: &DenseMatrix<T>) -> Result<QrFactors<T>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let n = m.nrows();
    let scale = m.frobenius_norm();
    let mut a = m.clone();
    let mut reflectors: Vec<Option<Vec<T>>> = Vec::with_capacity(n);

    for k in 0..n {
        let norm = (k..n).map(|i| a[(i, k)].abs2()).sum::<f64>().sqrt();
        if norm == 0.0 {
            reflectors.push(None);
            continue;
        }
        let alpha = -a[(k, k)].phase().scale(norm);
        let mut v: Vec<T> = (k..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let v_norm2: f64 = v.iter().map(|x| x.abs2()).sum();
        if v_norm2 == 0.0 {
            reflectors.push(None);
            continue;
        }
        let tau = 2.0 / v_norm2;
        apply_reflector(&mut a, &v, tau, k, k);
        // Exact zeros below the pivot.
        a[(k, k)] = alpha;
        for i in k + 1..n {
            a[(i, k)] = T::zero();
        }
        reflectors.push(Some(v));
    }

    let mut q = DenseMatrix::<T>::identity(n);
    for (k, v) in reflectors.iter().enumerate().rev() {
        if let Some(v) = v {
            let v_norm2: f64 = v.iter().map(|x| x.abs2()).sum();
            apply_reflector(&mut q, v, 2.0 / v_norm2, k, k);
        }
    }

    let mut r = a;
    for i in 0..n {
        let d = r[(i, i)].phase();
        if d != T::one() {
            let dc = d.conj();
            for j in i..n {
                r[(i, j)] *= dc;
            }
            for row in 0..n {
                q[(row, i)] *= d;
            }
        }
        r[(i, i)] = T::from_real(r[(i, i)].abs());
    }

    let floor = RANK_FLOOR * scale;
    if scale == 0.0 || (0..n).any(|i| r[(i, i)].abs() < floor) {
        let min = (0..n).map(|i| r[(i, i)].abs()).fold(f64::INFINITY, f64::min);
        return Err(Error::RankDeficient {
            min_pivot: min,
            floor,
        });
    }
    Ok(QrFactors { q, r })
}

/// Applies `I - tau v v*` to rows `row0..` of columns `col0..` of `a`.
fn apply_reflector<T: Scalar>(a: &mut DenseMatrix<T>, v: &[T], tau: f64, row0: usize, col0: usize) {
    let n_cols = a.ncols();
    let mut s = vec![T::zero(); n_cols - col0];
    for (vi, i) in v.iter().zip(row0..) {
        let vc = vi.conj();
        for (sj, &aij) in s.iter_mut().zip(&a.row(i)[col0..]) {
            *sj += vc * aij;
        }
    }
    for (vi, i) in v.iter().zip(row0..) {
        let f = vi.scale(tau);
        for (aij, &sj) in a.row_mut(i)[col0..].iter_mut().zip(&s) {
            *aij -= f * sj;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ComplexMatrix, Matrix};
    use num_complex::Complex64;

    fn max_dev_from_identity<T: Scalar>(q: &DenseMatrix<T>) -> f64 {
        let qq = q.adjoint().matmul(q);
        let n = q.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((qq[(i, j)] - target).abs());
            }
        }
        worst
    }

    #[test]
    fn identity_factors_trivially() {
        let f = qr_factor(&Matrix::identity(3)).unwrap();
        assert_eq!(f.q, Matrix::identity(3));
        assert_eq!(f.r, Matrix::identity(3));
    }

    #[test]
    fn swap_matrix() {
        let m = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        let f = qr_factor(&m).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((f.q[(i, j)] - m[(i, j)]).abs() < 1e-15);
                let id = if i == j { 1.0 } else { 0.0 };
                assert!((f.r[(i, j)] - id).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn complex_factorization_reconstructs() {
        let m = ComplexMatrix::from_fn(4, 4, |i, j| {
            Complex64::new((i * 3 + j) as f64 * 0.37 - 1.0, ((i + 2 * j) % 5) as f64 - 2.0)
        });
        let f = qr_factor(&m).unwrap();
        let err = f.q.matmul(&f.r).sub(&m).frobenius_norm() / m.frobenius_norm();
        assert!(err < 1e-14, "{err}");
        assert!(max_dev_from_identity(&f.q) < 1e-14);
        for i in 0..4 {
            assert!(f.r[(i, i)].re > 0.0 && f.r[(i, i)].im == 0.0);
            for j in 0..i {
                assert_eq!(f.r[(i, j)], Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        assert!(matches!(qr_factor(&m), Err(Error::RankDeficient { .. })));
        assert!(matches!(
            qr_factor(&Matrix::zeros(2, 2)),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn rectangular_is_rejected() {
        assert!(matches!(
            qr_factor(&Matrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }
}
