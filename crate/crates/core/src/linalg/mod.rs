//! Dense real and complex matrix arithmetic.

mod eigen_ref;
mod matrix;
mod norms;
mod qr;
mod scalar;

pub use eigen_ref::{characteristic_polynomial, eval_poly, reference_eigenvalues, MAX_REFERENCE_DIM};
pub use matrix::{axpy, dot, norm2, ComplexMatrix, DenseMatrix, Matrix};
pub use norms::{off_diagonal_norm, spectral_norm_estimate};
pub use qr::{qr_factor, QrFactors, RANK_FLOOR};
pub use scalar::Scalar;

pub type Vector = Vec<f64>;
