//! Unshifted QR iteration `M ← RQ`, halted at the first deflation.

use crate::error::{Error, Result};
use crate::linalg::{qr_factor, DenseMatrix, Scalar};
use crate::record::{Algorithm, HaltingRecord};

/// Default iteration cap, `10⁴ n`.
pub fn default_qr_max_iter(n: usize) -> usize {
    10_000 * n
}

/// Frobenius norm of the upper-right block `M[0..k][k..n]`.
pub fn off_block_norm<T: Scalar>(m: &DenseMatrix<T>, k: usize) -> f64 {
    let n = m.nrows();
    (0..k)
        .map(|i| m.row(i)[k..n].iter().map(|x| x.abs2()).sum::<f64>())
        .sum::<f64>()
        .sqrt()
}

/// Smallest split `k ∈ 1..n` whose off-diagonal block has norm `<= epsilon`.
pub fn qr_deflation_check<T: Scalar>(m: &DenseMatrix<T>, epsilon: f64) -> Option<usize> {
    (1..m.nrows()).find(|&k| off_block_norm(m, k) <= epsilon)
}

#[derive(Clone, Debug)]
pub struct QrOutcome<T> {
    pub record: HaltingRecord,
    /// Iterate at the halting (or capping) step.
    pub matrix: DenseMatrix<T>,
    /// Deflation split, `None` when capped.
    pub split: Option<usize>,
}

/// Iterates `M = QR ↦ RQ` until [`qr_deflation_check`] succeeds. The
/// halting time is the number of iterations performed before the check
/// first passed (zero if it passes on the input).
pub fn qr_deflation_run<T: Scalar>(
    m: &DenseMatrix<T>,
    epsilon: f64,
    max_iter: usize,
) -> Result<QrOutcome<T>> {
    qr_deflation_run_observed(m, epsilon, max_iter, |_, _| {})
}

/// As [`qr_deflation_run`], calling `observe(t, M_t)` on every iterate checked.
pub fn qr_deflation_run_observed<T: Scalar>(
    m: &DenseMatrix<T>,
    epsilon: f64,
    max_iter: usize,
    mut observe: impl FnMut(usize, &DenseMatrix<T>),
) -> Result<QrOutcome<T>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} must be positive")));
    }
    let n = m.nrows();
    let mut current = m.clone();
    let mut t = 0usize;
    loop {
        observe(t, &current);
        if let Some(k) = qr_deflation_check(&current, epsilon) {
            return Ok(QrOutcome {
                record: HaltingRecord::new(Algorithm::Qr, n, epsilon, t as f64, false),
                matrix: current,
                split: Some(k),
            });
        }
        if t == max_iter {
            return Ok(QrOutcome {
                record: HaltingRecord::new(Algorithm::Qr, n, epsilon, t as f64, true),
                matrix: current,
                split: None,
            });
        }
        let f = qr_factor(&current)?;
        current = f.r.matmul(&f.q);
        t += 1;
    }
}
