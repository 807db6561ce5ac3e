//! Iterative eigensolvers instrumented with halting times.

mod jacobi;
mod qr_algorithm;

pub use jacobi::{default_jacobi_max_iter, givens_angle, jacobi_run, JacobiIteration, JacobiOutcome, Rotation};
pub use qr_algorithm::{
    default_qr_max_iter, off_block_norm, qr_deflation_check, qr_deflation_run, qr_deflation_run_observed,
    QrOutcome,
};
