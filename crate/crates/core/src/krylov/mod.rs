//! Krylov solvers with per-iteration residual histories.

mod cg;
mod gmres;

pub use cg::{cg_run, cg_run_observed, default_cg_max_iter, CgOutcome};
pub use gmres::{gmres_run, GmresOutcome};

use crate::linalg::Vector;

#[derive(Clone, Debug, PartialEq)]
pub struct SolveTrace {
    /// `‖r_k‖₂` for `k = 0..=halting_time`, starting from `‖b‖₂`.
    pub residual_norms: Vec<f64>,
    pub halting_time: usize,
    pub solution: Vector,
    /// `‖b - W x‖₂` recomputed from the returned solution.
    pub true_residual: f64,
}
