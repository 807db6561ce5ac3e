use super::SolveTrace;
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm2, Matrix};
use crate::record::{Algorithm, HaltingRecord};

/// Default CG iteration cap, `20 n`.
pub fn default_cg_max_iter(n: usize) -> usize {
    20 * n
}

#[derive(Clone, Debug)]
pub struct CgOutcome {
    pub trace: SolveTrace,
    pub record: HaltingRecord,
}

/// Conjugate gradients from `x₀ = 0`, halted at the first `k` with `‖r_k‖₂ < ε`
/// where `r_k` is the recursively updated residual.
pub fn cg_run(w: &Matrix, b: &[f64], epsilon: f64, max_iter: usize) -> Result<CgOutcome> {
    cg_run_observed(w, b, epsilon, max_iter, |_, _| {})
}

/// As [`cg_run`], calling `observe(k, p_k)` with every search direction used.
pub fn cg_run_observed(
    w: &Matrix,
    b: &[f64],
    epsilon: f64,
    max_iter: usize,
    mut observe: impl FnMut(usize, &[f64]),
) -> Result<CgOutcome> {
    let n = b.len();
    if !w.is_square() || w.nrows() != n {
        return Err(Error::InvalidParameter(format!(
            "CG needs a square {n}x{n} matrix, got {}x{}",
            w.nrows(),
            w.ncols()
        )));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} must be positive")));
    }
    if b.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("right-hand side has non-finite entries".into()));
    }

    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rs = dot(&r, &r);
    let mut residual_norms = vec![rs.sqrt()];
    let mut k = 0;
    let mut capped = false;

    while residual_norms[k] >= epsilon {
        if k == max_iter {
            capped = true;
            break;
        }
        observe(k, &p);
        let wp = w.matvec(&p);
        let curvature = dot(&p, &wp);
        if !(curvature > 0.0) {
            return Err(Error::BreakdownNonSpd {
                curvature,
                iteration: k,
            });
        }
        let alpha = rs / curvature;
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &wp, &mut r);
        let rs_new = dot(&r, &r);
        k += 1;
        residual_norms.push(rs_new.sqrt());
        let beta = rs_new / rs;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
        rs = rs_new;
    }

    let mut true_r = w.matvec(&x);
    for (t, bi) in true_r.iter_mut().zip(b) {
        *t = bi - *t;
    }
    let trace = SolveTrace {
        residual_norms,
        halting_time: k,
        solution: x,
        true_residual: norm2(&true_r),
    };
    Ok(CgOutcome {
        record: HaltingRecord::new(Algorithm::Cg, n, epsilon, k as f64, capped),
        trace,
    })
}
