//! Full (unrestarted) GMRES: Arnoldi with modified Gram–Schmidt, the
//! Hessenberg least-squares problem reduced by plane rotations.

use super::SolveTrace;
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm2, Matrix};
use crate::record::{Algorithm, HaltingRecord};

#[derive(Clone, Debug)]
pub struct GmresOutcome {
    pub trace: SolveTrace,
    pub record: HaltingRecord,
    /// The Arnoldi process found an invariant subspace.
    pub breakdown: bool,
}

/// GMRES from `x₀ = 0`, halted at the first `k` with `‖r_k‖₂ < ε`.
/// `max_iter` is clamped to `n`.
pub fn gmres_run(w: &Matrix, b: &[f64], epsilon: f64, max_iter: usize) -> Result<GmresOutcome> {
    let n = b.len();
    if !w.is_square() || w.nrows() != n {
        return Err(Error::InvalidParameter(format!(
            "GMRES needs a square {n}x{n} matrix, got {}x{}",
            w.nrows(),
            w.ncols()
        )));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} must be positive")));
    }
    let beta = norm2(b);
    if beta == 0.0 {
        return Err(Error::ZeroRhs);
    }
    let max_iter = max_iter.min(n);

    let mut basis: Vec<Vec<f64>> = vec![b.iter().map(|x| x / beta).collect()];
    // Column k of the rotated Hessenberg matrix, i.e. the upper triangle R.
    let mut r_cols: Vec<Vec<f64>> = Vec::new();
    let mut rotations: Vec<(f64, f64)> = Vec::new();
    let mut g = vec![beta];
    let mut residual_norms = vec![beta];
    let mut breakdown = false;
    let mut k = 0;

    while residual_norms[k] >= epsilon && !breakdown {
        if k == max_iter {
            break;
        }
        let mut v = w.matvec(&basis[k]);
        let mut h = Vec::with_capacity(k + 2);
        for q in &basis {
            let hik = dot(&v, q);
            axpy(-hik, q, &mut v);
            h.push(hik);
        }
        let h_next = norm2(&v);
        h.push(h_next);

        for (i, &(c, s)) in rotations.iter().enumerate() {
            let (a, bb) = (h[i], h[i + 1]);
            h[i] = c * a + s * bb;
            h[i + 1] = -s * a + c * bb;
        }
        let rho = h[k].hypot(h[k + 1]);
        let (c, s) = if rho == 0.0 {
            (1.0, 0.0)
        } else {
            (h[k] / rho, (h[k + 1] / rho).clamp(-1.0, 1.0))
        };
        h[k] = rho;
        h.truncate(k + 1);
        rotations.push((c, s));
        r_cols.push(h);
        let gk = g[k];
        g[k] = c * gk;
        g.push(-s * gk);
        k += 1;
        residual_norms.push(g[k].abs());

        if h_next <= f64::EPSILON * beta {
            breakdown = true;
        } else {
            basis.push(v.iter().map(|x| x / h_next).collect());
        }
    }

    let converged = residual_norms[k] < epsilon || breakdown;
    let solution = solve_upper(&r_cols, &g[..k], &basis, n);
    let mut true_r = w.matvec(&solution);
    for (t, bi) in true_r.iter_mut().zip(b) {
        *t = bi - *t;
    }
    Ok(GmresOutcome {
        record: HaltingRecord::new(Algorithm::Gmres, n, epsilon, k as f64, !converged),
        trace: SolveTrace {
            residual_norms,
            halting_time: k,
            solution,
            true_residual: norm2(&true_r),
        },
        breakdown,
    })
}

/// `x = V y` with `R y = g` solved by back substitution.
fn solve_upper(r_cols: &[Vec<f64>], g: &[f64], basis: &[Vec<f64>], n: usize) -> Vec<f64> {
    let k = g.len();
    let mut y = g.to_vec();
    for i in (0..k).rev() {
        let mut acc = y[i];
        for (j, yj) in y.iter().enumerate().skip(i + 1) {
            acc -= r_cols[j][i] * yj;
        }
        let d = r_cols[i][i];
        y[i] = if d == 0.0 { 0.0 } else { acc / d };
    }
    let mut x = vec![0.0; n];
    for (yi, q) in y.iter().zip(basis) {
        axpy(*yi, q, &mut x);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_csge, sample_rhs, sample_shifted, RhsDistribution, ShiftEntries};
    use crate::rng::RngStream;

    #[test]
    fn identity_converges_in_one_step() {
        let b = [1.0, -2.0, 0.5];
        let out = gmres_run(&Matrix::identity(3), &b, 1e-10, 3).unwrap();
        assert_eq!(out.trace.halting_time, 1);
        assert_eq!(*out.trace.residual_norms.last().unwrap(), 0.0);
        assert!(!out.record.capped);
        for (x, bi) in out.trace.solution.iter().zip(&b) {
            assert!((x - bi).abs() < 1e-15);
        }
    }

    #[test]
    fn jordan_block_example() {
        let w = Matrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]);
        let out = gmres_run(&w, &[0.0, 1.0], 1e-10, 2).unwrap();
        assert!((out.trace.residual_norms[1] - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(out.trace.halting_time, 2);
        assert!((out.trace.solution[0] + 1.0).abs() < 1e-12);
        assert!((out.trace.solution[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_rhs_is_an_error() {
        assert!(matches!(
            gmres_run(&Matrix::identity(2), &[0.0, 0.0], 1e-8, 2),
            Err(Error::ZeroRhs)
        ));
    }

    #[test]
    fn residuals_are_monotone_and_halt_within_n() {
        let mut rng = RngStream::new(91, 0).rng();
        for _ in 0..20 {
            let w = sample_csge(60, &mut rng).unwrap();
            let b = sample_rhs(60, RhsDistribution::UniformSymmetric, &mut rng);
            let out = gmres_run(&w, &b, 1e-8, 1000).unwrap();
            assert!(out.trace.halting_time <= 60);
            for pair in out.trace.residual_norms.windows(2) {
                assert!(pair[1] <= pair[0]);
            }
            if !out.record.capped {
                assert!(out.trace.true_residual < 1e-7);
            }
        }
    }

    #[test]
    fn near_identity_halting_is_nearly_constant() {
        let mut rng = RngStream::new(92, 0).rng();
        let times: Vec<usize> = (0..40)
            .map(|_| {
                let w = sample_shifted(100, ShiftEntries::Gaussian, 1e-3, &mut rng).unwrap();
                let b = sample_rhs(100, RhsDistribution::UniformSymmetric, &mut rng);
                gmres_run(&w, &b, 1e-8, 100).unwrap().trace.halting_time
            })
            .collect();
        let min = *times.iter().min().unwrap();
        let max = *times.iter().max().unwrap();
        assert!(max - min <= 1, "{times:?}");
        assert!(max <= 5);
    }

    #[test]
    fn cap_is_flagged() {
        let mut rng = RngStream::new(93, 0).rng();
        let w = sample_csge(30, &mut rng).unwrap();
        let b = sample_rhs(30, RhsDistribution::UniformSymmetric, &mut rng);
        let out = gmres_run(&w, &b, 1e-12, 3).unwrap();
        assert!(out.record.capped);
        assert_eq!(out.trace.halting_time, 3);
    }
}
