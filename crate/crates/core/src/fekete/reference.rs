//! Deterministic discrete minimum of `H` over `ℝᴺ`, the halting reference.

use rand::Rng;

use super::energy::{energy_gradient, energy_h, energy_hessian, Potential};
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Gradient-norm tolerance for a converged minimizer.
pub const GRADIENT_TOLERANCE: f64 = 1e-12;
/// Number of starts for potentials with more than one well.
pub const MULTISTARTS: usize = 50;
const MAX_STEPS: usize = 10_000;
const MULTISTART_SEED: u64 = 0x5eed_fe6e;

#[derive(Clone, Debug, PartialEq)]
pub struct Minimizer {
    pub points: Vec<f64>,
    pub energy: f64,
    pub gradient_norm: f64,
}

/// Cholesky solve of `A x = b` for symmetric `A`; `None` unless positive definite.
fn cholesky_solve(a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = a[i * n + j] - (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum::<f64>();
            if i == j {
                if !(s > 0.0) {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        y[i] = (b[i] - (0..i).map(|k| l[i * n + k] * y[k]).sum::<f64>()) / l[i * n + i];
    }
    for i in (0..n).rev() {
        y[i] = (y[i] - (i + 1..n).map(|k| l[k * n + i] * y[k]).sum::<f64>()) / l[i * n + i];
    }
    Some(y)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Levenberg–Marquardt damped Newton descent from `start`.
pub fn minimize_from(start: &[f64], v: Potential) -> Result<Minimizer> {
    let n = start.len();
    if n == 0 {
        return Err(Error::InvalidDimension {
            n,
            reason: "the energy needs at least one point",
        });
    }
    let mut p = start.to_vec();
    let mut energy = energy_h(&p, v);
    if !energy.is_finite() {
        return Err(Error::InvalidParameter("start has coincident points".into()));
    }
    let mut mu = 1e-3;
    let mut g = energy_gradient(&p, v);
    for _ in 0..MAX_STEPS {
        let gnorm = norm(&g);
        if gnorm < GRADIENT_TOLERANCE {
            return Ok(Minimizer {
                points: p,
                energy,
                gradient_norm: gnorm,
            });
        }
        let mut h = energy_hessian(&p, v);
        for i in 0..n {
            h[i * n + i] += mu;
        }
        let Some(step) = cholesky_solve(&h, &g) else {
            mu *= 4.0;
            continue;
        };
        let trial: Vec<f64> = p.iter().zip(&step).map(|(x, s)| x - s).collect();
        let trial_energy = energy_h(&trial, v);
        let trial_g = energy_gradient(&trial, v);
        // Near the minimum energy differences drop below rounding, so a
        // gradient decrease also counts as progress.
        if trial_energy < energy || (trial_energy <= energy + 1e-14 * energy.abs().max(1.0) && norm(&trial_g) < gnorm)
        {
            p = trial;
            energy = trial_energy;
            g = trial_g;
            mu = (mu / 3.0).max(1e-15);
        } else {
            mu *= 4.0;
            if mu > 1e12 {
                break;
            }
        }
    }
    Err(Error::NonConvergence {
        gradient_norm: norm(&g),
    })
}

/// Equally spaced start on `[-a, a]`.
fn spread_start(n: usize, half_width: f64) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    (0..n)
        .map(|i| -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64)
        .collect()
}

/// `inf_{P ∈ ℝᴺ} H(P)`. Convex for `x²`, where one start suffices; the
/// double well takes the best of [`MULTISTARTS`] deterministic starts.
pub fn reference_minimum(n: usize, v: Potential) -> Result<f64> {
    Ok(reference_minimizer(n, v)?.energy)
}

pub fn reference_minimizer(n: usize, v: Potential) -> Result<Minimizer> {
    match v {
        Potential::Quadratic => minimize_from(&spread_start(n, 1.5), v),
        Potential::DoubleWell => {
            let mut rng = RngStream::new(MULTISTART_SEED, n as u64).rng();
            let mut best: Option<Minimizer> = None;
            let mut last_err = None;
            for s in 0..MULTISTARTS {
                let start = if s == 0 {
                    spread_start(n, 2.0)
                } else {
                    (0..n).map(|_| rng.random_range(-2.5..2.5)).collect()
                };
                match minimize_from(&start, v) {
                    Ok(m) if best.as_ref().is_none_or(|b| m.energy < b.energy) => best = Some(m),
                    Ok(_) => {}
                    Err(e) => last_err = Some(e),
                }
            }
            best.ok_or_else(|| last_err.unwrap_or(Error::NonConvergence { gradient_norm: f64::NAN }))
        }
    }
}
