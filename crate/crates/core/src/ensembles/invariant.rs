//! Unitary-invariant ensembles `∝ exp(-tr W(M)) dM` sampled as `U Λ U*`.
//!
//! The eigenvalues `Λ` are drawn by a single-site random-walk Metropolis
//! chain on the joint density `∏_{i<j} (λ_i - λ_j)² · exp(-Σ w(λ_i))`, and `U`
//! is Haar-distributed on the unitary group. By unitary invariance of the
//! matrix density the pair has the law of the ensemble.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::wigner::complex_gaussian;
use crate::error::{Error, Result};
use crate::linalg::{qr_factor, ComplexMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InvariantFamily {
    /// `exp(-n tr M⁴)`
    Que,
    /// `exp(-tr cosh M)`
    Cosh,
    /// `exp(-2n tr M²)`: the law of the GUE sampler, used to cross-check the chain.
    GueCheck,
}

impl InvariantFamily {
    /// Per-eigenvalue weight `w(λ)` in dimension `n`.
    pub fn weight(self, lambda: f64, n: usize) -> f64 {
        let n = n as f64;
        match self {
            InvariantFamily::Que => n * lambda.powi(4),
            InvariantFamily::Cosh => lambda.cosh(),
            InvariantFamily::GueCheck => 2.0 * n * lambda * lambda,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McmcParams {
    /// Sweeps discarded before the first retained state.
    pub burn_in: usize,
    /// Sweeps between retained states.
    pub thinning: usize,
    /// Proposal standard deviation; `None` means `0.5/√n`.
    pub step_size: Option<f64>,
}

impl Default for McmcParams {
    fn default() -> Self {
        Self {
            burn_in: 10_000,
            thinning: 10,
            step_size: None,
        }
    }
}

impl McmcParams {
    pub fn step(&self, n: usize) -> f64 {
        self.step_size.unwrap_or(0.5 / (n as f64).sqrt())
    }
}

const MIN_ACCEPTANCE: f64 = 0.05;
const MAX_ACCEPTANCE: f64 = 0.95;

/// Metropolis chain over the eigenvalue vector.
#[derive(Clone, Debug)]
pub struct EigenvalueChain {
    family: InvariantFamily,
    lambdas: Vec<f64>,
    step: f64,
    proposed: u64,
    accepted: u64,
}

impl EigenvalueChain {
    /// Starts from `n` points equally spaced on `[-1, 1]`.
    pub fn new(family: InvariantFamily, n: usize, step: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension {
                n,
                reason: "invariant ensembles need n >= 2",
            });
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidParameter(format!("MCMC step {step} must be positive")));
        }
        let lambdas = (0..n)
            .map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64)
            .collect();
        Ok(Self {
            family,
            lambdas,
            step,
            proposed: 0,
            accepted: 0,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            return 0.0;
        }
        self.accepted as f64 / self.proposed as f64
    }

    pub fn reset_counters(&mut self) {
        self.proposed = 0;
        self.accepted = 0;
    }

    /// One proposal per coordinate, in index order.
    pub fn sweep<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let n = self.lambdas.len();
        for k in 0..n {
            let old = self.lambdas[k];
            let dx: f64 = rng.sample(StandardNormal);
            let new = old + self.step * dx;
            // ∏_j |new - λ_j| / |old - λ_j|, one log instead of 2(n-1).
            let mut num = 1.0;
            let mut den = 1.0;
            for (j, &l) in self.lambdas.iter().enumerate() {
                if j != k {
                    num *= new - l;
                    den *= old - l;
                }
            }
            let log_ratio = 2.0 * (num / den).abs().ln() - self.family.weight(new, n)
                + self.family.weight(old, n);
            self.proposed += 1;
            let u: f64 = rng.random();
            if log_ratio >= 0.0 || u < log_ratio.exp() {
                self.lambdas[k] = new;
                self.accepted += 1;
            }
        }
    }

    /// Runs `sweeps` sweeps and verifies the acceptance rate over them.
    pub fn burn_in<R: Rng + ?Sized>(&mut self, sweeps: usize, rng: &mut R) -> Result<()> {
        self.reset_counters();
        for _ in 0..sweeps {
            self.sweep(rng);
        }
        let rate = self.acceptance_rate();
        if sweeps > 0 && !(MIN_ACCEPTANCE < rate && rate < MAX_ACCEPTANCE) {
            return Err(Error::McmcNotConverged { rate });
        }
        Ok(())
    }
}

/// Draws `count` eigenvalue vectors from one chain: burn-in, then one state
/// every `thinning` sweeps.
pub fn sample_invariant_spectra<R: Rng + ?Sized>(
    family: InvariantFamily,
    n: usize,
    params: &McmcParams,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    let mut chain = EigenvalueChain::new(family, n, params.step(n))?;
    chain.burn_in(params.burn_in, rng)?;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        if i > 0 {
            for _ in 0..params.thinning.max(1) {
                chain.sweep(rng);
            }
        }
        out.push(chain.eigenvalues().to_vec());
    }
    Ok(out)
}

/// Haar-distributed unitary: Q from the QR factorization (with `R_ii > 0`)
/// of a complex Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    loop {
        let g = ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
        match qr_factor(&g) {
            Ok(f) => return Ok(f.q),
            // Singular Ginibre draws have probability zero; redraw.
            Err(Error::RankDeficient { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// `U diag(λ) U*` with exact Hermitian symmetry.
pub fn conjugate(u: &ComplexMatrix, lambdas: &[f64]) -> ComplexMatrix {
    let n = lambdas.len();
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &l) in lambdas.iter().enumerate() {
                acc += u[(i, k)] * u[(j, k)].conj() * l;
            }
            if i == j {
                m[(i, i)] = Complex64::new(acc.re, 0.0);
            } else {
                m[(i, j)] = acc;
                m[(j, i)] = acc.conj();
            }
        }
    }
    m
}

/// One Hermitian draw from `family` in dimension `n`.
pub fn sample_invariant<R: Rng + ?Sized>(
    family: InvariantFamily,
    n: usize,
    params: &McmcParams,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    let lambdas = sample_invariant_spectra(family, n, params, 1, rng)?.remove(0);
    let u = haar_unitary(n, rng)?;
    Ok(conjugate(&u, &lambdas))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn haar_factor_is_unitary() {
        let mut rng = RngStream::new(41, 0).rng();
        let u = haar_unitary(12, &mut rng).unwrap();
        let dev = u.adjoint().matmul(&u).sub(&ComplexMatrix::identity(12)).frobenius_norm();
        assert!(dev < 1e-12, "{dev}");
    }

    #[test]
    fn haar_first_entry_phase_is_uniform() {
        // The phase of U_11 is uniform for Haar U; a QR without the
        // positive-diagonal convention concentrates it.
        let mut rng = RngStream::new(42, 0).rng();
        let draws = 4000;
        let mean: Complex64 = (0..draws)
            .map(|_| haar_unitary(3, &mut rng).unwrap()[(0, 0)].phase_unit())
            .sum::<Complex64>()
            / draws as f64;
        assert!(mean.norm() < 4.0 / (draws as f64).sqrt(), "{mean}");
    }

    trait PhaseUnit {
        fn phase_unit(self) -> Complex64;
    }
    impl PhaseUnit for Complex64 {
        fn phase_unit(self) -> Complex64 {
            self / self.norm()
        }
    }

    #[test]
    fn output_is_exactly_hermitian_with_requested_spectrum() {
        let mut rng = RngStream::new(43, 0).rng();
        let params = McmcParams {
            burn_in: 200,
            ..McmcParams::default()
        };
        let m = sample_invariant(InvariantFamily::Que, 6, &params, &mut rng).unwrap();
        assert!(m.is_hermitian());
        // Trace equals the eigenvalue sum.
        let mut rng = RngStream::new(43, 0).rng();
        let lambdas = sample_invariant_spectra(InvariantFamily::Que, 6, &params, 1, &mut rng)
            .unwrap()
            .remove(0);
        let tr: f64 = lambdas.iter().sum();
        assert!((m.trace().re - tr).abs() < 1e-12);
    }

    #[test]
    fn bad_step_triggers_convergence_error() {
        let mut rng = RngStream::new(44, 0).rng();
        let params = McmcParams {
            burn_in: 200,
            thinning: 1,
            step_size: Some(50.0),
        };
        assert!(matches!(
            sample_invariant(InvariantFamily::Que, 10, &params, &mut rng),
            Err(Error::McmcNotConverged { .. })
        ));
        let params = McmcParams {
            step_size: Some(1e-7),
            ..params
        };
        assert!(matches!(
            sample_invariant(InvariantFamily::Que, 10, &params, &mut rng),
            Err(Error::McmcNotConverged { .. })
        ));
    }

    #[test]
    fn default_step_acceptance_is_in_range() {
        for family in [InvariantFamily::Que, InvariantFamily::Cosh, InvariantFamily::GueCheck] {
            for n in [2, 20, 30] {
                let mut rng = RngStream::new(45, n as u64).rng();
                let mut chain = EigenvalueChain::new(family, n, McmcParams::default().step(n)).unwrap();
                chain.burn_in(2000, &mut rng).unwrap();
            }
        }
    }

    #[test]
    fn replay_is_bit_identical() {
        let params = McmcParams {
            burn_in: 300,
            ..McmcParams::default()
        };
        let a = sample_invariant(InvariantFamily::Cosh, 8, &params, &mut RngStream::new(46, 3).rng()).unwrap();
        let b = sample_invariant(InvariantFamily::Cosh, 8, &params, &mut RngStream::new(46, 3).rng()).unwrap();
        assert_eq!(a, b);
    }
}
