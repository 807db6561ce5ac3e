//! Random input families: Wigner-type, positive definite, shifted and
//! unitary-invariant matrices, plus right-hand-side vectors.
//!
//! Every sampler is a pure function of its generator state; pass the
//! generator of an [`RngStream`](crate::rng::RngStream) to get replayable draws.

mod invariant;
mod shifted;
mod wigner;
mod wishart;

use rand::Rng;

pub use invariant::{
    conjugate, haar_unitary, sample_invariant, sample_invariant_spectra, EigenvalueChain,
    InvariantFamily, McmcParams,
};
pub use shifted::{sample_csbe, sample_csge, sample_shifted, ShiftEntries};
pub use wigner::{sample_be, sample_goe, sample_gue};
pub use wishart::{
    critical_width, sample_cloe, sample_cloe_scaled, sample_cpbe, sample_cpbe_scaled, WishartScaling,
};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Matrix, Vector};
use crate::record::Ensemble;

/// Distribution of right-hand-side entries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RhsDistribution {
    /// iid uniform on `[-1, 1]`
    #[default]
    UniformSymmetric,
}

pub fn sample_rhs<R: Rng + ?Sized>(n: usize, dist: RhsDistribution, rng: &mut R) -> Vector {
    match dist {
        RhsDistribution::UniformSymmetric => (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect(),
    }
}

/// A sampled algorithm input.
#[derive(Clone, Debug, PartialEq)]
pub enum MatrixSample {
    Real(Matrix),
    Complex(ComplexMatrix),
}

/// Which matrix family to draw, at what size, with which sampler knobs.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleSpec {
    pub family: Ensemble,
    pub n: usize,
    pub mcmc: Option<McmcParams>,
    pub wishart_scaling: WishartScaling,
    /// Multiplier on `X/√n` for the shifted ensembles.
    pub shift_scale: f64,
}

impl EnsembleSpec {
    pub fn new(family: Ensemble, n: usize) -> Self {
        Self {
            family,
            n,
            mcmc: None,
            wishart_scaling: WishartScaling::Critical,
            shift_scale: 1.0,
        }
    }

    /// Draws one matrix. Dirichlet families are built by [`crate::dirichlet`].
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<MatrixSample> {
        let n = self.n;
        if n < 2 {
            return Err(Error::InvalidDimension {
                n,
                reason: "ensembles need n >= 2",
            });
        }
        let params = self.mcmc.unwrap_or_default();
        Ok(match self.family {
            Ensemble::Goe => MatrixSample::Real(sample_goe(n, rng)),
            Ensemble::Be => MatrixSample::Real(sample_be(n, rng)),
            Ensemble::Gue => MatrixSample::Complex(sample_gue(n, rng)),
            Ensemble::Cloe => MatrixSample::Real(sample_cloe_scaled(n, self.wishart_scaling, rng)?),
            Ensemble::Cpbe => MatrixSample::Real(sample_cpbe_scaled(n, self.wishart_scaling, rng)?),
            Ensemble::Csbe => {
                MatrixSample::Real(sample_shifted(n, ShiftEntries::Bernoulli, self.shift_scale, rng)?)
            }
            Ensemble::Csge => {
                MatrixSample::Real(sample_shifted(n, ShiftEntries::Gaussian, self.shift_scale, rng)?)
            }
            Ensemble::Que => {
                MatrixSample::Complex(sample_invariant(InvariantFamily::Que, n, &params, rng)?)
            }
            Ensemble::Cosh => {
                MatrixSample::Complex(sample_invariant(InvariantFamily::Cosh, n, &params, rng)?)
            }
            other => {
                return Err(Error::InvalidParameter(format!(
                    "{other} is not a matrix ensemble"
                )))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn rhs_moments() {
        let n = 100_000;
        let b = sample_rhs(n, RhsDistribution::UniformSymmetric, &mut RngStream::new(51, 0).rng());
        assert!(b.iter().all(|x| (-1.0..=1.0).contains(x)));
        let mean = b.iter().sum::<f64>() / n as f64;
        let var = b.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (1.0 / 3.0 / n as f64).sqrt();
        assert!(mean.abs() < 4.0 * se, "{mean}");
        assert!((var * 3.0 - 1.0).abs() < 0.03, "{var}");
    }

    #[test]
    fn every_matrix_family_replays_bit_for_bit() {
        let fams = [
            Ensemble::Goe,
            Ensemble::Be,
            Ensemble::Gue,
            Ensemble::Cloe,
            Ensemble::Cpbe,
            Ensemble::Csbe,
            Ensemble::Csge,
            Ensemble::Que,
            Ensemble::Cosh,
        ];
        for fam in fams {
            let mut spec = EnsembleSpec::new(fam, 6);
            spec.mcmc = Some(McmcParams {
                burn_in: 100,
                ..McmcParams::default()
            });
            let s = RngStream::new(52, 9);
            let a = spec.sample(&mut s.rng()).unwrap();
            let b = spec.sample(&mut s.rng()).unwrap();
            assert_eq!(a, b, "{fam}");
            let exact_hermitian = match &a {
                MatrixSample::Real(m) => m.is_symmetric(),
                MatrixSample::Complex(m) => m.is_hermitian(),
            };
            let shifted = matches!(fam, Ensemble::Csbe | Ensemble::Csge);
            assert!(exact_hermitian || shifted, "{fam}");
        }
    }

    #[test]
    fn non_matrix_families_are_rejected() {
        let spec = EnsembleSpec::new(Ensemble::CwO, 6);
        assert!(spec.sample(&mut RngStream::new(53, 0).rng()).is_err());
    }
}
