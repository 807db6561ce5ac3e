use serde_json::{json, Value};

use super::config::ExperimentConfig;
use crate::curie_weiss::{cw_run, default_t_max, IntensityKind};
use crate::dirichlet::{dirichlet_trial, BoundaryFamily};
use crate::eigen::{default_jacobi_max_iter, default_qr_max_iter, jacobi_run, qr_deflation_run};
use crate::ensembles::{sample_rhs, EnsembleSpec, MatrixSample, RhsDistribution};
use crate::error::{Error, Result};
use crate::fekete::{ga_run, reference_minimum, Perturbation};
use crate::krylov::{cg_run, default_cg_max_iter, gmres_run};
use crate::linalg::Matrix;
use crate::record::{Algorithm, Ensemble, HaltingRecord};
use crate::rng::RngStream;

/// Default generation cap for the genetic algorithm.
pub const DEFAULT_GA_MAX_ITER: usize = 1_000_000;

/// Per-experiment state computed once before any trial.
#[derive(Clone, Debug)]
pub struct Prepared {
    /// Reference minimum of the energy, genetic runs only.
    pub h_ref: Option<f64>,
}

impl Prepared {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        let h_ref = match cfg.algorithm {
            Algorithm::Genetic => Some(reference_minimum(cfg.n, cfg.potential)?),
            _ => None,
        };
        Ok(Prepared { h_ref })
    }
}

/// One finished trial: its record plus algorithm-specific diagnostics.
#[derive(Clone, Debug)]
pub struct TrialOutput {
    pub record: HaltingRecord,
    pub extra: Value,
}

fn real(sample: MatrixSample) -> Result<Matrix> {
    match sample {
        MatrixSample::Real(m) => Ok(m),
        MatrixSample::Complex(_) => Err(Error::InvalidParameter("expected a real matrix".into())),
    }
}

/// Runs trial `stream` of `ensemble`.
pub fn run_trial(cfg: &ExperimentConfig, prep: &Prepared, ensemble: Ensemble, stream: RngStream) -> Result<TrialOutput> {
    let mut rng = stream.rng();
    let n = cfg.n;
    let eps = cfg.epsilon;
    let spec = || EnsembleSpec {
        family: ensemble,
        n,
        mcmc: Some(cfg.mcmc),
        wishart_scaling: cfg.wishart_scaling,
        shift_scale: cfg.shift_scale,
    };
    let (record, extra) = match cfg.algorithm {
        Algorithm::Jacobi => {
            let m = real(spec().sample(&mut rng)?)?;
            let out = jacobi_run(&m, eps, cfg.max_iter.unwrap_or_else(|| default_jacobi_max_iter(n)))?;
            (out.record, json!({}))
        }
        Algorithm::Qr => {
            let max_iter = cfg.max_iter.unwrap_or_else(|| default_qr_max_iter(n));
            match spec().sample(&mut rng)? {
                MatrixSample::Real(m) => {
                    let out = qr_deflation_run(&m, eps, max_iter)?;
                    (out.record, json!({ "split": out.split }))
                }
                MatrixSample::Complex(m) => {
                    let out = qr_deflation_run(&m, eps, max_iter)?;
                    (out.record, json!({ "split": out.split }))
                }
            }
        }
        Algorithm::Cg => {
            let w = real(spec().sample(&mut rng)?)?;
            let b = sample_rhs(n, RhsDistribution::UniformSymmetric, &mut rng);
            let out = cg_run(&w, &b, eps, cfg.max_iter.unwrap_or_else(|| default_cg_max_iter(n)))?;
            (out.record, json!({ "true_residual": out.trace.true_residual }))
        }
        Algorithm::Gmres => {
            if let Some(family) = BoundaryFamily::from_ensemble(ensemble) {
                (dirichlet_trial(n / 2, family, eps, &mut rng)?, json!({}))
            } else {
                let w = real(spec().sample(&mut rng)?)?;
                let b = sample_rhs(n, RhsDistribution::UniformSymmetric, &mut rng);
                let out = gmres_run(&w, &b, eps, cfg.max_iter.unwrap_or(n))?;
                (
                    out.record,
                    json!({ "breakdown": out.breakdown, "true_residual": out.trace.true_residual }),
                )
            }
        }
        Algorithm::Genetic => {
            let d = Perturbation::for_ensemble(ensemble, n)
                .ok_or_else(|| Error::InvalidParameter(format!("{ensemble} is not a perturbation family")))?;
            let h_ref = prep.h_ref.expect("genetic runs are prepared with a reference minimum");
            let max_iter = cfg.max_iter.unwrap_or(DEFAULT_GA_MAX_ITER);
            let out = ga_run(n, d, cfg.potential, eps, h_ref, max_iter, &mut rng)?;
            let best = *out.best_history.last().expect("history starts at generation 0");
            (out.record, json!({ "best_energy": best }))
        }
        Algorithm::CurieWeiss => {
            let kind = IntensityKind::from_ensemble(ensemble)
                .ok_or_else(|| Error::InvalidParameter(format!("{ensemble} is not an intensity family")))?;
            let t_max = cfg.t_max.unwrap_or_else(|| default_t_max(n));
            (cw_run(n, kind, cfg.beta, eps, t_max, &mut rng)?, json!({}))
        }
    };
    Ok(TrialOutput {
        record: record.tagged(ensemble, stream),
        extra,
    })
}
