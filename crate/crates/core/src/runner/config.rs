use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::curie_weiss::{DEFAULT_BETA, DEFAULT_EPSILON};
use crate::ensembles::{McmcParams, WishartScaling};
use crate::error::{Error, Result};
use crate::fekete::Potential;
use crate::record::{Algorithm, Ensemble};

/// One experiment: every listed ensemble is run `trials` times through `algorithm`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub ensembles: Vec<Ensemble>,
    /// Matrix dimension, or the particle/spin count `N`. Dirichlet trials use `m = n/2` modes.
    pub n: usize,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    pub workers: usize,
    pub out: Option<PathBuf>,
    /// Iteration cap; `None` selects the algorithm default.
    pub max_iter: Option<usize>,
    pub beta: f64,
    /// Time cap for Curie–Weiss; `None` means `10⁴ N`.
    pub t_max: Option<f64>,
    pub potential: Potential,
    pub wishart_scaling: WishartScaling,
    pub shift_scale: f64,
    pub mcmc: McmcParams,
    /// Admit compatible but unstudied (algorithm, ensemble) pairs.
    pub experimental: bool,
}

impl ExperimentConfig {
    pub fn new(algorithm: Algorithm, ensembles: Vec<Ensemble>, n: usize, epsilon: f64, trials: usize) -> Self {
        ExperimentConfig {
            algorithm,
            ensembles,
            n,
            epsilon,
            trials,
            seed: 0,
            workers: 1,
            out: None,
            max_iter: None,
            beta: DEFAULT_BETA,
            t_max: None,
            potential: Potential::Quadratic,
            wishart_scaling: WishartScaling::Critical,
            shift_scale: 1.0,
            mcmc: McmcParams::default(),
            experimental: false,
        }
    }

    /// Parses a flat `key = value` file; `#` starts a comment.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::ConfigInvalid(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_with_overrides(&text, &[])
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_overrides(text, &[])
    }

    /// Parses `text`, then applies `overrides` in order, then validates.
    pub fn parse_with_overrides(text: &str, overrides: &[(String, String)]) -> Result<Self> {
        let mut entries = parse_entries(text)?;
        for (k, v) in overrides {
            entries.insert(normalize_key(k), v.trim().to_string());
        }
        Self::from_entries(&entries)
    }

    fn from_entries(entries: &BTreeMap<String, String>) -> Result<Self> {
        let get = |k: &str| entries.get(k).map(String::as_str);
        let require = |k: &str| get(k).ok_or_else(|| Error::ConfigInvalid(format!("missing key '{k}'")));

        let algorithm: Algorithm = require("algorithm")?.parse()?;
        let ensembles = require("ensembles")?
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Ensemble>>>()?;
        let n: usize = parse_num("n", require("n")?)?;
        let trials: usize = parse_num("trials", require("trials")?)?;
        let epsilon = match get("epsilon") {
            Some(e) => parse_epsilon(e, n)?,
            None if algorithm == Algorithm::CurieWeiss => DEFAULT_EPSILON,
            None => return Err(Error::ConfigInvalid("missing key 'epsilon'".into())),
        };

        let mut cfg = ExperimentConfig::new(algorithm, ensembles, n, epsilon, trials);
        if let Some(v) = get("seed") {
            cfg.seed = parse_num("seed", v)?;
        }
        if let Some(v) = get("workers") {
            cfg.workers = parse_num("workers", v)?;
        }
        if let Some(v) = get("out") {
            cfg.out = Some(PathBuf::from(v));
        }
        if let Some(v) = get("max_iter") {
            cfg.max_iter = Some(parse_num("max_iter", v)?);
        }
        if let Some(v) = get("beta") {
            cfg.beta = parse_num("beta", v)?;
        }
        if let Some(v) = get("t_max") {
            cfg.t_max = Some(parse_num("t_max", v)?);
        }
        if let Some(v) = get("potential") {
            cfg.potential = v.parse()?;
        }
        if let Some(v) = get("wishart_scaling") {
            cfg.wishart_scaling = v.parse()?;
        }
        if let Some(v) = get("shift_scale") {
            cfg.shift_scale = parse_num("shift_scale", v)?;
        }
        if let Some(v) = get("burn_in") {
            cfg.mcmc.burn_in = parse_num("burn_in", v)?;
        }
        if let Some(v) = get("thinning") {
            cfg.mcmc.thinning = parse_num("thinning", v)?;
        }
        if let Some(v) = get("step_size") {
            cfg.mcmc.step_size = Some(parse_num("step_size", v)?);
        }
        if let Some(v) = get("experimental") {
            cfg.experimental = parse_num("experimental", v)?;
        }
        let known = [
            "algorithm", "ensembles", "n", "epsilon", "trials", "seed", "workers", "out", "max_iter", "beta",
            "t_max", "potential", "wishart_scaling", "shift_scale", "burn_in", "thinning", "step_size",
            "experimental",
        ];
        if let Some(k) = entries.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(Error::ConfigInvalid(format!("unknown key '{k}'")));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::ConfigInvalid(msg));
        if self.ensembles.is_empty() {
            return bad("at least one ensemble is required".into());
        }
        for (i, e) in self.ensembles.iter().enumerate() {
            if self.ensembles[..i].contains(e) {
                return bad(format!("ensemble {e} listed twice"));
            }
            if !compatible(self.algorithm, *e) {
                return bad(format!("{} cannot run on {e}", self.algorithm));
            }
            if !self.experimental && !studied(self.algorithm, *e) {
                return bad(format!(
                    "({}, {e}) is not a studied pair; set experimental = true to run it",
                    self.algorithm
                ));
            }
        }
        if self.trials < 2 {
            return bad(format!("trials must be at least 2, got {}", self.trials));
        }
        if self.workers == 0 {
            return bad("workers must be positive".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        let min_n = match self.algorithm {
            Algorithm::Genetic => 1,
            Algorithm::CurieWeiss => 2,
            _ if self.ensembles.iter().any(|e| matches!(e, Ensemble::Cloe | Ensemble::Cpbe)) => 4,
            _ => 2,
        };
        if self.n < min_n {
            return bad(format!("n must be at least {min_n}, got {}", self.n));
        }
        if self.algorithm == Algorithm::CurieWeiss {
            if self.n % 2 == 1 {
                return bad(format!("Curie–Weiss needs an even N, got {}", self.n));
            }
            if self.epsilon >= 1.0 {
                return bad(format!("Curie–Weiss epsilon must lie in (0, 1), got {}", self.epsilon));
            }
            if !(self.beta > 0.0) {
                return bad(format!("beta must be positive, got {}", self.beta));
            }
        }
        if self.ensembles.iter().any(|e| matches!(e, Ensemble::Bde | Ensemble::Ude)) && self.n % 2 == 1 {
            return bad(format!("Dirichlet ensembles need an even n = 2m, got {}", self.n));
        }
        if !(self.shift_scale.is_finite()) {
            return bad("shift_scale must be finite".into());
        }
        Ok(())
    }
}

fn normalize_key(k: &str) -> String {
    let k = k.trim().trim_start_matches("--").to_ascii_lowercase().replace('-', "_");
    match k.as_str() {
        "ensemble" => "ensembles".into(),
        "master_seed" => "seed".into(),
        "eps" => "epsilon".into(),
        _ => k,
    }
}

fn parse_entries(text: &str) -> Result<BTreeMap<String, String>> {
    let mut entries = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::ConfigInvalid(format!("line {}: expected key = value", lineno + 1)));
        };
        let key = normalize_key(k);
        if entries.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(Error::ConfigInvalid(format!("line {}: duplicate key '{key}'", lineno + 1)));
        }
    }
    Ok(entries)
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::ConfigInvalid(format!("cannot parse {key} = '{v}'")))
}

/// A number, or `sqrt(n)*x` for `√n · x`.
pub fn parse_epsilon(v: &str, n: usize) -> Result<f64> {
    let compact: String = v.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(rest) = compact.strip_prefix("sqrt(n)*") {
        let x: f64 = parse_num("epsilon", rest)?;
        return Ok((n as f64).sqrt() * x);
    }
    parse_num("epsilon", &compact)
}

fn is_real_matrix(e: Ensemble) -> bool {
    matches!(
        e,
        Ensemble::Goe | Ensemble::Be | Ensemble::Cloe | Ensemble::Cpbe | Ensemble::Csbe | Ensemble::Csge
    )
}

fn is_hermitian_matrix(e: Ensemble) -> bool {
    matches!(e, Ensemble::Gue | Ensemble::Que | Ensemble::Cosh)
}

/// Whether `algorithm` can consume inputs from `ensemble` at all.
pub fn compatible(algorithm: Algorithm, ensemble: Ensemble) -> bool {
    match algorithm {
        Algorithm::Jacobi => matches!(ensemble, Ensemble::Goe | Ensemble::Be | Ensemble::Cloe | Ensemble::Cpbe),
        Algorithm::Qr => is_real_matrix(ensemble) || is_hermitian_matrix(ensemble),
        Algorithm::Cg => is_real_matrix(ensemble),
        Algorithm::Gmres => is_real_matrix(ensemble) || matches!(ensemble, Ensemble::Bde | Ensemble::Ude),
        Algorithm::Genetic => matches!(ensemble, Ensemble::GaUniform | Ensemble::GaCoin),
        Algorithm::CurieWeiss => matches!(ensemble, Ensemble::CwO | Ensemble::CwU | Ensemble::CwV),
    }
}

/// The (algorithm, ensemble) pairs whose halting statistics are studied.
pub fn studied(algorithm: Algorithm, ensemble: Ensemble) -> bool {
    use Ensemble::*;
    match algorithm {
        Algorithm::Jacobi => matches!(ensemble, Goe | Be),
        Algorithm::Qr => matches!(ensemble, Goe | Be | Gue | Que | Cosh),
        Algorithm::Cg => matches!(ensemble, Cloe | Cpbe),
        Algorithm::Gmres => matches!(ensemble, Csge | Csbe | Bde | Ude),
        Algorithm::Genetic => matches!(ensemble, GaUniform | GaCoin),
        Algorithm::CurieWeiss => matches!(ensemble, CwO | CwU | CwV),
    }
}
