//! Halting records and the algorithm / ensemble labels attached to them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    Jacobi,
    Qr,
    Cg,
    Gmres,
    Genetic,
    CurieWeiss,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Jacobi,
        Algorithm::Qr,
        Algorithm::Cg,
        Algorithm::Gmres,
        Algorithm::Genetic,
        Algorithm::CurieWeiss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Jacobi => "jacobi",
            Algorithm::Qr => "qr",
            Algorithm::Cg => "cg",
            Algorithm::Gmres => "gmres",
            Algorithm::Genetic => "genetic",
            Algorithm::CurieWeiss => "curie-weiss",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim().to_ascii_lowercase();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s || (s == "curieweiss" && *a == Algorithm::CurieWeiss))
            .ok_or_else(|| Error::ConfigInvalid(format!("unknown algorithm '{s}'")))
    }
}

/// Source of randomness for one trial: a matrix ensemble, a GA perturbation
/// law, or a Curie–Weiss flip intensity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ensemble {
    Goe,
    Be,
    Gue,
    Cloe,
    Cpbe,
    Csbe,
    Csge,
    Que,
    Cosh,
    Bde,
    Ude,
    /// GA perturbations uniform on `[-1/(10N), 1/(10N)]`.
    GaUniform,
    /// GA perturbations `±1/(10N)` with equal probability.
    GaCoin,
    CwO,
    CwU,
    CwV,
}

impl Ensemble {
    pub const ALL: [Ensemble; 16] = [
        Ensemble::Goe,
        Ensemble::Be,
        Ensemble::Gue,
        Ensemble::Cloe,
        Ensemble::Cpbe,
        Ensemble::Csbe,
        Ensemble::Csge,
        Ensemble::Que,
        Ensemble::Cosh,
        Ensemble::Bde,
        Ensemble::Ude,
        Ensemble::GaUniform,
        Ensemble::GaCoin,
        Ensemble::CwO,
        Ensemble::CwU,
        Ensemble::CwV,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Ensemble::Goe => "GOE",
            Ensemble::Be => "BE",
            Ensemble::Gue => "GUE",
            Ensemble::Cloe => "cLOE",
            Ensemble::Cpbe => "cPBE",
            Ensemble::Csbe => "cSBE",
            Ensemble::Csge => "cSGE",
            Ensemble::Que => "QUE",
            Ensemble::Cosh => "COSH",
            Ensemble::Bde => "BDE",
            Ensemble::Ude => "UDE",
            Ensemble::GaUniform => "uniform",
            Ensemble::GaCoin => "coin",
            Ensemble::CwO => "o",
            Ensemble::CwU => "u",
            Ensemble::CwV => "v",
        }
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        Ensemble::ALL
            .into_iter()
            .find(|e| e.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::ConfigInvalid(format!("unknown ensemble '{s}'")))
    }
}

/// Outcome of one trial: the halting time plus what produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HaltingRecord {
    /// Iteration count for iterative algorithms, continuous time for Curie–Weiss.
    pub halting_time: f64,
    pub algorithm: Algorithm,
    pub ensemble: Option<Ensemble>,
    pub n: usize,
    pub epsilon: f64,
    pub seed: Option<RngStream>,
    /// Iteration (or time) cap reached before the halting criterion.
    pub capped: bool,
}

impl HaltingRecord {
    pub fn new(algorithm: Algorithm, n: usize, epsilon: f64, halting_time: f64, capped: bool) -> Self {
        Self {
            halting_time,
            algorithm,
            ensemble: None,
            n,
            epsilon,
            seed: None,
            capped,
        }
    }

    pub fn tagged(mut self, ensemble: Ensemble, seed: RngStream) -> Self {
        self.ensemble = Some(ensemble);
        self.seed = Some(seed);
        self
    }
}
