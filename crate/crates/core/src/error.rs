use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is numerically rank deficient: smallest |R_ii| = {min_pivot:e} below floor {floor:e}")]
    RankDeficient { min_pivot: f64, floor: f64 },

    #[error("dimension {n} exceeds the closed-form limit {max}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("invalid dimension {n}: {reason}")]
    InvalidDimension { n: usize, reason: &'static str },

    #[error("MCMC acceptance rate {rate:.3} over burn-in outside (0.05, 0.95)")]
    McmcNotConverged { rate: f64 },

    #[error("conjugate gradient breakdown: direction curvature {curvature:e} <= 0 at iteration {iteration}")]
    BreakdownNonSpd { curvature: f64, iteration: usize },

    #[error("right-hand side is the zero vector")]
    ZeroRhs,

    #[error("boundary curve is not star-shaped after {attempts} attempts")]
    NonStarShaped { attempts: usize },

    #[error("minimization did not converge: gradient norm {gradient_norm:e}")]
    NonConvergence { gradient_norm: f64 },

    #[error("all samples are equal; fluctuations undefined")]
    ZeroVariance,

    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),

    #[error("spin count {0} is odd; zero initial magnetization needs even N")]
    OddN(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid config: {0}")]
    ConfigInvalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
