use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// External potential `V`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Potential {
    /// `V(x) = x²`.
    #[default]
    Quadratic,
    /// `V(x) = x⁴ - 3x²`.
    DoubleWell,
}

impl Potential {
    pub fn value(self, x: f64) -> f64 {
        match self {
            Potential::Quadratic => x * x,
            Potential::DoubleWell => x * x * (x * x - 3.0),
        }
    }

    pub fn derivative(self, x: f64) -> f64 {
        match self {
            Potential::Quadratic => 2.0 * x,
            Potential::DoubleWell => 4.0 * x * x * x - 6.0 * x,
        }
    }

    pub fn second_derivative(self, x: f64) -> f64 {
        match self {
            Potential::Quadratic => 2.0,
            Potential::DoubleWell => 12.0 * x * x - 6.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Potential::Quadratic => "x^2",
            Potential::DoubleWell => "x^4-3x^2",
        }
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Potential {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match compact.to_ascii_lowercase().as_str() {
            "x^2" | "x2" | "quadratic" => Ok(Potential::Quadratic),
            "x^4-3x^2" | "x4-3x2" | "double-well" | "doublewell" => Ok(Potential::DoubleWell),
            _ => Err(Error::ConfigInvalid(format!("unknown potential '{s}'"))),
        }
    }
}

/// Pair-interaction prefactor `2 / (N(N-1))`, zero for `N = 1`.
pub(crate) fn pair_weight(n: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        2.0 / (n as f64 * (n as f64 - 1.0))
    }
}

/// `H(P) = 2/(N(N-1)) Σ_{i≠j} log|P_i - P_j|⁻¹ + (1/N) Σ V(P_i)`; `+∞` when
/// two coordinates coincide.
pub fn energy_h(p: &[f64], v: Potential) -> f64 {
    let n = p.len();
    let mut log_sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let d = (p[i] - p[j]).abs();
            if d == 0.0 {
                return f64::INFINITY;
            }
            log_sum -= d.ln();
        }
    }
    // Each unordered pair appears twice in the ordered sum.
    let external: f64 = p.iter().map(|&x| v.value(x)).sum();
    2.0 * pair_weight(n) * log_sum + external / n as f64
}

/// Gradient of [`energy_h`].
pub fn energy_gradient(p: &[f64], v: Potential) -> Vec<f64> {
    let n = p.len();
    let c = pair_weight(n);
    (0..n)
        .map(|k| {
            let pair: f64 = (0..n).filter(|&j| j != k).map(|j| 1.0 / (p[k] - p[j])).sum();
            -2.0 * c * pair + v.derivative(p[k]) / n as f64
        })
        .collect()
}

/// Hessian of [`energy_h`], row-major `N × N`.
pub fn energy_hessian(p: &[f64], v: Potential) -> Vec<f64> {
    let n = p.len();
    let c = pair_weight(n);
    let mut h = vec![0.0; n * n];
    for k in 0..n {
        let mut diag = v.second_derivative(p[k]) / n as f64;
        for j in 0..n {
            if j != k {
                let t = 2.0 * c / (p[k] - p[j]).powi(2);
                h[k * n + j] = -t;
                diag += t;
            }
        }
        h[k * n + k] = diag;
    }
    h
}
