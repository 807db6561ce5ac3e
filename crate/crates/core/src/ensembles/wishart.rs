use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Relation between the row count `n` and the column count `m` of the
/// factor `X` in `W = XXᵀ/m`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum WishartScaling {
    /// `m = n + 2⌊√n⌋`
    #[default]
    Critical,
    /// `m = 2n`
    Double,
    /// `m = n`
    Square,
}

impl WishartScaling {
    pub fn columns(self, n: usize) -> usize {
        match self {
            WishartScaling::Critical => n + 2 * isqrt(n),
            WishartScaling::Double => 2 * n,
            WishartScaling::Square => n,
        }
    }
}

impl std::str::FromStr for WishartScaling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "critical" => Ok(WishartScaling::Critical),
            "double" | "2n" => Ok(WishartScaling::Double),
            "square" | "n" => Ok(WishartScaling::Square),
            other => Err(Error::ConfigInvalid(format!("unknown wishart scaling '{other}'"))),
        }
    }
}

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Number of columns `m = n + 2⌊√n⌋` under the critical scaling.
pub fn critical_width(n: usize) -> usize {
    WishartScaling::Critical.columns(n)
}

fn gram(x: &[f64], n: usize, m: usize) -> Matrix {
    let mut w = Matrix::zeros(n, n);
    let m_f = m as f64;
    for i in 0..n {
        let xi = &x[i * m..(i + 1) * m];
        for j in i..n {
            let xj = &x[j * m..(j + 1) * m];
            let v = xi.iter().zip(xj).map(|(a, b)| a * b).sum::<f64>() / m_f;
            w[(i, j)] = v;
            w[(j, i)] = v;
        }
    }
    w
}

fn check_n(n: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::InvalidDimension {
            n,
            reason: "positive definite ensembles need n >= 4",
        });
    }
    Ok(())
}

/// cLOE: `W = XXᵀ/m`, `X` an `n×m` standard Gaussian matrix.
pub fn sample_cloe<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Matrix> {
    sample_cloe_scaled(n, WishartScaling::Critical, rng)
}

pub fn sample_cloe_scaled<R: Rng + ?Sized>(
    n: usize,
    scaling: WishartScaling,
    rng: &mut R,
) -> Result<Matrix> {
    check_n(n)?;
    let m = scaling.columns(n);
    let x: Vec<f64> = (0..n * m).map(|_| rng.sample(StandardNormal)).collect();
    Ok(gram(&x, n, m))
}

/// cPBE: `W = XXᵀ/m`, `X` an `n×m` matrix of fair `±1` coins.
pub fn sample_cpbe<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Matrix> {
    sample_cpbe_scaled(n, WishartScaling::Critical, rng)
}

pub fn sample_cpbe_scaled<R: Rng + ?Sized>(
    n: usize,
    scaling: WishartScaling,
    rng: &mut R,
) -> Result<Matrix> {
    check_n(n)?;
    let m = scaling.columns(n);
    let x: Vec<f64> = (0..n * m)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect();
    Ok(gram(&x, n, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dot;
    use crate::rng::RngStream;

    #[test]
    fn critical_width_values() {
        assert_eq!(critical_width(100), 120);
        assert_eq!(critical_width(50), 64);
        assert_eq!(critical_width(4), 8);
        assert_eq!(WishartScaling::Double.columns(100), 200);
    }

    #[test]
    fn cpbe_diagonal_is_one() {
        let mut rng = RngStream::new(21, 0).rng();
        let w = sample_cpbe(30, &mut rng).unwrap();
        assert!(w.diagonal().iter().all(|&d| d == 1.0));
        assert!(w.is_symmetric());
    }

    #[test]
    fn cloe_mean_trace_is_n() {
        let n = 50;
        let mut rng = RngStream::new(22, 0).rng();
        let mean: f64 = (0..1000)
            .map(|_| sample_cloe(n, &mut rng).unwrap().trace())
            .sum::<f64>()
            / 1000.0;
        assert!((mean / n as f64 - 1.0).abs() < 0.03, "{mean}");
    }

    #[test]
    fn rayleigh_quotients_are_positive() {
        let mut rng = RngStream::new(23, 0).rng();
        for draw in 0..5 {
            let w = if draw % 2 == 0 {
                sample_cloe(20, &mut rng).unwrap()
            } else {
                sample_cpbe(20, &mut rng).unwrap()
            };
            assert!(w.is_symmetric());
            for _ in 0..100 {
                let v: Vec<f64> = (0..20).map(|_| rng.random::<f64>() - 0.5).collect();
                assert!(dot(&v, &w.matvec(&v)) / dot(&v, &v) > 0.0);
            }
        }
    }

    #[test]
    fn small_n_rejected() {
        let mut rng = RngStream::new(24, 0).rng();
        assert!(sample_cloe(3, &mut rng).is_err());
    }
}
