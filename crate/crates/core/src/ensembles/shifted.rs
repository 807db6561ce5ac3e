use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftEntries {
    Bernoulli,
    Gaussian,
}

/// `I + scale·X/√n` with `X` iid from `entries`; not symmetrized.
pub fn sample_shifted<R: Rng + ?Sized>(
    n: usize,
    entries: ShiftEntries,
    scale: f64,
    rng: &mut R,
) -> Result<Matrix> {
    if n < 2 {
        return Err(Error::InvalidDimension {
            n,
            reason: "shifted ensembles need n >= 2",
        });
    }
    let a = scale / (n as f64).sqrt();
    let mut w = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let x = match entries {
                ShiftEntries::Bernoulli => {
                    if rng.random::<bool>() {
                        1.0
                    } else {
                        -1.0
                    }
                }
                ShiftEntries::Gaussian => rng.sample(StandardNormal),
            };
            w[(i, j)] = x * a;
        }
        w[(i, i)] += 1.0;
    }
    Ok(w)
}

/// cSBE: `I + X/√n`, `X` iid fair `±1`.
pub fn sample_csbe<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Matrix> {
    sample_shifted(n, ShiftEntries::Bernoulli, 1.0, rng)
}

/// cSGE: `I + X/√n`, `X` iid standard Gaussian.
pub fn sample_csge<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Matrix> {
    sample_shifted(n, ShiftEntries::Gaussian, 1.0, rng)
}
