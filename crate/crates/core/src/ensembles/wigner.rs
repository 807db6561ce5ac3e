use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, Matrix};

/// GOE: `(X + Xᵀ)/√(4n)` with `X` iid standard Gaussian.
pub fn sample_goe<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    let x: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
    let scale = 1.0 / (4.0 * n as f64).sqrt();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = (x[i * n + j] + x[j * n + i]) * scale;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// BE: symmetric with iid `±1/√n` entries on and above the diagonal.
pub fn sample_be<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    let a = 1.0 / (n as f64).sqrt();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = if rng.random::<bool>() { a } else { -a };
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Standard complex Gaussian: real and imaginary parts each of variance 1/2.
pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// GUE: `(X + X*)/√(8n)` with `X` iid standard complex Gaussian.
pub fn sample_gue<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let x: Vec<Complex64> = (0..n * n).map(|_| complex_gaussian(rng)).collect();
    let scale = 1.0 / (8.0 * n as f64).sqrt();
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(2.0 * x[i * n + i].re * scale, 0.0);
        for j in i + 1..n {
            let v = (x[i * n + j] + x[j * n + i].conj()) * scale;
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
    m
}
