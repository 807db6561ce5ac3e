//! Closed-form eigenvalues of small symmetric matrices.
//!
//! Used as an oracle for the iterative eigensolvers; never on the hot path.

use std::f64::consts::PI;

use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Largest dimension handled by [`reference_eigenvalues`].
pub const MAX_REFERENCE_DIM: usize = 4;

/// Coefficients `[1, c1, ..., cn]` of `det(λI - M)` (Faddeev–LeVerrier).
pub fn characteristic_polynomial(m: &Matrix) -> Vec<f64> {
    let n = m.nrows();
    let mut coeffs = vec![1.0];
    let mut mk = Matrix::zeros(n, n);
    for k in 1..=n {
        let mut next = m.matmul(&mk);
        let prev = coeffs[k - 1];
        for i in 0..n {
            next[(i, i)] += prev;
        }
        let ck = -m.matmul(&next).trace() / k as f64;
        coeffs.push(ck);
        mk = next;
    }
    coeffs
}

/// Evaluates a monic-first coefficient list by Horner's rule.
pub fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
}

/// Sorted eigenvalues of a symmetric matrix with at most four rows.
pub fn reference_eigenvalues(m: &Matrix) -> Result<Vec<f64>> {
    let n = m.nrows();
    if n > MAX_REFERENCE_DIM {
        return Err(Error::DimensionTooLarge {
            n,
            max: MAX_REFERENCE_DIM,
        });
    }
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let c = characteristic_polynomial(m);
    let mut roots = match n {
        0 => Vec::new(),
        1 => vec![-c[1]],
        2 => quadratic_roots(c[1], c[2]),
        3 => cubic_roots(c[1], c[2], c[3], true),
        _ => quartic_roots(c[1], c[2], c[3], c[4]),
    };
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// Real roots of `x^2 + b x + c`, assuming a nonnegative discriminant.
fn quadratic_roots(b: f64, c: f64) -> Vec<f64> {
    let disc = (b * b - 4.0 * c).max(0.0);
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0, 0.0];
    }
    vec![q, c / q]
}

/// Real roots of `x^3 + a x^2 + b x + c`. With `all_real` the trigonometric
/// branch is forced, absorbing rounding that would push a double root complex.
fn cubic_roots(a: f64, b: f64, c: f64, all_real: bool) -> Vec<f64> {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);

    if all_real || disc <= 0.0 {
        if p >= 0.0 {
            // Triple root (p = 0) up to rounding.
            let t = (-q).cbrt();
            return vec![t - shift; 3];
        }
        let r = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * r)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3)
            .map(|k| r * (phi - 2.0 * PI * k as f64 / 3.0).cos() - shift)
            .collect()
    } else {
        let s = disc.sqrt();
        let t = (-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt();
        vec![t - shift]
    }
}

/// Real roots of `x^4 + a x^3 + b x^2 + c x + d` (Ferrari), assuming all four are real.
fn quartic_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    let shift = a / 4.0;
    let a2 = a * a;
    let p = b - 3.0 * a2 / 8.0;
    let q = c - a * b / 2.0 + a2 * a / 8.0;
    let r = d - a * c / 4.0 + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0;

    let scale = 1.0 + p.abs() + q.abs().sqrt() + r.abs().sqrt();
    let resolvent = cubic_roots(p, p * p / 4.0 - r, -q * q / 8.0, false);
    let m = resolvent.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let ys: Vec<f64> = if m <= 1e-14 * scale * scale || q.abs() <= 1e-15 * scale.powi(3) {
        // Biquadratic: y^4 + p y^2 + r = 0.
        let zs = quadratic_roots(p, r);
        zs.into_iter()
            .flat_map(|z| {
                let y = z.max(0.0).sqrt();
                [y, -y]
            })
            .collect()
    } else {
        let s = (2.0 * m).sqrt();
        let t = q / (2.0 * s);
        let mut out = quadratic_roots(-s, p / 2.0 + m + t);
        out.extend(quadratic_roots(s, p / 2.0 + m - t));
        out
    };
    ys.into_iter().map(|y| y - shift).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn two_by_two_examples() {
        let swap = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        assert_close(&reference_eigenvalues(&swap).unwrap(), &[-1.0, 1.0], 1e-14);
        let m = Matrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]);
        assert_close(&reference_eigenvalues(&m).unwrap(), &[1.0, 3.0], 1e-14);
    }

    #[test]
    fn diagonal_three_by_three() {
        let m = Matrix::from_diagonal(&[3.0, 1.0, 2.0]);
        assert_close(&reference_eigenvalues(&m).unwrap(), &[1.0, 2.0, 3.0], 1e-12);
    }

    #[test]
    fn repeated_roots() {
        let m = Matrix::from_diagonal(&[2.0, 2.0, 2.0]);
        assert_close(&reference_eigenvalues(&m).unwrap(), &[2.0; 3], 1e-12);
        let m = Matrix::from_diagonal(&[1.0, -1.0, 1.0, -1.0]);
        assert_close(
            &reference_eigenvalues(&m).unwrap(),
            &[-1.0, -1.0, 1.0, 1.0],
            1e-7,
        );
    }

    #[test]
    fn four_by_four_tridiagonal() {
        // Path graph Laplacian-like matrix with eigenvalues 2 - 2cos(kπ/5).
        let m = Matrix::from_fn(4, 4, |i, j| match i.abs_diff(j) {
            0 => 2.0,
            1 => -1.0,
            _ => 0.0,
        });
        let want: Vec<f64> = (1..=4)
            .map(|k| 2.0 - 2.0 * (k as f64 * PI / 5.0).cos())
            .collect();
        assert_close(&reference_eigenvalues(&m).unwrap(), &want, 1e-12);
    }

    #[test]
    fn rejects_large_dimension() {
        assert!(matches!(
            reference_eigenvalues(&Matrix::identity(5)),
            Err(Error::DimensionTooLarge { n: 5, .. })
        ));
    }

    #[test]
    fn characteristic_polynomial_of_swap() {
        let swap = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        assert_eq!(characteristic_polynomial(&swap), vec![1.0, 0.0, -1.0]);
    }
}
