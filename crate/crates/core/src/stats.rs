//! Fluctuation normalization, histograms and two-sample collapse metrics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default histogram grid: 40 bins on `[-3, 4]`.
pub const DEFAULT_BINS: usize = 40;
pub const DEFAULT_RANGE: (f64, f64) = (-3.0, 4.0);

/// Halting times normalized to zero sample mean and unit sample standard deviation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluctuationSet {
    pub raw: Vec<f64>,
    pub mean: f64,
    /// Square root of the unbiased (N-1) sample variance.
    pub sd: f64,
    pub tau: Vec<f64>,
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample standard deviation.
pub fn sample_sd(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)).sqrt()
}

/// `τ_i = (k_i - mean) / sd`.
pub fn fluctuations(samples: &[f64]) -> Result<FluctuationSet> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples(samples.len()));
    }
    if samples.iter().all(|&x| x == samples[0]) {
        return Err(Error::ZeroVariance);
    }
    let m = mean(samples);
    let sd = sample_sd(samples);
    if !(sd > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let tau = samples.iter().map(|x| (x - m) / sd).collect();
    Ok(FluctuationSet {
        raw: samples.to_vec(),
        mean: m,
        sd,
        tau,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` equally spaced edges.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    /// `count / (total · width)`, so that `Σ density · width = 1`.
    pub densities: Vec<f64>,
}

impl Histogram {
    pub fn bin_width(&self) -> f64 {
        self.edges[1] - self.edges[0]
    }

    pub fn total_mass(&self) -> f64 {
        let w = self.bin_width();
        self.densities.iter().map(|d| d * w).sum()
    }
}

/// Density histogram on a fixed grid; values outside `range` are clipped
/// into the first or last bin.
pub fn histogram(values: &[f64], bins: usize, range: (f64, f64)) -> Result<Histogram> {
    let (lo, hi) = range;
    if bins == 0 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "histogram needs bins >= 1 and a finite range, got {bins} bins on [{lo}, {hi}]"
        )));
    }
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
    let mut counts = vec![0usize; bins];
    for &v in values {
        let idx = ((v - lo) / width).floor();
        let idx = if idx.is_nan() || idx < 0.0 {
            0
        } else {
            (idx as usize).min(bins - 1)
        };
        counts[idx] += 1;
    }
    let total = values.len().max(1) as f64;
    let densities = counts.iter().map(|&c| c as f64 / (total * width)).collect();
    Ok(Histogram {
        edges,
        counts,
        densities,
    })
}

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Two-sample Kolmogorov–Smirnov statistic `sup_x |F_a(x) - F_b(x)|`.
pub fn ks_distance(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "KS distance needs nonempty samples");
    let a = sorted(a);
    let b = sorted(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// One-sample Kolmogorov–Smirnov statistic against a continuous CDF.
pub fn ks_against_cdf(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let xs = sorted(sample);
    let n = xs.len() as f64;
    xs.iter().enumerate().fold(0.0, |d: f64, (i, &x)| {
        let f = cdf(x);
        d.max((f - i as f64 / n).abs()).max((f - (i + 1) as f64 / n).abs())
    })
}

/// CDF of the semicircle law on `[-radius, radius]`.
pub fn semicircle_cdf(x: f64, radius: f64) -> f64 {
    let t = (x / radius).clamp(-1.0, 1.0);
    0.5 + (t * (1.0 - t * t).sqrt() + t.asin()) / std::f64::consts::PI
}

/// Smallest KS distance between `sample` and any centered semicircle law,
/// with the radius that achieves it.
pub fn best_fit_semicircle(sample: &[f64]) -> (f64, f64) {
    let spread = sample.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if spread == 0.0 {
        return (1.0, 0.0);
    }
    let ks = |r: f64| ks_against_cdf(sample, |x| semicircle_cdf(x, r));
    // Coarse scan, then golden-section refinement around the best cell.
    let grid = 200;
    let (lo, hi) = (0.2 * spread, 1.5 * spread);
    let step = (hi - lo) / grid as f64;
    let mut best = (f64::INFINITY, lo);
    for i in 0..=grid {
        let r = lo + step * i as f64;
        let d = ks(r);
        if d < best.0 {
            best = (d, r);
        }
    }
    let (mut a, mut b) = ((best.1 - step).max(lo), best.1 + step);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if ks(c) <= ks(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let r = 0.5 * (a + b);
    let d = ks(r);
    if d < best.0 {
        (d, r)
    } else {
        (best.0, best.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use proptest::prelude::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn fluctuation_examples() {
        let f = fluctuations(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(f.tau, vec![-1.0, 0.0, 1.0]);
        assert!(matches!(fluctuations(&[5.0, 5.0, 5.0]), Err(Error::ZeroVariance)));
        assert!(matches!(fluctuations(&[5.0]), Err(Error::TooFewSamples(1))));
        let f = fluctuations(&[0.0, 0.0, 1.0, 1.0]).unwrap();
        let h = 3f64.sqrt() / 2.0;
        for (t, want) in f.tau.iter().zip([-h, -h, h, h]) {
            assert!((t - want).abs() < 1e-15);
        }
    }

    #[test]
    fn histogram_of_repeated_value() {
        let h = histogram(&[0.3; 50], DEFAULT_BINS, DEFAULT_RANGE).unwrap();
        assert_eq!(h.counts.iter().filter(|&&c| c > 0).count(), 1);
        assert!((h.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn histogram_of_uniform_grid_is_flat() {
        // Ten values per bin, at bin centers.
        let values: Vec<f64> = (0..400).map(|i| -3.0 + 7.0 / 40.0 * ((i / 10) as f64 + 0.5)).collect();
        let h = histogram(&values, 40, (-3.0, 4.0)).unwrap();
        assert!(h.counts.iter().all(|&c| c == 10));
        let d0 = h.densities[0];
        assert!(h.densities.iter().all(|&d| d == d0));
    }

    #[test]
    fn histogram_clips_out_of_range() {
        let h = histogram(&[-10.0, 10.0, 0.0], 4, (-1.0, 1.0)).unwrap();
        assert_eq!(h.counts, vec![1, 0, 1, 1]);
    }

    #[test]
    fn histogram_matches_gaussian_density() {
        let mut rng = RngStream::new(101, 0).rng();
        let xs: Vec<f64> = (0..100_000).map(|_| rng.sample(StandardNormal)).collect();
        let h = histogram(&xs, DEFAULT_BINS, DEFAULT_RANGE).unwrap();
        let w = h.bin_width();
        for (i, d) in h.densities.iter().enumerate().skip(1).take(DEFAULT_BINS - 2) {
            let x = h.edges[i] + 0.5 * w;
            let phi = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
            assert!((d - phi).abs() < 0.02, "bin {i}: {d} vs {phi}");
        }
    }

    #[test]
    fn ks_examples() {
        assert_eq!(ks_distance(&[1.0, 2.0, 3.0], &[3.0, 1.0, 2.0]), 0.0);
        assert_eq!(ks_distance(&[0.0], &[1.0]), 1.0);
        assert_eq!(ks_distance(&[1.0, 2.0], &[1.5]), 0.5);
    }

    #[test]
    fn semicircle_fit_recovers_radius() {
        // Quantiles of the semicircle with radius 2.
        let n = 2000;
        let sample: Vec<f64> = (0..n)
            .map(|i| {
                let p = (i as f64 + 0.5) / n as f64;
                let (mut a, mut b) = (-2.0, 2.0);
                for _ in 0..80 {
                    let m = 0.5 * (a + b);
                    if semicircle_cdf(m, 2.0) < p {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                0.5 * (a + b)
            })
            .collect();
        let (d, r) = best_fit_semicircle(&sample);
        assert!(d < 1e-3, "{d}");
        assert!((r - 2.0).abs() < 1e-2, "{r}");
    }

    proptest! {
        #[test]
        fn fluctuations_are_affine_invariant(
            xs in prop::collection::vec(-100.0f64..100.0, 3..50),
            scale in 0.01f64..100.0,
            shift in -1000.0f64..1000.0,
        ) {
            prop_assume!(sample_sd(&xs) > 1e-6);
            let a = fluctuations(&xs).unwrap();
            let ys: Vec<f64> = xs.iter().map(|x| scale * x + shift).collect();
            let b = fluctuations(&ys).unwrap();
            for (s, t) in a.tau.iter().zip(&b.tau) {
                prop_assert!((s - t).abs() < 1e-9, "{} vs {}", s, t);
            }
            prop_assert!(mean(&a.tau).abs() < 1e-12);
            prop_assert!((sample_sd(&a.tau) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn ks_is_symmetric_and_subadditive(
            a in prop::collection::vec(-5.0f64..5.0, 1..40),
            b in prop::collection::vec(-5.0f64..5.0, 1..40),
            c in prop::collection::vec(-5.0f64..5.0, 1..40),
        ) {
            let ab = ks_distance(&a, &b);
            prop_assert_eq!(ab, ks_distance(&b, &a));
            prop_assert!((0.0..=1.0).contains(&ab));
            prop_assert!(ks_distance(&a, &c) <= ab + ks_distance(&b, &c) + 1e-12);
        }
    }
}
