//! Continuous-time Glauber dynamics on `{-1, 1}ᴺ` halted when the
//! magnetization first reaches `|M| ≥ ε`.

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::{Algorithm, Ensemble, HaltingRecord};

pub const DEFAULT_BETA: f64 = 1.3;
pub const DEFAULT_EPSILON: f64 = 0.5;

/// Default time cap, `10⁴ N`.
pub fn default_t_max(n: usize) -> f64 {
    1e4 * n as f64
}

/// Spin-flip intensity family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntensityKind {
    /// `e^{-β x_i M}`.
    O,
    /// `e^{-β x_i (M - M³/5)}`.
    U,
    /// `e^{-β x_i (M + M⁸)}`.
    V,
}

impl IntensityKind {
    pub fn ensemble(self) -> Ensemble {
        match self {
            IntensityKind::O => Ensemble::CwO,
            IntensityKind::U => Ensemble::CwU,
            IntensityKind::V => Ensemble::CwV,
        }
    }

    pub fn from_ensemble(e: Ensemble) -> Option<Self> {
        match e {
            Ensemble::CwO => Some(IntensityKind::O),
            Ensemble::CwU => Some(IntensityKind::U),
            Ensemble::CwV => Some(IntensityKind::V),
            _ => None,
        }
    }

    /// Field `h(M)` in `c_i = e^{-β x_i h(M)}`.
    fn field(self, m: f64) -> f64 {
        match self {
            IntensityKind::O => m,
            IntensityKind::U => m - m.powi(3) / 5.0,
            IntensityKind::V => m + m.powi(8),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinState {
    spins: Vec<i8>,
    time: f64,
    /// `Σ spins`, kept exactly.
    sum: i64,
}

impl SpinState {
    /// First `N/2` spins up, the rest down, so `M = 0`.
    pub fn balanced(n: usize) -> Result<Self> {
        if n == 0 || n % 2 == 1 {
            return Err(Error::OddN(n));
        }
        let spins = (0..n).map(|i| if i < n / 2 { 1 } else { -1 }).collect();
        Ok(SpinState {
            spins,
            time: 0.0,
            sum: 0,
        })
    }

    pub fn from_spins(spins: Vec<i8>) -> Self {
        assert!(spins.iter().all(|&s| s == 1 || s == -1), "spins must be ±1");
        let sum = spins.iter().map(|&s| s as i64).sum();
        SpinState { spins, time: 0.0, sum }
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn magnetization(&self) -> f64 {
        self.sum as f64 / self.spins.len() as f64
    }

    /// Magnetization recomputed from the spins.
    pub fn recomputed_magnetization(&self) -> f64 {
        self.spins.iter().map(|&s| s as f64).sum::<f64>() / self.spins.len() as f64
    }
}

/// `c_i(x)` for spin `i` (0-based).
pub fn intensity(kind: IntensityKind, beta: f64, state: &SpinState, i: usize) -> f64 {
    let xi = state.spins[i] as f64;
    (-beta * xi * kind.field(state.magnetization())).exp()
}

/// One event: an exponential holding time with mean `1/Σc`, then spin `j`
/// flips with probability `c_j / Σc`. Returns `(j, Δt)`.
pub fn cw_step<R: Rng + ?Sized>(state: &mut SpinState, kind: IntensityKind, beta: f64, rng: &mut R) -> (usize, f64) {
    let rates: Vec<f64> = (0..state.len()).map(|i| intensity(kind, beta, state, i)).collect();
    let total: f64 = rates.iter().sum();
    let dt = Exp::new(total).expect("total intensity is positive").sample(rng);
    let mut u = rng.random::<f64>() * total;
    let mut j = state.len() - 1;
    for (i, r) in rates.iter().enumerate() {
        if u < *r {
            j = i;
            break;
        }
        u -= r;
    }
    state.spins[j] = -state.spins[j];
    state.sum += 2 * state.spins[j] as i64;
    state.time += dt;
    (j, dt)
}

/// Runs from the balanced state until `|M| ≥ ε`; capped at `t_max`.
pub fn cw_run<R: Rng + ?Sized>(
    n: usize,
    kind: IntensityKind,
    beta: f64,
    epsilon: f64,
    t_max: f64,
    rng: &mut R,
) -> Result<HaltingRecord> {
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter(format!("beta {beta} must be positive")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} must lie in (0, 1)")));
    }
    let mut state = SpinState::balanced(n)?;
    loop {
        cw_step(&mut state, kind, beta, rng);
        if state.time() > t_max {
            return Ok(HaltingRecord::new(Algorithm::CurieWeiss, n, epsilon, t_max, true));
        }
        if state.magnetization().abs() >= epsilon {
            return Ok(HaltingRecord::new(Algorithm::CurieWeiss, n, epsilon, state.time(), false));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn intensity_examples() {
        let zero = SpinState::balanced(4).unwrap();
        for kind in [IntensityKind::O, IntensityKind::U, IntensityKind::V] {
            for i in 0..4 {
                assert_eq!(intensity(kind, DEFAULT_BETA, &zero, i), 1.0);
            }
        }
        let up = SpinState::from_spins(vec![1, 1]);
        assert!((intensity(IntensityKind::O, 1.3, &up, 0) - (-1.3f64).exp()).abs() < 1e-15);
        assert!((intensity(IntensityKind::U, 1.3, &up, 0) - (-1.04f64).exp()).abs() < 1e-15);
        assert!((intensity(IntensityKind::V, 1.3, &up, 0) - (-2.6f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn odd_n_rejected() {
        let mut rng = RngStream::new(151, 0).rng();
        assert!(matches!(
            cw_run(3, IntensityKind::O, 1.3, 0.5, 100.0, &mut rng),
            Err(Error::OddN(3))
        ));
    }

    #[test]
    fn steps_flip_one_spin_and_track_magnetization() {
        let mut rng = RngStream::new(152, 0).rng();
        let mut state = SpinState::balanced(20).unwrap();
        for _ in 0..2000 {
            let before = state.clone();
            let (j, dt) = cw_step(&mut state, IntensityKind::V, 1.3, &mut rng);
            assert!(dt > 0.0 && state.time() > before.time());
            let diffs = (0..20).filter(|&i| state.spins()[i] != before.spins()[i]).count();
            assert_eq!(diffs, 1);
            assert_eq!(state.spins()[j], -before.spins()[j]);
            assert!(((state.magnetization() - before.magnetization()).abs() - 0.1).abs() < 1e-12);
            assert!((state.magnetization() - state.recomputed_magnetization()).abs() < 1e-12);
            assert!(state.magnetization().abs() <= 1.0);
        }
    }

    #[test]
    fn holding_time_at_zero_magnetization() {
        let mut rng = RngStream::new(153, 0).rng();
        let steps = 100_000;
        let mut total = 0.0;
        for _ in 0..steps {
            let mut s = SpinState::balanced(2).unwrap();
            total += cw_step(&mut s, IntensityKind::O, 1.3, &mut rng).1;
        }
        let mean = total / steps as f64;
        assert!((mean / 0.5 - 1.0).abs() < 0.02, "{mean}");
    }

    #[test]
    fn flip_frequencies_follow_intensities() {
        let mut rng = RngStream::new(154, 0).rng();
        let base = SpinState::from_spins(vec![1, 1, 1, -1, 1, -1]);
        let rates: Vec<f64> = (0..6).map(|i| intensity(IntensityKind::U, 1.3, &base, i)).collect();
        let total: f64 = rates.iter().sum();
        let draws = 100_000;
        let mut counts = [0usize; 6];
        for _ in 0..draws {
            let mut s = base.clone();
            counts[cw_step(&mut s, IntensityKind::U, 1.3, &mut rng).0] += 1;
        }
        let chi2: f64 = counts
            .iter()
            .zip(&rates)
            .map(|(&c, r)| {
                let e = draws as f64 * r / total;
                (c as f64 - e).powi(2) / e
            })
            .sum();
        // 99.9% quantile of χ² with 5 degrees of freedom.
        assert!(chi2 < 20.52, "{chi2}");
    }

    #[test]
    fn first_step_is_unbiased() {
        for kind in [IntensityKind::O, IntensityKind::U, IntensityKind::V] {
            let mut rng = RngStream::new(155, 0).rng();
            let trials = 20_000;
            let ups = (0..trials)
                .filter(|_| {
                    let mut s = SpinState::balanced(10).unwrap();
                    cw_step(&mut s, kind, 1.3, &mut rng);
                    s.magnetization() > 0.0
                })
                .count();
            let se = (0.25 / trials as f64).sqrt();
            assert!((ups as f64 / trials as f64 - 0.5).abs() < 4.0 * se, "{kind:?}");
        }
    }

    #[test]
    fn two_spins_decide_at_first_flip() {
        let mut rng = RngStream::new(156, 0).rng();
        let trials = 10_000;
        let mean: f64 = (0..trials)
            .map(|_| cw_run(2, IntensityKind::O, 1.3, 0.999, 1e4, &mut rng).unwrap().halting_time)
            .sum::<f64>()
            / trials as f64;
        assert!((mean / 0.5 - 1.0).abs() < 0.03, "{mean}");
    }

    #[test]
    fn cap_is_flagged() {
        let mut rng = RngStream::new(157, 0).rng();
        let rec = cw_run(50, IntensityKind::O, 1.3, 0.5, 1e-6, &mut rng).unwrap();
        assert!(rec.capped);
        assert_eq!(rec.halting_time, 1e-6);
    }
}
