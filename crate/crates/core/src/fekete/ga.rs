use rand::Rng;
use serde::{Deserialize, Serialize};

use super::energy::{energy_h, Potential};
use crate::error::{Error, Result};
use crate::record::{Algorithm, Ensemble, HaltingRecord};

/// Fixed population size.
pub const POPULATION_SIZE: usize = 100;
/// Initial coordinates are iid uniform on `[-INIT_HALF_WIDTH, INIT_HALF_WIDTH]`.
pub const INIT_HALF_WIDTH: f64 = 4.0;

/// The perturbation distribution `D`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Perturbation {
    /// Uniform on `[-a, a]`.
    Uniform(f64),
    /// `±a` with equal probability.
    Coin(f64),
    /// Degenerate at zero; a test hook.
    Zero,
}

impl Perturbation {
    /// Uniform on `[-1/(10N), 1/(10N)]`.
    pub fn uniform(n: usize) -> Self {
        Perturbation::Uniform(0.1 / n as f64)
    }

    /// `±1/(10N)`.
    pub fn coin(n: usize) -> Self {
        Perturbation::Coin(0.1 / n as f64)
    }

    pub fn for_ensemble(e: Ensemble, n: usize) -> Option<Self> {
        match e {
            Ensemble::GaUniform => Some(Self::uniform(n)),
            Ensemble::GaCoin => Some(Self::coin(n)),
            _ => None,
        }
    }

    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            Perturbation::Uniform(a) => rng.random_range(-a..=a),
            Perturbation::Coin(a) => {
                if rng.random::<bool>() {
                    a
                } else {
                    -a
                }
            }
            Perturbation::Zero => 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub coordinates: Vec<f64>,
    pub energy: f64,
}

impl Individual {
    pub fn new(coordinates: Vec<f64>, v: Potential) -> Self {
        let energy = energy_h(&coordinates, v);
        Individual { coordinates, energy }
    }
}

/// Mutation with explicit split points `n1, n2 ∈ 1..=N`: perturbs the first
/// `n1` coordinates, the last `N - n2`, and those in `min+1 ..= max` (1-based).
pub fn mutate_at<R: Rng + ?Sized>(p: &[f64], n1: usize, n2: usize, d: Perturbation, rng: &mut R) -> [Vec<f64>; 3] {
    let n = p.len();
    assert!((1..=n).contains(&n1) && (1..=n).contains(&n2), "split points must lie in 1..=N");
    let perturb = |range: std::ops::Range<usize>, rng: &mut R| {
        let mut child = p.to_vec();
        for x in &mut child[range] {
            *x += d.sample(rng);
        }
        child
    };
    let first = perturb(0..n1, rng);
    let second = perturb(n2..n, rng);
    let third = perturb(n1.min(n2)..n1.max(n2), rng);
    [first, second, third]
}

/// Mutation with `n1, n2` iid uniform on `1..=N`.
pub fn mutate<R: Rng + ?Sized>(p: &[f64], d: Perturbation, rng: &mut R) -> [Vec<f64>; 3] {
    let n = p.len();
    let n1 = rng.random_range(1..=n);
    let n2 = rng.random_range(1..=n);
    mutate_at(p, n1, n2, d, rng)
}

/// Crossover with explicit indices `n1, n2 ∈ 1..=N`: `P` with its `n1`th
/// coordinate replaced by `Q_{n2} + D`, and `Q` with its `n1`th replaced by `P_{n2} + D`.
pub fn crossover_at<R: Rng + ?Sized>(
    p: &[f64],
    q: &[f64],
    n1: usize,
    n2: usize,
    d: Perturbation,
    rng: &mut R,
) -> [Vec<f64>; 2] {
    let n = p.len();
    assert_eq!(n, q.len());
    assert!((1..=n).contains(&n1) && (1..=n).contains(&n2), "indices must lie in 1..=N");
    let mut fourth = p.to_vec();
    fourth[n1 - 1] = q[n2 - 1] + d.sample(rng);
    let mut fifth = q.to_vec();
    fifth[n1 - 1] = p[n2 - 1] + d.sample(rng);
    [fourth, fifth]
}

pub fn crossover<R: Rng + ?Sized>(p: &[f64], q: &[f64], d: Perturbation, rng: &mut R) -> [Vec<f64>; 2] {
    let n = p.len();
    let n1 = rng.random_range(1..=n);
    let n2 = rng.random_range(1..=n);
    crossover_at(p, q, n1, n2, d, rng)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operation {
    Mutation,
    Crossover,
}

/// Members sorted by ascending energy, ties in insertion order.
#[derive(Clone, Debug)]
pub struct Population {
    members: Vec<Individual>,
    generation: usize,
    potential: Potential,
}

impl Population {
    /// `POPULATION_SIZE` members with coordinates iid uniform on `[-4, 4]`.
    pub fn random<R: Rng + ?Sized>(n: usize, v: Potential, rng: &mut R) -> Self {
        let members = (0..POPULATION_SIZE)
            .map(|_| {
                let coords = (0..n).map(|_| rng.random_range(-INIT_HALF_WIDTH..=INIT_HALF_WIDTH)).collect();
                Individual::new(coords, v)
            })
            .collect();
        Self::from_members(members, v)
    }

    pub fn from_members(mut members: Vec<Individual>, v: Potential) -> Self {
        members.sort_by(|a, b| a.energy.total_cmp(&b.energy));
        members.truncate(POPULATION_SIZE);
        Population {
            members,
            generation: 0,
            potential: v,
        }
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn best(&self) -> &Individual {
        &self.members[0]
    }

    fn pick<R: Rng + ?Sized>(&self, rng: &mut R) -> &[f64] {
        &self.members[rng.random_range(0..self.members.len())].coordinates
    }

    /// One generation: a fair coin chooses mutation or crossover, offspring
    /// are appended, and the lowest-energy `POPULATION_SIZE` members survive.
    pub fn evolve<R: Rng + ?Sized>(&mut self, d: Perturbation, rng: &mut R) -> Operation {
        let (op, children): (Operation, Vec<Vec<f64>>) = if rng.random::<bool>() {
            let p = self.pick(rng).to_vec();
            (Operation::Mutation, mutate(&p, d, rng).into())
        } else {
            let p = self.pick(rng).to_vec();
            let q = self.pick(rng).to_vec();
            (Operation::Crossover, crossover(&p, &q, d, rng).into())
        };
        let v = self.potential;
        self.members.extend(children.into_iter().map(|c| Individual::new(c, v)));
        // Stable: ties keep insertion order, so incumbents precede offspring.
        self.members.sort_by(|a, b| a.energy.total_cmp(&b.energy));
        self.members.truncate(POPULATION_SIZE);
        self.generation += 1;
        op
    }
}

#[derive(Clone, Debug)]
pub struct GaOutcome {
    pub record: HaltingRecord,
    /// Best energy at generations `0..=halting_time`.
    pub best_history: Vec<f64>,
}

/// Evolves a random population until `min H - h_ref < ε`; the halting time is
/// the first such generation.
pub fn ga_run<R: Rng + ?Sized>(
    n: usize,
    d: Perturbation,
    v: Potential,
    epsilon: f64,
    h_ref: f64,
    max_iter: usize,
    rng: &mut R,
) -> Result<GaOutcome> {
    if n == 0 {
        return Err(Error::InvalidDimension {
            n,
            reason: "individuals need at least one coordinate",
        });
    }
    if !(epsilon > 0.0) || !h_ref.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need epsilon > 0 and a finite reference, got {epsilon} and {h_ref}"
        )));
    }
    let mut pop = Population::random(n, v, rng);
    let mut best_history = vec![pop.best().energy];
    loop {
        let k = pop.generation();
        if pop.best().energy - h_ref < epsilon {
            return Ok(GaOutcome {
                record: HaltingRecord::new(Algorithm::Genetic, n, epsilon, k as f64, false),
                best_history,
            });
        }
        if k == max_iter {
            return Ok(GaOutcome {
                record: HaltingRecord::new(Algorithm::Genetic, n, epsilon, k as f64, true),
                best_history,
            });
        }
        pop.evolve(d, rng);
        best_history.push(pop.best().energy);
    }
}
