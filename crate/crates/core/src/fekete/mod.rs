//! Genetic minimization of the discrete logarithmic energy with an external
//! potential, and the deterministic reference minimum used to halt it.

mod energy;
mod ga;
mod reference;

pub use energy::{energy_gradient, energy_h, energy_hessian, Potential};
pub use ga::{
    crossover, crossover_at, ga_run, mutate, mutate_at, GaOutcome, Individual, Operation, Perturbation, Population,
    INIT_HALF_WIDTH, POPULATION_SIZE,
};
pub use reference::{minimize_from, reference_minimizer, reference_minimum, Minimizer, GRADIENT_TOLERANCE, MULTISTARTS};
