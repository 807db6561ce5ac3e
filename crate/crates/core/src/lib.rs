//! Halting-time statistics of numerical algorithms run on random inputs.
//!
//! Each algorithm runs to a halting criterion on inputs drawn from a random
//! ensemble; the resulting halting times are centered by their sample mean
//! and scaled by their sample standard deviation, and the normalized samples
//! from different ensembles are compared for collapse onto one curve.

pub mod curie_weiss;
pub mod dirichlet;
pub mod eigen;
pub mod ensembles;
pub mod error;
pub mod fekete;
pub mod krylov;
pub mod linalg;
pub mod record;
pub mod rng;
pub mod runner;
pub mod stats;

pub use error::{Error, Result};
pub use record::{Algorithm, Ensemble, HaltingRecord};
pub use rng::RngStream;
