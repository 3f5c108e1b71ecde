//! Verification workbench for Mermin's n-player parity game.
//!
//! Every player receives one bit and answers one bit. Questions are promised
//! to carry an even number of ones, and the players win when the parity of
//! their answer equals half the Hamming weight of the question, modulo two.
//!
//! The crate is organised by who plays:
//!
//! - [`game`]: questions, answers, the promise and the winning condition.
//! - [`quantum`]: the GHZ-state strategy, analytically and as a dense
//!   statevector oracle.
//! - [`classical`]: deterministic and probabilistic strategies, scored with
//!   exact Gaussian-integer and rational arithmetic.
//! - [`noise`]: bit-flip and detection-inefficiency models, their thresholds,
//!   and the error-free classical sweep.
//! - [`rng`]: seed-deterministic, splittable random streams.

pub mod classical;
pub mod error;
pub mod game;
pub mod noise;
pub mod quantum;
pub mod rng;

pub use error::{Error, Result};
pub use game::{Answer, GameConfig, Question, Symbol};

/// Exact rational used for every proportion and probability.
pub type Rational = num_rational::Ratio<i128>;

/// Size limits for the exponential sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Limits {
    /// Largest n for the 4^n deterministic strategy sweep.
    pub exhaustive: usize,
    /// Largest n for which the full optimal set is materialized.
    pub optimal_set: usize,
    /// Largest n for the 9^n extended (⊥-allowing) strategy sweep.
    pub extended: usize,
    /// Largest n for the 2^n dense statevector.
    pub dense: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            exhaustive: 8,
            optimal_set: 6,
            extended: 5,
            dense: 20,
        }
    }
}
