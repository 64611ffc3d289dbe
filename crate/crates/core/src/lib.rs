//! Deviation-test reputation system under a maximally lying peer.
//!
//! * [`model`]: parameters, counters and the deviation test.
//! * [`sim`]: the seeded two-counter Markov chain and its rescaled family.
//! * [`meanfield`]: the limit ODE, its exact piecewise solution, fixed points
//!   and phase-transition thresholds.
//! * [`experiments`]: ensembles, occupancy, sweeps and the convergence study.
//! * [`cli`]: scenario files and artifact emission behind the `devrep` binary.

// NaN-rejecting range checks are written as `!(x > 0.0)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod experiments;
pub mod meanfield;
pub mod model;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
pub use model::{deviation_test, initial_state, reputation, validate_params, ModelParams, ReputationState};
