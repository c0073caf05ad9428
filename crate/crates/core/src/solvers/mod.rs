//! Ground-state and heuristic solvers.
//!
//! Every solver returns a [`SampleSet`] whose energies are recomputed from
//! the returned states, and every stochastic solver gives each read its
//! own substream of the master seed, so parallel and sequential runs agree
//! bit for bit.

mod exact;
mod external;
mod sa;
mod sqa;

use thiserror::Error;

use crate::model::{ModelError, SampleMismatch};

pub use exact::{solve_exact, solve_exact_with_cap, DEFAULT_EXACT_CAP};
pub use external::{external_solver, EXTERNAL_ENERGY_TOLERANCE};
pub use sa::{default_beta_range, simulated_annealing, BetaSchedule, SaConfig};
pub use sqa::{inter_slice_coupling, simulated_quantum_annealing, SqaConfig};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("model has {n} spins; exhaustive search is capped at {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("could not run external solver: {0}")]
    Spawn(#[from] std::io::Error),
    #[error("external solver exited with status {status}: {stderr}")]
    NonZeroExit { status: String, stderr: String },
    #[error("external solver produced malformed output: {0}")]
    MalformedOutput(String),
    #[error("external solver energy mismatch: {0}")]
    EnergyMismatch(SampleMismatch),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Tolerance used when re-verifying solver output against the model.
pub const ENERGY_TOLERANCE: f64 = 1e-9;
