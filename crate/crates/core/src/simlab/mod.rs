//! Simulation laboratory: synthetic data-generating processes with known
//! truth and a deterministic Monte Carlo replication engine.
//!
//! # Seeding
//!
//! Replication `r` of a run with master seed `m` uses
//! `replication_seed(m, r) = splitmix64(splitmix64(m) ^ r)`, where
//! `splitmix64` is the standard SplitMix64 finaliser (increment
//! `0x9E3779B97F4A7C15`, multipliers `0xBF58476D1CE4E5B9` and
//! `0x94D049BB133111EB`, shifts 30/27/31). Each replication then draws from
//! a ChaCha8 stream seeded with that value, so a replication's data depend
//! only on `(m, r)` and never on scheduling.

mod dgp;
mod replicate;
mod twin;

use thiserror::Error;

use crate::data::DataError;
use crate::estimators::EstimatorError;

pub use dgp::{
    gen_binary_dgp, gen_mean_dgp, gen_ols_bias_dgp, BiasStructure, BinaryDgpConfig,
    GeneratedData, MeanDgpConfig, OlsBiasConfig,
};
pub use replicate::{
    replicate, run_replications, summarize, DgpConfig, EstimatorSpec, OlsMethod,
    ReplicationSummary, SimulationConfig, SUMMARY_CSV_HEADER,
};
pub use twin::{
    gen_twin_dgp, tisa_gap, twin_ate, ObservedTwinSample, PotentialOutcomes, TwinDgpConfig,
    TwinTable, TwinWorld,
};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("estimator {estimator} cannot run on the {dgp} process: {reason}")]
    Incompatible {
        estimator: String,
        dgp: &'static str,
        reason: String,
    },
    #[error("twin table is missing an arm: {0}")]
    MissingArm(String),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

/// SplitMix64 finaliser.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replication `r` under `master_seed`.
pub fn replication_seed(master_seed: u64, r: u64) -> u64 {
    splitmix64(splitmix64(master_seed) ^ r)
}
