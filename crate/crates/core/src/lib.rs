//! Calibrated estimation for studies that pair a small gold-standard human
//! sample with a large pool of surrogate (model-generated) predictions.
//!
//! The crate is split by concern:
//!
//! * [`data`]: dataset containers, CSV ingestion and fold splitting.
//! * [`estimators`]: human-only, naive, prediction-powered, design-based,
//!   plug-in debiased and relationship-model estimators, plus the
//!   moment-violation diagnostic.
//! * [`design`]: effective sample size, power and budget allocation for
//!   mixed human/surrogate designs.
//! * [`simlab`]: synthetic data-generating processes and a deterministic
//!   Monte Carlo replication engine.
//! * [`metrics`]: agreement rates, distributional distances and
//!   scenario-population prediction risk.

pub mod data;
pub mod design;
pub mod estimators;
pub mod linalg;
pub mod metrics;
pub mod simlab;
pub mod stats;

pub use data::{FoldAssignment, Schema, SharedDataset, SurrogateDataset};
pub use design::{DesignInputs, DesignPlan};
pub use estimators::{EstimateReport, LambdaMode, MeanMethod, Method};
pub use simlab::ReplicationSummary;
