//! Heuristic agreement metrics between human and surrogate studies, 1-D and
//! discrete distributional distances, and the finite-population prediction
//! risk estimator.
//!
//! Logarithms are natural throughout.

mod agreement;
mod distance;
mod risk;

use thiserror::Error;

pub use agreement::{
    agreement_rates, effect_correlation, load_effect_pairs, read_effect_pairs, Agreement,
    EffectPair,
};
pub use distance::{kl_discrete, total_variation, wasserstein1};
pub use risk::{
    estimate_risk, load_scenarios, read_scenarios, Loss, RiskEstimate, ScenarioSample,
};

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("{what} needs at least {need} entries, got {got}")]
    TooFew {
        what: &'static str,
        need: usize,
        got: usize,
    },
    #[error("{0} has zero variance")]
    DegenerateVariance(&'static str),
    #[error("vectors have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("{which} is not a probability vector: {reason}")]
    NotSimplex { which: &'static str, reason: String },
    #[error("q is zero at index {0} where p is positive")]
    Support(usize),
    #[error("scenario {scenario:?}: predicted probability of outcome {outcome} is {prob}; log loss needs it > 0")]
    Positivity {
        scenario: String,
        outcome: usize,
        prob: f64,
    },
    #[error("scenario {scenario:?}: {reason}")]
    InvalidScenario { scenario: String, reason: String },
    #[error("effect pair {study_id:?}: {reason}")]
    InvalidPair { study_id: String, reason: String },
    #[error("value is not finite: {0}")]
    NonFinite(&'static str),
    #[error("alpha must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Format(String),
}

pub(crate) fn check_alpha(alpha: f64) -> Result<(), MetricsError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(MetricsError::InvalidAlpha(alpha))
    }
}

pub(crate) fn open(path: &std::path::Path) -> Result<std::fs::File, MetricsError> {
    std::fs::File::open(path).map_err(|source| MetricsError::Io {
        path: path.display().to_string(),
        source,
    })
}
