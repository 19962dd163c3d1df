//! Calibration estimators.
//!
//! Every estimator is a pure function of read-only datasets and returns an
//! [`EstimateReport`] with a normal-approximation confidence interval.
//!
//! Two assumptions cannot be checked from data and are left to the caller:
//! the surrogate model must not have been trained on either table, and the
//! shared and surrogate rows must be draws from the same covariate
//! distribution (or, for [`dsl_mean`], the shared rows must carry known
//! labeling probabilities).

mod diagnostic;
mod mean;
mod plugin;
mod regression;

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{DataError, SharedDataset, SurrogateDataset};
use crate::linalg::LinalgError;
use crate::stats::z_critical;

pub use diagnostic::{moment_diagnostic, MomentDiagnostic};
pub use mean::{
    diff_in_means, dsl_mean, human_mean, naive_surrogate_mean, ppi_mean,
    relationship_correct_mean, relationship_model, tune_lambda_mean, RelationshipModel,
};
pub use plugin::{cross_fit_bias, plugin_debias_mean, BiasKind, BiasModel, CrossFittedBias};
pub use regression::{human_ols, ppi_ols, surrogate_ols, CoefficientEstimate};

#[derive(Debug, Error)]
pub enum EstimatorError {
    #[error("{what} needs at least {need} rows, got {got}")]
    TooFewRows {
        what: &'static str,
        need: usize,
        got: usize,
    },
    #[error("surrogate predictions have zero variance on the shared rows")]
    DegeneratePredictor,
    #[error("alpha must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("inverse-probability weights are not finite")]
    NonFiniteWeights,
    #[error("no treatment column is designated in the {0} data")]
    NoTreatment(&'static str),
    #[error("treatment column has zero variance")]
    DegenerateTreatment,
    #[error("arm z = {arm} has {got} rows in the {table} data; at least {need} required")]
    EmptyArm {
        arm: u8,
        table: &'static str,
        got: usize,
        need: usize,
    },
    #[error("lambda must be finite, got {0}")]
    InvalidLambda(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Data(#[from] DataError),
}

/// Which estimator produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    HumanOnly,
    NaiveSurrogate,
    Ppi,
    Dsl,
    PluginDebias,
    Relationship,
    TwinAte,
    TisaGap,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::HumanOnly => "human_only",
            Method::NaiveSurrogate => "naive_surrogate",
            Method::Ppi => "ppi",
            Method::Dsl => "dsl",
            Method::PluginDebias => "plugin_debias",
            Method::Relationship => "relationship",
            Method::TwinAte => "twin_ate",
            Method::TisaGap => "tisa_gap",
        }
    }
}

/// Machine-readable notes attached to a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Warning {
    /// Automatic lambda tuning hit a zero-variance predictor and fell back
    /// to the human-only estimator (lambda = 0).
    DegeneratePredictor,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaMode {
    Auto,
    Fixed(f64),
}

/// A point estimate with standard error and normal confidence interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub estimate: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub alpha: f64,
    pub method: Method,
    pub lambda_used: Option<f64>,
    pub ess: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<Warning>,
}

pub const CSV_HEADER: [&str; 9] = [
    "estimate",
    "std_error",
    "ci_low",
    "ci_high",
    "alpha",
    "method",
    "lambda_used",
    "ess",
    "warning",
];

impl EstimateReport {
    /// Builds the interval `estimate ± z_{1-alpha/2} std_error`.
    pub fn normal(estimate: f64, std_error: f64, alpha: f64, method: Method) -> Self {
        let half = z_critical(alpha) * std_error;
        Self {
            estimate,
            std_error,
            ci_low: estimate - half,
            ci_high: estimate + half,
            alpha,
            method,
            lambda_used: None,
            ess: None,
            warning: None,
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda_used = Some(lambda);
        self
    }

    pub fn with_ess(mut self, ess: Option<f64>) -> Self {
        self.ess = ess;
        self
    }

    pub fn with_warning(mut self, warning: Option<Warning>) -> Self {
        self.warning = warning;
        self
    }

    pub fn covers(&self, truth: f64) -> bool {
        self.ci_low <= truth && truth <= self.ci_high
    }

    pub fn ci_width(&self) -> f64 {
        self.ci_high - self.ci_low
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn csv_record(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        vec![
            self.estimate.to_string(),
            self.std_error.to_string(),
            self.ci_low.to_string(),
            self.ci_high.to_string(),
            self.alpha.to_string(),
            self.method.as_str().to_string(),
            opt(self.lambda_used),
            opt(self.ess),
            match self.warning {
                Some(Warning::DegeneratePredictor) => "degenerate_predictor".into(),
                None => String::new(),
            },
        ]
    }

    /// Header plus one data row.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(CSV_HEADER)?;
        out.write_record(self.csv_record())?;
        out.flush()?;
        Ok(())
    }
}

/// Effective human sample size implied by a standard-error ratio.
pub(crate) fn ess_from_se(n: usize, se_human: f64, se: f64) -> Option<f64> {
    if se > 0.0 {
        Some(n as f64 * (se_human / se).powi(2))
    } else if se_human == 0.0 {
        Some(n as f64)
    } else {
        None
    }
}

pub fn check_alpha(alpha: f64) -> Result<(), EstimatorError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(EstimatorError::InvalidAlpha(alpha))
    }
}

/// Selector over the mean estimators, used by [`diff_in_means`], the
/// replication engine and the command line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanMethod {
    HumanOnly,
    NaiveSurrogate,
    Ppi(LambdaMode),
    Dsl,
    PluginDebias {
        bias: BiasKind,
        k_folds: usize,
        seed: u64,
    },
    Relationship,
}

impl MeanMethod {
    pub fn estimate(
        &self,
        shared: &SharedDataset,
        surrogate: &SurrogateDataset,
        alpha: f64,
    ) -> Result<EstimateReport, EstimatorError> {
        match *self {
            MeanMethod::HumanOnly => human_mean(shared, alpha),
            MeanMethod::NaiveSurrogate => naive_surrogate_mean(surrogate, alpha),
            MeanMethod::Ppi(lambda) => ppi_mean(shared, surrogate, lambda, alpha),
            MeanMethod::Dsl => dsl_mean(shared, surrogate, alpha),
            MeanMethod::PluginDebias {
                bias,
                k_folds,
                seed,
            } => plugin_debias_mean(shared, surrogate, bias, k_folds, seed, alpha),
            MeanMethod::Relationship => relationship_correct_mean(shared, surrogate, alpha),
        }
    }

    pub fn method(&self) -> Method {
        match self {
            MeanMethod::HumanOnly => Method::HumanOnly,
            MeanMethod::NaiveSurrogate => Method::NaiveSurrogate,
            MeanMethod::Ppi(_) => Method::Ppi,
            MeanMethod::Dsl => Method::Dsl,
            MeanMethod::PluginDebias { .. } => Method::PluginDebias,
            MeanMethod::Relationship => Method::Relationship,
        }
    }
}
