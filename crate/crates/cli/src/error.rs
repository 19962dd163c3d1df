use surrocal::data::DataError;
use surrocal::design::DesignError;
use surrocal::estimators::EstimatorError;
use surrocal::metrics::MetricsError;
use surrocal::simlab::SimError;
use thiserror::Error;

/// Failure classes, each with its own process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("data validation error: {0}")]
    Data(String),
    #[error("estimator assumption violated: {0}")]
    Estimator(String),
    #[error("could not write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Output(_) => 1,
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Estimator(_) => 4,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        match e {
            DataError::InvalidFolds { .. } => CliError::Config(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<EstimatorError> for CliError {
    fn from(e: EstimatorError) -> Self {
        match e {
            EstimatorError::InvalidAlpha(_) | EstimatorError::InvalidLambda(_) => {
                CliError::Config(e.to_string())
            }
            EstimatorError::Data(d) => d.into(),
            EstimatorError::NoTreatment(_) => CliError::Data(e.to_string()),
            _ => CliError::Estimator(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::InvalidConfig(_) | SimError::Incompatible { .. } | SimError::Pool(_) => {
                CliError::Config(e.to_string())
            }
            SimError::Estimator(x) => x.into(),
            SimError::Data(x) => x.into(),
            SimError::MissingArm(_) => CliError::Estimator(e.to_string()),
        }
    }
}

impl From<DesignError> for CliError {
    fn from(e: DesignError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        match e {
            MetricsError::InvalidAlpha(_) => CliError::Config(e.to_string()),
            MetricsError::Support(_)
            | MetricsError::Positivity { .. }
            | MetricsError::DegenerateVariance(_) => CliError::Estimator(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}
