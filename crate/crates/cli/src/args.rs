use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use surrocal::estimators::LambdaMode;

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "surrocal",
    version,
    about = "Calibrate surrogate (e.g. LLM) predictions against human outcomes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate a mean, an arm difference or regression coefficients.
    Estimate(EstimateArgs),
    /// Effective sample size, power and budget allocation.
    Design(DesignArgs),
    /// Monte Carlo replications on a synthetic process with known truth.
    Simulate(SimulateArgs),
    /// Simulate a digital-twin experiment and report the twin ATE and gap.
    Twin(TwinArgs),
    /// Agreement and distance metrics between human and surrogate results.
    Metrics(MetricsArgs),
    /// Finite-population prediction risk over scenarios.
    Risk(RiskArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

pub fn parse_lambda(s: &str) -> Result<LambdaMode, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(LambdaMode::Auto);
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(LambdaMode::Fixed(v)),
        _ => Err(format!("expected \"auto\" or a finite number, got {s:?}")),
    }
}

pub fn parse_alpha(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v < 1.0 => Ok(v),
        _ => Err(format!("alpha must be a number in (0, 1), got {s:?}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum MethodArg {
    HumanOnly,
    NaiveSurrogate,
    Ppi,
    Dsl,
    PluginDebias,
    Relationship,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// Population mean of the outcome.
    Mean,
    /// Difference in outcome means between z = 1 and z = 0.
    Diff,
    /// OLS coefficients of the outcome on the covariates.
    Ols,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BiasArg {
    Constant,
    Linear,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ColumnArgs {
    #[arg(long, default_value = "id")]
    pub id_col: String,
    #[arg(long, default_value = "y")]
    pub y_col: String,
    #[arg(long, default_value = "yhat")]
    pub yhat_col: String,
    /// Treatment column, used when present in the header.
    #[arg(long, default_value = "z")]
    pub z_col: String,
    /// Labeling-probability column, used when present in the header.
    #[arg(long, default_value = "pi")]
    pub pi_col: String,
    /// Columns whose names start with this prefix are covariates.
    #[arg(long, default_value = "x_", conflicts_with = "covariates")]
    pub covariate_prefix: String,
    /// Explicit comma-separated covariate columns.
    #[arg(long, value_delimiter = ',')]
    pub covariates: Option<Vec<String>>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EstimateArgs {
    /// Jointly labeled CSV (human outcome and prediction per row).
    #[arg(long)]
    pub shared: PathBuf,
    /// Surrogate-only CSV (prediction per row).
    #[arg(long)]
    pub surrogate: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Ppi)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = Target::Mean)]
    pub target: Target,
    /// "auto" or a fixed value; used by ppi.
    #[arg(long, default_value = "auto", value_parser = parse_lambda)]
    pub lambda: LambdaMode,
    /// Bias model for plugin_debias.
    #[arg(long, value_enum, default_value_t = BiasArg::Constant)]
    pub bias: BiasArg,
    #[arg(long, default_value_t = 5)]
    pub k_folds: usize,
    /// Fold seed; required by plugin_debias.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "0.05", value_parser = parse_alpha)]
    pub alpha: f64,
    /// Also report the treatment/error moment diagnostic.
    #[arg(long)]
    pub diagnostic: bool,
    #[command(flatten)]
    pub columns: ColumnArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DesignArgs {
    /// Outcome/prediction correlation; estimated from --pilot when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    /// Pilot jointly labeled CSV used for rho and sigma_y.
    #[arg(long)]
    pub pilot: Option<PathBuf>,
    #[arg(long)]
    pub sigma_y: Option<f64>,
    /// Target difference in arm means.
    #[arg(long, allow_hyphen_values = true)]
    pub effect: f64,
    #[arg(long, default_value = "0.05", value_parser = parse_alpha)]
    pub alpha: f64,
    #[arg(long)]
    pub cost_human: f64,
    #[arg(long)]
    pub cost_surrogate: f64,
    #[arg(long)]
    pub budget: f64,
    /// Evaluate this allocation instead of searching.
    #[arg(long, requires = "n_surrogate")]
    pub n_human: Option<u64>,
    #[arg(long, requires = "n_human")]
    pub n_surrogate: Option<u64>,
    #[command(flatten)]
    pub columns: ColumnArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum DgpArg {
    Mean,
    OlsBias,
    Binary,
    Twin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum SimEstimatorArg {
    HumanOnly,
    NaiveSurrogate,
    Ppi,
    Dsl,
    PluginDebias,
    Relationship,
    TwinAte,
    TisaGap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum BiasStructureArg {
    None,
    Constant,
    Linear,
    ZAligned,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    /// TOML simulation file (dgp, estimator, reps, seed, alpha); excludes
    /// the process and estimator flags.
    #[arg(long, conflicts_with_all = ["dgp", "estimators", "reps", "seed", "target"])]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, required_unless_present = "config")]
    pub dgp: Option<DgpArg>,
    /// Estimator to run; repeat for several. Defaults depend on --dgp.
    #[arg(long = "estimator", value_enum)]
    pub estimators: Vec<SimEstimatorArg>,
    #[arg(long, value_enum)]
    pub target: Option<Target>,
    /// Coefficient index for --target ols (0 = intercept).
    #[arg(long)]
    pub term: Option<usize>,
    #[arg(long, default_value = "auto", value_parser = parse_lambda)]
    pub lambda: LambdaMode,
    #[arg(long, value_enum, default_value_t = BiasArg::Constant)]
    pub plugin_bias: BiasArg,
    #[arg(long, default_value_t = 5)]
    pub k_folds: usize,
    #[arg(long, required_unless_present = "config")]
    pub reps: Option<usize>,
    #[arg(long, required_unless_present = "config")]
    pub seed: Option<u64>,
    #[arg(long, default_value = "0.05", value_parser = parse_alpha)]
    pub alpha: f64,
    /// Worker threads (0 = all cores). Never changes results.
    #[arg(long, default_value_t = 0)]
    #[serde(skip)]
    pub workers: usize,

    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub big_n: Option<usize>,
    /// Mean process: outcome mean.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Mean process: outcome standard deviation.
    #[arg(long)]
    pub sigma_y: Option<f64>,
    /// Mean process: Corr(y, yhat).
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    /// Mean process: systematic prediction error structure.
    #[arg(long, value_enum)]
    pub bias: Option<BiasStructureArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub bias_size: Option<f64>,
    /// OLS-bias process: prediction-error shift aligned with z.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// OLS-bias and twin processes: arm-specific coefficients.
    #[arg(long, allow_hyphen_values = true)]
    pub beta0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta1: Option<f64>,
    /// Binary process: predictor accuracy within each arm.
    #[arg(long)]
    pub accuracy: Option<f64>,
    /// Twin process: treatment effect.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta_mean: Option<f64>,
    #[arg(long)]
    pub interaction: bool,

    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TwinArgs {
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub tau: f64,
    #[arg(long, default_value_t = 1.0)]
    pub theta_sd: f64,
    #[arg(long, default_value_t = 0.5)]
    pub eps_sd: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub eta_mean: f64,
    #[arg(long, default_value_t = 0.5)]
    pub eta_sd: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub beta0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub beta1: f64,
    #[arg(long, default_value_t = 0.5)]
    pub xi_sd: f64,
    /// Multiplicative (eta * beta_z) instead of additive twin error.
    #[arg(long)]
    pub interaction: bool,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "0.05", value_parser = parse_alpha)]
    pub alpha: f64,
    /// Also write the observed (assigned-arm only) sample as CSV.
    #[arg(long)]
    #[serde(skip)]
    pub export_observed: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MetricsArgs {
    /// Effect-pair CSV: study_id,human_effect,human_se,llm_effect,llm_se.
    #[arg(long)]
    pub pairs: Option<PathBuf>,
    /// Real-valued response samples (first column of each CSV).
    #[arg(long, requires = "sample_b")]
    pub sample_a: Option<PathBuf>,
    #[arg(long, requires = "sample_a")]
    pub sample_b: Option<PathBuf>,
    /// Categorical distributions as comma-separated probabilities.
    #[arg(long, value_delimiter = ',', requires = "q")]
    pub p: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', requires = "p")]
    pub q: Option<Vec<f64>>,
    #[arg(long, default_value = "0.05", value_parser = parse_alpha)]
    pub alpha: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum LossArg {
    LogLoss,
    SquaredError,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RiskArgs {
    /// Scenario-level predictions: scenario_id,p_0,...,p_{K-1}.
    #[arg(long)]
    pub predictions: PathBuf,
    /// Response-level outcomes: scenario_id,outcome.
    #[arg(long)]
    pub outcomes: PathBuf,
    #[arg(long, value_enum, default_value_t = LossArg::LogLoss)]
    pub loss: LossArg,
    #[arg(long, default_value = "0.05", value_parser = parse_alpha)]
    pub alpha: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}
