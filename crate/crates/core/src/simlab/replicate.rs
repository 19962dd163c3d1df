//! Monte Carlo replication engine.
//!
//! Replications run on a dedicated worker pool and are collected in
//! replication order, and the summary is reduced with pairwise summation
//! over that fixed order. Summaries are therefore bit-identical for any
//! worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::estimators::{
    diff_in_means, human_ols, ppi_ols, surrogate_ols, EstimateReport, LambdaMode, MeanMethod,
};
use crate::stats::{mean, normal_cdf, pairwise_sum, variance};

use super::dgp::{
    gen_binary_dgp, gen_mean_dgp, gen_ols_bias_dgp, BinaryDgpConfig, GeneratedData,
    MeanDgpConfig, OlsBiasConfig,
};
use super::twin::{gen_twin_dgp, tisa_gap, twin_ate, TwinDgpConfig};
use super::{replication_seed, SimError};

/// A data-generating process; its own `seed` field is overwritten per
/// replication.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DgpConfig {
    Mean(MeanDgpConfig),
    OlsBias(OlsBiasConfig),
    Binary(BinaryDgpConfig),
    Twin(TwinDgpConfig),
}

impl DgpConfig {
    pub fn name(&self) -> &'static str {
        match self {
            DgpConfig::Mean(_) => "mean",
            DgpConfig::OlsBias(_) => "ols_bias",
            DgpConfig::Binary(_) => "binary",
            DgpConfig::Twin(_) => "twin",
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        let mut c = *self;
        match &mut c {
            DgpConfig::Mean(m) => m.seed = seed,
            DgpConfig::OlsBias(m) => m.seed = seed,
            DgpConfig::Binary(m) => m.seed = seed,
            DgpConfig::Twin(m) => m.seed = seed,
        }
        c
    }

    fn generate(&self) -> Result<GeneratedData, SimError> {
        match self {
            DgpConfig::Mean(c) => gen_mean_dgp(c),
            DgpConfig::OlsBias(c) => gen_ols_bias_dgp(c),
            DgpConfig::Binary(c) => gen_binary_dgp(c),
            DgpConfig::Twin(_) => unreachable!("twin worlds are not tabular"),
        }
    }

    /// Population regression coefficients of `y` on the process covariates
    /// (intercept first).
    fn coefficients(&self) -> Vec<f64> {
        match self {
            DgpConfig::Mean(c) => vec![c.mu, 0.0, 0.0],
            DgpConfig::OlsBias(c) => vec![c.beta0, c.beta1],
            DgpConfig::Binary(c) => {
                let (p0, p1) = (c.positive_rate(0), c.positive_rate(1));
                vec![p0, p1 - p0]
            }
            DgpConfig::Twin(_) => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OlsMethod {
    Human,
    NaiveSurrogate,
    Ppi(LambdaMode),
}

/// What each replication estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorSpec {
    /// Population mean of `y`.
    Mean(MeanMethod),
    /// Difference in arm means of `y`.
    DiffInMeans(MeanMethod),
    /// One regression coefficient, `term` 0 being the intercept.
    Ols { method: OlsMethod, term: usize },
    /// Twin within-unit contrast, targeting the human ATE.
    TwinAte,
    /// Arm-wise twin error gap on the observed units.
    TisaGap,
}

fn mean_label(m: &MeanMethod) -> String {
    match m {
        MeanMethod::Ppi(LambdaMode::Fixed(l)) => format!("ppi(lambda={l})"),
        other => other.method().as_str().to_string(),
    }
}

impl EstimatorSpec {
    pub fn label(&self) -> String {
        match self {
            EstimatorSpec::Mean(m) => mean_label(m),
            EstimatorSpec::DiffInMeans(m) => format!("diff_in_means:{}", mean_label(m)),
            EstimatorSpec::Ols { method, term } => {
                let m = match method {
                    OlsMethod::Human => "human_only".to_string(),
                    OlsMethod::NaiveSurrogate => "naive_surrogate".to_string(),
                    OlsMethod::Ppi(LambdaMode::Auto) => "ppi".to_string(),
                    OlsMethod::Ppi(LambdaMode::Fixed(l)) => format!("ppi(lambda={l})"),
                };
                format!("ols[{term}]:{m}")
            }
            EstimatorSpec::TwinAte => "twin_ate".into(),
            EstimatorSpec::TisaGap => "tisa_gap".into(),
        }
    }

    fn incompatible(&self, dgp: &DgpConfig, reason: &str) -> SimError {
        SimError::Incompatible {
            estimator: self.label(),
            dgp: dgp.name(),
            reason: reason.to_string(),
        }
    }

    /// The population value this estimator targets under `dgp`.
    pub fn truth(&self, dgp: &DgpConfig) -> Result<f64, SimError> {
        match (self, dgp) {
            (EstimatorSpec::TwinAte, DgpConfig::Twin(c)) => Ok(c.tau),
            (EstimatorSpec::TisaGap, DgpConfig::Twin(c)) => Ok(c.twin_error_gap()),
            (EstimatorSpec::TwinAte | EstimatorSpec::TisaGap, _) => {
                Err(self.incompatible(dgp, "needs paired twin potential outcomes"))
            }
            (_, DgpConfig::Twin(_)) => {
                Err(self.incompatible(dgp, "twin worlds have no surrogate-only table"))
            }
            (EstimatorSpec::Mean(_), DgpConfig::Mean(c)) => Ok(c.mu),
            (EstimatorSpec::Mean(_), DgpConfig::OlsBias(c)) => Ok(c.beta0 + 0.5 * c.beta1),
            (EstimatorSpec::Mean(_), DgpConfig::Binary(c)) => Ok(c.truth()),
            (EstimatorSpec::DiffInMeans(_), d) => Ok(*d.coefficients().last().unwrap_or(&0.0)),
            (EstimatorSpec::Ols { term, .. }, d) => d
                .coefficients()
                .get(*term)
                .copied()
                .ok_or_else(|| self.incompatible(dgp, "coefficient index out of range")),
        }
    }

    fn run(&self, dgp: &DgpConfig, alpha: f64) -> Result<EstimateReport, SimError> {
        if let DgpConfig::Twin(c) = dgp {
            let world = gen_twin_dgp(c)?;
            return match self {
                EstimatorSpec::TwinAte => twin_ate(&world.twin, alpha),
                EstimatorSpec::TisaGap => tisa_gap(&world.observed(), alpha),
                _ => Err(self.incompatible(dgp, "twin worlds have no surrogate-only table")),
            };
        }
        let data = dgp.generate()?;
        let (s, u) = (&data.shared, &data.surrogate);
        match self {
            EstimatorSpec::Mean(m) => Ok(m.estimate(s, u, alpha)?),
            EstimatorSpec::DiffInMeans(m) => Ok(diff_in_means(s, u, m, alpha)?),
            EstimatorSpec::Ols { method, term } => {
                let coefs = match method {
                    OlsMethod::Human => human_ols(s, alpha)?,
                    OlsMethod::NaiveSurrogate => surrogate_ols(u, alpha)?,
                    OlsMethod::Ppi(l) => ppi_ols(s, u, *l, alpha)?,
                };
                coefs
                    .into_iter()
                    .nth(*term)
                    .map(|c| c.report)
                    .ok_or_else(|| self.incompatible(dgp, "coefficient index out of range"))
            }
            EstimatorSpec::TwinAte | EstimatorSpec::TisaGap => {
                Err(self.incompatible(dgp, "needs paired twin potential outcomes"))
            }
        }
    }
}

/// Aggregate of a Monte Carlo run against a known truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationSummary {
    pub method: String,
    pub replications: usize,
    pub truth: f64,
    pub mean_estimate: f64,
    pub mean_bias: f64,
    pub empirical_coverage: f64,
    pub mean_ci_width: f64,
    /// Sample variance of the estimates across replications.
    pub variance: f64,
    /// Monte Carlo standard error of `mean_estimate`.
    pub mc_std_error: f64,
}

pub const SUMMARY_CSV_HEADER: [&str; 9] = [
    "method",
    "replications",
    "truth",
    "mean_estimate",
    "mean_bias",
    "empirical_coverage",
    "mean_ci_width",
    "variance",
    "mc_std_error",
];

impl ReplicationSummary {
    pub fn csv_record(&self) -> Vec<String> {
        vec![
            self.method.clone(),
            self.replications.to_string(),
            self.truth.to_string(),
            self.mean_estimate.to_string(),
            self.mean_bias.to_string(),
            self.empirical_coverage.to_string(),
            self.mean_ci_width.to_string(),
            self.variance.to_string(),
            self.mc_std_error.to_string(),
        ]
    }

    /// Standardised distance of the mean estimate from `target` in Monte
    /// Carlo standard errors.
    pub fn z_from(&self, target: f64) -> f64 {
        (self.mean_estimate - target) / self.mc_std_error
    }

    /// Two-sided p-value style check helper: probability mass of a normal
    /// beyond `|z_from(target)|`.
    pub fn tail_probability(&self, target: f64) -> f64 {
        2.0 * (1.0 - normal_cdf(self.z_from(target).abs()))
    }
}

/// Reduces per-replication reports, taken in replication order.
pub fn summarize(method: String, truth: f64, reports: &[EstimateReport]) -> ReplicationSummary {
    let r = reports.len();
    let estimates: Vec<f64> = reports.iter().map(|x| x.estimate).collect();
    let covered: Vec<f64> = reports
        .iter()
        .map(|x| if x.covers(truth) { 1.0 } else { 0.0 })
        .collect();
    let widths: Vec<f64> = reports.iter().map(EstimateReport::ci_width).collect();
    let mean_estimate = mean(&estimates);
    let var = variance(&estimates);
    ReplicationSummary {
        method,
        replications: r,
        truth,
        mean_estimate,
        mean_bias: mean_estimate - truth,
        empirical_coverage: pairwise_sum(&covered) / r as f64,
        mean_ci_width: mean(&widths),
        variance: var,
        mc_std_error: (var / r as f64).sqrt(),
    }
}

/// Runs `reps` replications and returns their reports in replication
/// order. `workers = 0` uses the global pool size.
pub fn replicate(
    dgp: &DgpConfig,
    spec: &EstimatorSpec,
    alpha: f64,
    reps: usize,
    master_seed: u64,
    workers: usize,
) -> Result<Vec<EstimateReport>, SimError> {
    if reps < 1 {
        return Err(SimError::InvalidConfig("at least one replication required".into()));
    }
    crate::estimators::check_alpha(alpha)?;
    spec.truth(dgp)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SimError::Pool(e.to_string()))?;
    pool.install(|| {
        (0..reps)
            .into_par_iter()
            .map(|r| spec.run(&dgp.with_seed(replication_seed(master_seed, r as u64)), alpha))
            .collect()
    })
}

pub fn run_replications(
    dgp: &DgpConfig,
    spec: &EstimatorSpec,
    alpha: f64,
    reps: usize,
    master_seed: u64,
    workers: usize,
) -> Result<ReplicationSummary, SimError> {
    let truth = spec.truth(dgp)?;
    let reports = replicate(dgp, spec, alpha, reps, master_seed, workers)?;
    Ok(summarize(spec.label(), truth, &reports))
}

/// Complete description of a simulation run, as read from a TOML file.
///
/// ```toml
/// reps = 500
/// seed = 11
/// alpha = 0.05
///
/// [dgp]
/// kind = "ols_bias"
/// delta = 0.4
///
/// [estimator.ols]
/// method = { ppi = { fixed = 1.0 } }
/// term = 1
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub dgp: DgpConfig,
    pub estimator: EstimatorSpec,
    pub reps: usize,
    pub seed: u64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

fn default_alpha() -> f64 {
    0.05
}

impl SimulationConfig {
    pub fn from_toml(text: &str) -> Result<Self, SimError> {
        toml::from_str(text).map_err(|e| SimError::InvalidConfig(e.to_string()))
    }

    pub fn run(&self, workers: usize) -> Result<ReplicationSummary, SimError> {
        run_replications(&self.dgp, &self.estimator, self.alpha, self.reps, self.seed, workers)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simlab::BiasStructure;

    fn small_mean() -> DgpConfig {
        DgpConfig::Mean(MeanDgpConfig {
            bias: BiasStructure::Constant(0.3),
            n: 60,
            big_n: 300,
            ..MeanDgpConfig::default()
        })
    }

    #[test]
    fn single_replication_matches_single_run() {
        let dgp = small_mean();
        let spec = EstimatorSpec::Mean(MeanMethod::Dsl);
        let s = run_replications(&dgp, &spec, 0.05, 1, 99, 1).unwrap();
        let one = spec.run(&dgp.with_seed(replication_seed(99, 0)), 0.05).unwrap();
        assert_eq!(s.mean_estimate, one.estimate);
        assert_eq!(s.mean_ci_width, one.ci_width());
        assert_eq!(s.empirical_coverage, if one.covers(1.0) { 1.0 } else { 0.0 });
        assert_eq!(s.variance, 0.0);
    }

    #[test]
    fn worker_count_does_not_change_summary() {
        let dgp = small_mean();
        let spec = EstimatorSpec::Mean(MeanMethod::Ppi(LambdaMode::Auto));
        let a = run_replications(&dgp, &spec, 0.05, 64, 5, 1).unwrap();
        let b = run_replications(&dgp, &spec, 0.05, 64, 5, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.mean_estimate.to_bits(), b.mean_estimate.to_bits());
    }

    #[test]
    fn structural_mismatch_is_an_error() {
        let twin = DgpConfig::Twin(TwinDgpConfig::default());
        let e = run_replications(&twin, &EstimatorSpec::Mean(MeanMethod::Dsl), 0.05, 2, 0, 1);
        assert!(matches!(e, Err(SimError::Incompatible { .. })));
        let e = run_replications(&small_mean(), &EstimatorSpec::TwinAte, 0.05, 2, 0, 1);
        assert!(matches!(e, Err(SimError::Incompatible { .. })));
        let e = run_replications(
            &DgpConfig::OlsBias(OlsBiasConfig::default()),
            &EstimatorSpec::Ols {
                method: OlsMethod::Human,
                term: 5,
            },
            0.05,
            1,
            0,
            1,
        );
        assert!(matches!(e, Err(SimError::Incompatible { .. })));
    }

    #[test]
    fn zero_replications_rejected() {
        assert!(run_replications(&small_mean(), &EstimatorSpec::Mean(MeanMethod::Dsl), 0.05, 0, 0, 1)
            .is_err());
    }

    #[test]
    fn toml_config_round_trip() {
        let text = r#"
reps = 20
seed = 11

[dgp]
kind = "ols_bias"
delta = 0.4
n = 200
big_n = 400

[estimator.ols]
method = { ppi = { fixed = 1.0 } }
term = 1
"#;
        let cfg = SimulationConfig::from_toml(text).unwrap();
        assert_eq!(cfg.alpha, 0.05);
        match cfg.dgp {
            DgpConfig::OlsBias(c) => {
                assert_eq!((c.delta, c.n, c.big_n, c.beta1), (0.4, 200, 400, 0.5));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            cfg.estimator,
            EstimatorSpec::Ols {
                method: OlsMethod::Ppi(LambdaMode::Fixed(1.0)),
                term: 1
            }
        );
        let back = SimulationConfig::from_toml(&toml::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert!(cfg.run(2).is_ok());
    }
}
