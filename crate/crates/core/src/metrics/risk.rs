use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::stats::{mean, variance, z_critical};

use super::{check_alpha, open, MetricsError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Loss {
    /// `-ln p(outcome)`.
    LogLoss,
    /// Brier score `sum_k (p_k - 1{k = outcome})^2`.
    SquaredError,
}

/// A predicted outcome distribution for one scenario together with the
/// observed human responses (category indices) in that scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSample {
    pub scenario_id: String,
    pub predicted: Vec<f64>,
    pub outcomes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskEstimate {
    pub risk: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub alpha: f64,
    pub loss: Loss,
    pub m_scenarios: usize,
}

impl ScenarioSample {
    fn invalid(&self, reason: String) -> MetricsError {
        MetricsError::InvalidScenario {
            scenario: self.scenario_id.clone(),
            reason,
        }
    }

    /// Mean loss over this scenario's responses.
    pub fn mean_loss(&self, loss: Loss) -> Result<f64, MetricsError> {
        if self.outcomes.is_empty() {
            return Err(self.invalid("no human outcomes".into()));
        }
        let p = &self.predicted;
        if p.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(self.invalid("predicted probabilities must be finite and >= 0".into()));
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(self.invalid(format!("predicted probabilities sum to {s}")));
        }
        let mut losses = Vec::with_capacity(self.outcomes.len());
        for &o in &self.outcomes {
            let Some(&po) = p.get(o) else {
                return Err(self.invalid(format!(
                    "outcome {o} outside the {} predicted categories",
                    p.len()
                )));
            };
            losses.push(match loss {
                Loss::LogLoss => {
                    if po <= 0.0 {
                        return Err(MetricsError::Positivity {
                            scenario: self.scenario_id.clone(),
                            outcome: o,
                            prob: po,
                        });
                    }
                    -po.ln()
                }
                Loss::SquaredError => p
                    .iter()
                    .enumerate()
                    .map(|(k, &pk)| {
                        let t = if k == o { 1.0 } else { 0.0 };
                        (pk - t) * (pk - t)
                    })
                    .sum(),
            });
        }
        Ok(mean(&losses))
    }
}

/// Scenario-level mean of within-scenario mean losses, with a normal
/// interval from the between-scenario variance.
pub fn estimate_risk(
    scenarios: &[ScenarioSample],
    loss: Loss,
    alpha: f64,
) -> Result<RiskEstimate, MetricsError> {
    check_alpha(alpha)?;
    if scenarios.len() < 2 {
        return Err(MetricsError::TooFew {
            what: "estimate_risk scenarios",
            need: 2,
            got: scenarios.len(),
        });
    }
    let per: Vec<f64> = scenarios
        .iter()
        .map(|s| s.mean_loss(loss))
        .collect::<Result<_, _>>()?;
    let m = per.len();
    let risk = mean(&per);
    let se = (variance(&per) / m as f64).sqrt();
    let half = z_critical(alpha) * se;
    Ok(RiskEstimate {
        risk,
        std_error: se,
        ci_low: risk - half,
        ci_high: risk + half,
        alpha,
        loss,
        m_scenarios: m,
    })
}

/// Joins a predictions table (`scenario_id,p_0,...,p_{K-1}`) with an
/// outcomes table (`scenario_id,outcome`). Scenarios keep prediction-file
/// order.
pub fn read_scenarios<P: Read, O: Read>(
    predictions: P,
    outcomes: O,
) -> Result<Vec<ScenarioSample>, MetricsError> {
    let mut pr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(predictions);
    let headers = pr.headers()?.clone();
    if headers.get(0) != Some("scenario_id") || headers.len() < 2 {
        return Err(MetricsError::Format(
            "predictions header must be scenario_id,p_0,...".into(),
        ));
    }
    for (k, h) in headers.iter().skip(1).enumerate() {
        if h != format!("p_{k}") {
            return Err(MetricsError::Format(format!(
                "predictions column {} is {h:?}, expected \"p_{k}\"",
                k + 1
            )));
        }
    }
    let mut scenarios = Vec::new();
    let mut index = BTreeMap::new();
    for (row, rec) in pr.records().enumerate() {
        let rec = rec?;
        let id = rec[0].to_string();
        let predicted = rec
            .iter()
            .skip(1)
            .map(|v| {
                v.parse::<f64>().map_err(|_| {
                    MetricsError::Format(format!("non-numeric probability {v:?} on row {}", row + 1))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if index.insert(id.clone(), scenarios.len()).is_some() {
            return Err(MetricsError::Format(format!("scenario {id:?} listed twice")));
        }
        scenarios.push(ScenarioSample {
            scenario_id: id,
            predicted,
            outcomes: Vec::new(),
        });
    }
    #[derive(Deserialize)]
    struct OutcomeRow {
        scenario_id: String,
        outcome: usize,
    }
    let mut or = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(outcomes);
    for rec in or.deserialize() {
        let r: OutcomeRow = rec?;
        let Some(&i) = index.get(&r.scenario_id) else {
            return Err(MetricsError::Format(format!(
                "outcome for unknown scenario {:?}",
                r.scenario_id
            )));
        };
        scenarios[i].outcomes.push(r.outcome);
    }
    Ok(scenarios)
}

pub fn load_scenarios(
    predictions: impl AsRef<Path>,
    outcomes: impl AsRef<Path>,
) -> Result<Vec<ScenarioSample>, MetricsError> {
    read_scenarios(open(predictions.as_ref())?, open(outcomes.as_ref())?)
}
