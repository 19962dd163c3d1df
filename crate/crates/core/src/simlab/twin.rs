//! Potential-outcomes "digital twin" simulation.
//!
//! Human potential outcomes follow `Y_i(z) = theta_i + z tau + eps_i(z)`.
//! The twin predicts each potential outcome as
//! `Y_i(z) + eta_i + beta_z + xi_i(z)` (additive model) or
//! `Y_i(z) + eta_i beta_z + xi_i(z)` (interaction model). The within-unit
//! twin contrast is unbiased for `tau` when `beta_1 = beta_0` in the
//! additive model; the interaction model additionally needs
//! `E[eta (beta_1 - beta_0)] = 0`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::data::SharedDataset;
use crate::estimators::{EstimateReport, Method};
use crate::stats::{mean, variance};

use super::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TwinDgpConfig {
    pub tau: f64,
    pub theta_sd: f64,
    pub eps_sd: f64,
    pub eta_mean: f64,
    pub eta_sd: f64,
    pub beta0: f64,
    pub beta1: f64,
    pub xi_sd: f64,
    pub interaction: bool,
    pub n: usize,
    pub seed: u64,
}

impl Default for TwinDgpConfig {
    fn default() -> Self {
        Self {
            tau: 0.5,
            theta_sd: 1.0,
            eps_sd: 0.5,
            eta_mean: 0.0,
            eta_sd: 0.5,
            beta0: 0.0,
            beta1: 0.0,
            xi_sd: 0.5,
            interaction: false,
            n: 1000,
            seed: 0,
        }
    }
}

impl TwinDgpConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let sds = [self.theta_sd, self.eps_sd, self.eta_sd, self.xi_sd];
        if sds.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(SimError::InvalidConfig("standard deviations must be >= 0".into()));
        }
        let rest = [self.tau, self.eta_mean, self.beta0, self.beta1];
        if rest.iter().any(|v| !v.is_finite()) {
            return Err(SimError::InvalidConfig("parameters must be finite".into()));
        }
        if self.n < 1 {
            return Err(SimError::InvalidConfig("n must be at least 1".into()));
        }
        Ok(())
    }

    /// Population value of the arm-wise twin error gap that [`tisa_gap`]
    /// estimates.
    pub fn twin_error_gap(&self) -> f64 {
        if self.interaction {
            self.eta_mean * (self.beta1 - self.beta0)
        } else {
            self.beta1 - self.beta0
        }
    }
}

/// Both human potential outcomes for every unit. Only simulation code
/// should read these; analyses go through [`TwinWorld::observed`].
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialOutcomes {
    pub y0: Vec<f64>,
    pub y1: Vec<f64>,
}

/// Twin predictions of both potential outcomes per unit.
#[derive(Debug, Clone, PartialEq)]
pub struct TwinTable {
    pub yhat0: Vec<f64>,
    pub yhat1: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwinWorld {
    pub human: PotentialOutcomes,
    pub twin: TwinTable,
    /// Randomised arm of each unit in the human experiment.
    pub assignment: Vec<u8>,
    pub tau: f64,
}

/// What a human experiment paired with twin predictions reveals: the
/// assigned arm, the human outcome in that arm, and the twin prediction for
/// that same arm. The unassigned potential outcome is absent by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservedTwinSample {
    pub z: Vec<u8>,
    pub y: Vec<f64>,
    pub yhat: Vec<f64>,
}

impl TwinWorld {
    pub fn observed(&self) -> ObservedTwinSample {
        let pick = |a: &[f64], b: &[f64]| -> Vec<f64> {
            self.assignment
                .iter()
                .enumerate()
                .map(|(i, &z)| if z == 1 { b[i] } else { a[i] })
                .collect()
        };
        ObservedTwinSample {
            z: self.assignment.clone(),
            y: pick(&self.human.y0, &self.human.y1),
            yhat: pick(&self.twin.yhat0, &self.twin.yhat1),
        }
    }
}

impl ObservedTwinSample {
    /// Exports as a shared table with `z` designated.
    pub fn to_shared(&self) -> Result<SharedDataset, crate::data::DataError> {
        SharedDataset::new(
            None,
            vec!["z".into()],
            vec![self.z.iter().map(|&z| f64::from(z)).collect()],
            Some(0),
            self.y.clone(),
            self.yhat.clone(),
            None,
        )
    }
}

pub fn gen_twin_dgp(config: &TwinDgpConfig) -> Result<TwinWorld, SimError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.n;
    let mut human = PotentialOutcomes {
        y0: Vec::with_capacity(n),
        y1: Vec::with_capacity(n),
    };
    let mut twin = TwinTable {
        yhat0: Vec::with_capacity(n),
        yhat1: Vec::with_capacity(n),
    };
    let mut assignment = Vec::with_capacity(n);
    let g = |rng: &mut ChaCha8Rng| -> f64 { rng.sample(StandardNormal) };
    for _ in 0..n {
        let theta = config.theta_sd * g(&mut rng);
        let y0 = theta + config.eps_sd * g(&mut rng);
        let y1 = theta + config.tau + config.eps_sd * g(&mut rng);
        let eta = config.eta_mean + config.eta_sd * g(&mut rng);
        let xi0 = config.xi_sd * g(&mut rng);
        let xi1 = config.xi_sd * g(&mut rng);
        let (b0, b1) = if config.interaction {
            (eta * config.beta0, eta * config.beta1)
        } else {
            (eta + config.beta0, eta + config.beta1)
        };
        human.y0.push(y0);
        human.y1.push(y1);
        twin.yhat0.push(y0 + b0 + xi0);
        twin.yhat1.push(y1 + b1 + xi1);
        assignment.push(u8::from(rng.random::<f64>() < 0.5));
    }
    Ok(TwinWorld {
        human,
        twin,
        assignment,
        tau: config.tau,
    })
}

/// Mean of the within-unit twin contrasts `yhat1 - yhat0`.
pub fn twin_ate(twin: &TwinTable, alpha: f64) -> Result<EstimateReport, SimError> {
    if twin.yhat0.is_empty() || twin.yhat1.is_empty() {
        return Err(SimError::MissingArm("an arm has no predictions".into()));
    }
    if twin.yhat0.len() != twin.yhat1.len() {
        return Err(SimError::MissingArm(format!(
            "{} control and {} treated predictions",
            twin.yhat0.len(),
            twin.yhat1.len()
        )));
    }
    if twin.yhat0.len() < 2 {
        return Err(SimError::MissingArm("at least two units required".into()));
    }
    let diff: Vec<f64> = twin.yhat1.iter().zip(&twin.yhat0).map(|(a, b)| a - b).collect();
    let se = (variance(&diff) / diff.len() as f64).sqrt();
    crate::estimators::check_alpha(alpha)?;
    Ok(EstimateReport::normal(mean(&diff), se, alpha, Method::TwinAte))
}

/// Difference between arms in the mean twin error `yhat - y` on jointly
/// observed units; estimates `beta_1 - beta_0` under the additive model.
/// An interval excluding zero flags a violation of treatment invariance.
pub fn tisa_gap(sample: &ObservedTwinSample, alpha: f64) -> Result<EstimateReport, SimError> {
    crate::estimators::check_alpha(alpha)?;
    let mut arms: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
    for ((&z, y), f) in sample.z.iter().zip(&sample.y).zip(&sample.yhat) {
        arms[usize::from(z == 1)].push(f - y);
    }
    for (arm, errs) in arms.iter().enumerate() {
        if errs.len() < 2 {
            return Err(SimError::MissingArm(format!(
                "arm {arm} has {} jointly observed units; need 2",
                errs.len()
            )));
        }
    }
    let gap = mean(&arms[1]) - mean(&arms[0]);
    let se = (variance(&arms[1]) / arms[1].len() as f64
        + variance(&arms[0]) / arms[0].len() as f64)
        .sqrt();
    Ok(EstimateReport::normal(gap, se, alpha, Method::TisaGap))
}
