//! Plug-in bias correction with cross-fitting.
//!
//! A model of the conditional prediction error `b(x) = E[yhat - y | x]` is
//! fitted on the shared rows, one model per held-out fold, and the averaged
//! model is subtracted from every surrogate prediction to form debiased
//! pseudo-labels.

use serde::{Deserialize, Serialize};

use crate::data::{check_compatible, make_folds, SharedDataset, SurrogateDataset};
use crate::linalg::{design_with_intercept, ols};
use crate::stats::{mean, variance};

use super::{check_alpha, ess_from_se, EstimateReport, EstimatorError, Method};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BiasKind {
    Constant,
    LinearInCovariates,
}

/// `b(x) = c_0 + sum_j c_{j+1} x_j`; the constant kind has a single
/// coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasModel {
    pub kind: BiasKind,
    pub coefficients: Vec<f64>,
}

impl BiasModel {
    pub fn predict(&self, x: &[f64]) -> f64 {
        match self.kind {
            BiasKind::Constant => self.coefficients[0],
            BiasKind::LinearInCovariates => {
                self.coefficients[0]
                    + self.coefficients[1..]
                        .iter()
                        .zip(x)
                        .map(|(c, v)| c * v)
                        .sum::<f64>()
            }
        }
    }

    fn fit(kind: BiasKind, shared: &SharedDataset, rows: &[usize]) -> Result<Self, EstimatorError> {
        let err: Vec<f64> = rows
            .iter()
            .map(|&i| shared.yhat()[i] - shared.y()[i])
            .collect();
        let coefficients = match kind {
            BiasKind::Constant => vec![mean(&err)],
            BiasKind::LinearInCovariates => {
                let cols: Vec<Vec<f64>> = shared
                    .covariates()
                    .iter()
                    .map(|c| rows.iter().map(|&i| c[i]).collect())
                    .collect();
                let x = design_with_intercept(&cols, rows.len());
                ols(&x, &err)?.coef.iter().copied().collect()
            }
        };
        Ok(Self { kind, coefficients })
    }

    fn average(models: &[BiasModel]) -> BiasModel {
        let p = models[0].coefficients.len();
        let k = models.len() as f64;
        BiasModel {
            kind: models[0].kind,
            coefficients: (0..p)
                .map(|j| models.iter().map(|m| m.coefficients[j]).sum::<f64>() / k)
                .collect(),
        }
    }
}

/// Fold-specific bias models, their average, and held-out residuals
/// `(yhat_i - y_i) - b_{-fold(i)}(x_i)` for every shared row.
#[derive(Debug, Clone)]
pub struct CrossFittedBias {
    pub fold_models: Vec<BiasModel>,
    pub averaged: BiasModel,
    pub heldout_residuals: Vec<f64>,
}

pub fn cross_fit_bias(
    shared: &SharedDataset,
    kind: BiasKind,
    k_folds: usize,
    seed: u64,
) -> Result<CrossFittedBias, EstimatorError> {
    let n = shared.n();
    let folds = make_folds(n, k_folds, seed)?;
    if n < 2 * k_folds {
        return Err(EstimatorError::TooFewRows {
            what: "plugin_debias_mean (2 rows per fold)",
            need: 2 * k_folds,
            got: n,
        });
    }
    let mut fold_models = Vec::with_capacity(k_folds);
    let mut heldout_residuals = vec![0.0; n];
    let mut row = vec![0.0; shared.k()];
    for f in 0..k_folds {
        let model = BiasModel::fit(kind, shared, &folds.training(f))?;
        for i in folds.held_out(f) {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = shared.covariate(j)[i];
            }
            heldout_residuals[i] = shared.yhat()[i] - shared.y()[i] - model.predict(&row);
        }
        fold_models.push(model);
    }
    let averaged = BiasModel::average(&fold_models);
    Ok(CrossFittedBias {
        fold_models,
        averaged,
        heldout_residuals,
    })
}

/// Cross-fitted plug-in debiased mean of the surrogate pseudo-labels
/// `yhat_j - b(x_j)`.
///
/// Standard error: `Var(pseudo-labels)/N + Var(held-out residuals)/n`.
pub fn plugin_debias_mean(
    shared: &SharedDataset,
    surrogate: &SurrogateDataset,
    bias: BiasKind,
    k_folds: usize,
    seed: u64,
    alpha: f64,
) -> Result<EstimateReport, EstimatorError> {
    check_alpha(alpha)?;
    check_compatible(shared, surrogate)?;
    let big_n = surrogate.len();
    if big_n < 2 {
        return Err(EstimatorError::TooFewRows {
            what: "plugin_debias_mean (surrogate)",
            need: 2,
            got: big_n,
        });
    }
    let fit = cross_fit_bias(shared, bias, k_folds, seed)?;
    let mut row = vec![0.0; surrogate.covariates().len()];
    let pseudo: Vec<f64> = (0..big_n)
        .map(|j| {
            for (c, slot) in row.iter_mut().enumerate() {
                *slot = surrogate.covariate(c)[j];
            }
            surrogate.yhat()[j] - fit.averaged.predict(&row)
        })
        .collect();
    let n = shared.n();
    let var = variance(&pseudo) / big_n as f64 + variance(&fit.heldout_residuals) / n as f64;
    let se = var.sqrt();
    let se_h = (variance(shared.y()) / n as f64).sqrt();
    Ok(
        EstimateReport::normal(mean(&pseudo), se, alpha, Method::PluginDebias)
            .with_ess(ess_from_se(n, se_h, se)),
    )
}
