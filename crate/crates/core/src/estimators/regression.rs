//! Prediction-powered least squares.
//!
//! For a coefficient vector the estimator is
//! `b_human(y ~ X) - lambda * (b(yhat ~ X, shared) - b(yhat ~ X, surrogate))`
//! with every term fitted with an intercept. Variances come from per-row
//! sandwich influence terms, so the three fits combine as
//! `S_hh - 2 lambda S_hs + lambda^2 (S_ss + S_uu)` per coefficient, and the
//! automatic lambda minimises that quadratic coefficient by coefficient.

use nalgebra::DMatrix;

use crate::data::{check_compatible, SharedDataset, SurrogateDataset};
use crate::linalg::{design_with_intercept, ols, LinalgError};

use super::{check_alpha, ess_from_se, EstimateReport, EstimatorError, LambdaMode, Method, Warning};

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientEstimate {
    /// `"(intercept)"` or the covariate name.
    pub term: String,
    pub report: EstimateReport,
}

fn terms(names: &[String]) -> Vec<String> {
    std::iter::once("(intercept)".to_string())
        .chain(names.iter().cloned())
        .collect()
}

fn check_rows(rows: usize, p: usize) -> Result<(), EstimatorError> {
    if rows <= p {
        return Err(LinalgError::TooFewRows { rows, cols: p }.into());
    }
    Ok(())
}

/// HC1-scaled column-wise cross products of two influence matrices.
fn cross(a: &DMatrix<f64>, b: &DMatrix<f64>, j: usize) -> f64 {
    let (n, p) = a.shape();
    let s: f64 = a.column(j).iter().zip(b.column(j).iter()).map(|(x, y)| x * y).sum();
    s * n as f64 / (n - p) as f64
}

struct Fitted {
    x: DMatrix<f64>,
    coef: Vec<f64>,
    influence: DMatrix<f64>,
}

fn fit(columns: &[Vec<f64>], response: &[f64]) -> Result<Fitted, EstimatorError> {
    let n = response.len();
    let x = design_with_intercept(columns, n);
    check_rows(n, x.ncols())?;
    let f = ols(&x, response)?;
    let influence = f.influence(&x);
    Ok(Fitted {
        coef: f.coef.iter().copied().collect(),
        influence,
        x,
    })
}

fn plain_ols(
    names: &[String],
    columns: &[Vec<f64>],
    response: &[f64],
    method: Method,
    alpha: f64,
) -> Result<Vec<CoefficientEstimate>, EstimatorError> {
    check_alpha(alpha)?;
    let f = fit(columns, response)?;
    Ok(terms(names)
        .into_iter()
        .enumerate()
        .map(|(j, term)| {
            let se = cross(&f.influence, &f.influence, j).sqrt();
            let mut report = EstimateReport::normal(f.coef[j], se, alpha, method);
            if method == Method::HumanOnly {
                report.ess = Some(response.len() as f64);
            }
            CoefficientEstimate { term, report }
        })
        .collect())
}

/// OLS of the human outcome on the shared covariates, HC1 errors.
pub fn human_ols(
    shared: &SharedDataset,
    alpha: f64,
) -> Result<Vec<CoefficientEstimate>, EstimatorError> {
    plain_ols(
        shared.covariate_names(),
        shared.covariates(),
        shared.y(),
        Method::HumanOnly,
        alpha,
    )
}

/// OLS of the surrogate predictions on the surrogate covariates: the
/// substitution analysis that ignores prediction error.
pub fn surrogate_ols(
    surrogate: &SurrogateDataset,
    alpha: f64,
) -> Result<Vec<CoefficientEstimate>, EstimatorError> {
    plain_ols(
        surrogate.covariate_names(),
        surrogate.covariates(),
        surrogate.yhat(),
        Method::NaiveSurrogate,
        alpha,
    )
}

/// Coefficient-wise prediction-powered OLS. `LambdaMode::Auto` tunes one
/// lambda per coefficient.
pub fn ppi_ols(
    shared: &SharedDataset,
    surrogate: &SurrogateDataset,
    lambda: LambdaMode,
    alpha: f64,
) -> Result<Vec<CoefficientEstimate>, EstimatorError> {
    check_alpha(alpha)?;
    check_compatible(shared, surrogate)?;
    if let LambdaMode::Fixed(l) = lambda {
        if !l.is_finite() {
            return Err(EstimatorError::InvalidLambda(l));
        }
    }
    let human = fit(shared.covariates(), shared.y())?;
    let pred_shared = {
        let f = ols(&human.x, shared.yhat())?;
        Fitted {
            coef: f.coef.iter().copied().collect(),
            influence: f.influence(&human.x),
            x: human.x.clone(),
        }
    };
    let pred_surrogate = fit(surrogate.covariates(), surrogate.yhat())?;

    let n = shared.n();
    Ok(terms(shared.covariate_names())
        .into_iter()
        .enumerate()
        .map(|(j, term)| {
            let s_hh = cross(&human.influence, &human.influence, j);
            let s_hs = cross(&human.influence, &pred_shared.influence, j);
            let s_ss = cross(&pred_shared.influence, &pred_shared.influence, j);
            let s_uu = cross(&pred_surrogate.influence, &pred_surrogate.influence, j);
            let (l, warning) = match lambda {
                LambdaMode::Fixed(l) => (l, None),
                LambdaMode::Auto if s_ss + s_uu > 0.0 => (s_hs / (s_ss + s_uu), None),
                LambdaMode::Auto => (0.0, Some(Warning::DegeneratePredictor)),
            };
            let estimate =
                human.coef[j] - l * (pred_shared.coef[j] - pred_surrogate.coef[j]);
            let var = if l == 0.0 {
                s_hh
            } else {
                s_hh - 2.0 * l * s_hs + l * l * (s_ss + s_uu)
            };
            let se = var.max(0.0).sqrt();
            let report = EstimateReport::normal(estimate, se, alpha, Method::Ppi)
                .with_lambda(l)
                .with_ess(ess_from_se(n, s_hh.sqrt(), se))
                .with_warning(warning);
            CoefficientEstimate { term, report }
        })
        .collect())
}
