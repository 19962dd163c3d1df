use serde::{Deserialize, Serialize};

use crate::data::SharedDataset;
use crate::stats::{covariance, mean, variance};

use super::EstimatorError;

/// Sample covariance between the treatment indicator and the prediction
/// error `yhat - y`. A nonzero value shifts the naive regression slope by
/// `Cov(z, e) / Var(z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentDiagnostic {
    pub cov_z_eps: f64,
    pub std_error: f64,
    pub z_stat: f64,
    /// Implied shift of the naive slope, `Cov(z, e) / Var(z)`.
    pub slope_shift: f64,
}

pub fn moment_diagnostic(shared: &SharedDataset) -> Result<MomentDiagnostic, EstimatorError> {
    let z = shared.z().ok_or(EstimatorError::NoTreatment("shared"))?;
    let n = shared.n();
    if n < 3 {
        return Err(EstimatorError::TooFewRows {
            what: "moment_diagnostic",
            need: 3,
            got: n,
        });
    }
    let var_z = variance(z);
    if !(var_z > 0.0) {
        return Err(EstimatorError::DegenerateTreatment);
    }
    let eps: Vec<f64> = shared
        .yhat()
        .iter()
        .zip(shared.y())
        .map(|(f, y)| f - y)
        .collect();
    let cov = covariance(z, &eps);

    // Standard error from the variance of the centred cross products.
    let (mz, me) = (mean(z), mean(&eps));
    let prod: Vec<f64> = z.iter().zip(&eps).map(|(a, b)| (a - mz) * (b - me)).collect();
    let std_error = (variance(&prod) / n as f64).sqrt();
    let z_stat = if std_error > 0.0 {
        cov / std_error
    } else if cov == 0.0 {
        0.0
    } else {
        cov.signum() * f64::INFINITY
    };
    Ok(MomentDiagnostic {
        cov_z_eps: cov,
        std_error,
        z_stat,
        slope_shift: cov / var_z,
    })
}
