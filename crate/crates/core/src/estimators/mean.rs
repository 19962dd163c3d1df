use crate::data::{check_compatible, SharedDataset, SurrogateDataset};
use crate::linalg::{design_with_intercept, ols};
use crate::stats::{covariance, mean, pairwise_sum, variance};

use super::{
    check_alpha, ess_from_se, EstimateReport, EstimatorError, LambdaMode, MeanMethod, Method,
    Warning,
};

fn need(what: &'static str, need: usize, got: usize) -> Result<(), EstimatorError> {
    if got < need {
        Err(EstimatorError::TooFewRows { what, need, got })
    } else {
        Ok(())
    }
}

fn human_se(shared: &SharedDataset) -> f64 {
    (variance(shared.y()) / shared.n() as f64).sqrt()
}

/// Sample mean of the human outcomes.
pub fn human_mean(shared: &SharedDataset, alpha: f64) -> Result<EstimateReport, EstimatorError> {
    check_alpha(alpha)?;
    need("human_mean", 2, shared.n())?;
    Ok(
        EstimateReport::normal(mean(shared.y()), human_se(shared), alpha, Method::HumanOnly)
            .with_ess(Some(shared.n() as f64)),
    )
}

/// Mean of the surrogate predictions, uncalibrated.
pub fn naive_surrogate_mean(
    surrogate: &SurrogateDataset,
    alpha: f64,
) -> Result<EstimateReport, EstimatorError> {
    check_alpha(alpha)?;
    let big_n = surrogate.len();
    need("naive_surrogate_mean", 2, big_n)?;
    let se = (variance(surrogate.yhat()) / big_n as f64).sqrt();
    Ok(EstimateReport::normal(
        mean(surrogate.yhat()),
        se,
        alpha,
        Method::NaiveSurrogate,
    ))
}

/// Variance-minimising PPI weight for a mean:
/// `N/(N+n) * Cov(y, yhat) / Var(yhat)` over the shared rows.
pub fn tune_lambda_mean(shared: &SharedDataset, big_n: usize) -> Result<f64, EstimatorError> {
    let n = shared.n();
    need("tune_lambda_mean", 2, n)?;
    let var_f = variance(shared.yhat());
    if !(var_f > 0.0) {
        return Err(EstimatorError::DegeneratePredictor);
    }
    let shrink = big_n as f64 / (big_n + n) as f64;
    Ok(shrink * covariance(shared.y(), shared.yhat()) / var_f)
}

/// Resolves a lambda mode; automatic tuning on a degenerate predictor falls
/// back to zero with a warning.
fn resolve_lambda(
    shared: &SharedDataset,
    big_n: usize,
    mode: LambdaMode,
) -> Result<(f64, Option<Warning>), EstimatorError> {
    match mode {
        LambdaMode::Fixed(l) if l.is_finite() => Ok((l, None)),
        LambdaMode::Fixed(l) => Err(EstimatorError::InvalidLambda(l)),
        LambdaMode::Auto => match tune_lambda_mean(shared, big_n) {
            Ok(l) => Ok((l, None)),
            Err(EstimatorError::DegeneratePredictor) => {
                Ok((0.0, Some(Warning::DegeneratePredictor)))
            }
            Err(e) => Err(e),
        },
    }
}

/// Prediction-powered mean:
/// `mean(y) - lambda * (mean(yhat_shared) - mean(yhat_surrogate))`.
///
/// The two averages are independent, so the variance is
/// `Var(y - lambda yhat)/n + lambda^2 Var(yhat_surrogate)/N`.
pub fn ppi_mean(
    shared: &SharedDataset,
    surrogate: &SurrogateDataset,
    lambda: LambdaMode,
    alpha: f64,
) -> Result<EstimateReport, EstimatorError> {
    check_alpha(alpha)?;
    let n = shared.n();
    let big_n = surrogate.len();
    need("ppi_mean (shared)", 2, n)?;
    need("ppi_mean (surrogate)", 2, big_n)?;
    let (lambda, warning) = resolve_lambda(shared, big_n, lambda)?;

    let correction = mean(shared.yhat()) - mean(surrogate.yhat());
    let estimate = mean(shared.y()) - lambda * correction;

    let rectified: Vec<f64> = shared
        .y()
        .iter()
        .zip(shared.yhat())
        .map(|(y, f)| y - lambda * f)
        .collect();
    let var = variance(&rectified) / n as f64
        + lambda * lambda * variance(surrogate.yhat()) / big_n as f64;
    let se = var.sqrt();
    Ok(EstimateReport::normal(estimate, se, alpha, Method::Ppi)
        .with_lambda(lambda)
        .with_ess(ess_from_se(n, human_se(shared), se))
        .with_warning(warning))
}

/// Weighted mean of the shared-row prediction errors `yhat - y` and its
/// sampling variance. Without `pi` this is the plain mean with `Var/n`;
/// with `pi` the errors are weighted by `1/pi` (ratio form).
fn weighted_error(shared: &SharedDataset) -> Result<(f64, f64), EstimatorError> {
    let n = shared.n();
    let err: Vec<f64> = shared
        .yhat()
        .iter()
        .zip(shared.y())
        .map(|(f, y)| f - y)
        .collect();
    match shared.pi() {
        None => Ok((mean(&err), variance(&err) / n as f64)),
        Some(pi) => {
            let w: Vec<f64> = pi.iter().map(|p| 1.0 / p).collect();
            if w.iter().any(|v| !v.is_finite()) {
                return Err(EstimatorError::NonFiniteWeights);
            }
            let w_sum = pairwise_sum(&w);
            let we: Vec<f64> = w.iter().zip(&err).map(|(w, e)| w * e).collect();
            let centre = pairwise_sum(&we) / w_sum;
            let sq: Vec<f64> = w
                .iter()
                .zip(&err)
                .map(|(w, e)| (w * (e - centre)).powi(2))
                .collect();
            let var = pairwise_sum(&sq) / (w_sum * w_sum) * n as f64 / (n - 1) as f64;
            Ok((centre, var))
        }
    }
}

/// Design-based supervised learning mean: the surrogate mean minus the
/// (inverse-probability weighted) mean prediction error on the shared rows.
/// With no `pi` column this coincides with [`ppi_mean`] at `lambda = 1`.
pub fn dsl_mean(
    shared: &SharedDataset,
    surrogate: &SurrogateDataset,
    alpha: f64,
) -> Result<EstimateReport, EstimatorError> {
    check_alpha(alpha)?;
    let n = shared.n();
    let big_n = surrogate.len();
    need("dsl_mean (shared)", 2, n)?;
    need("dsl_mean (surrogate)", 2, big_n)?;
    let (bias, var_bias) = weighted_error(shared)?;
    let estimate = match shared.pi() {
        // Same arithmetic as the rectified form so the two agree bit for bit.
        None => mean(shared.y()) - (mean(shared.yhat()) - mean(surrogate.yhat())),
        Some(_) => mean(surrogate.yhat()) - bias,
    };
    let se = (var_bias + variance(surrogate.yhat()) / big_n as f64).sqrt();
    Ok(EstimateReport::normal(estimate, se, alpha, Method::Dsl)
        .with_lambda(1.0)
        .with_ess(ess_from_se(n, human_se(shared), se)))
}

/// Linear calibration map `y ≈ alpha + beta * yhat` fitted on shared rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationshipModel {
    pub alpha: f64,
    pub beta: f64,
}

/// Fits the relationship model and returns it with the HC1 covariance of
/// `(alpha, beta)`.
pub fn relationship_model(
    shared: &SharedDataset,
) -> Result<(RelationshipModel, [[f64; 2]; 2]), EstimatorError> {
    let n = shared.n();
    need("relationship model", 3, n)?;
    if !(variance(shared.yhat()) > 0.0) {
        return Err(EstimatorError::DegeneratePredictor);
    }
    let x = design_with_intercept(&[shared.yhat().to_vec()], n);
    let fit = ols(&x, shared.y())?;
    let cov = fit.hc1_covariance(&x);
    Ok((
        RelationshipModel {
            alpha: fit.coef[0],
            beta: fit.coef[1],
        },
        [[cov[(0, 0)], cov[(0, 1)]], [cov[(1, 0)], cov[(1, 1)]]],
    ))
}

/// `alpha + beta * mean(yhat_surrogate)` with a delta-method standard error
/// combining the coefficient covariance and the surrogate-mean variance.
pub fn relationship_correct_mean(
    shared: &SharedDataset,
    surrogate: &SurrogateDataset,
    alpha: f64,
) -> Result<EstimateReport, EstimatorError> {
    check_alpha(alpha)?;
    let big_n = surrogate.len();
    need("relationship_correct_mean (surrogate)", 2, big_n)?;
    let (model, cov) = relationship_model(shared)?;
    let m = mean(surrogate.yhat());
    let estimate = model.alpha + model.beta * m;
    let var_coef = cov[0][0] + 2.0 * m * cov[0][1] + m * m * cov[1][1];
    let var_mean = model.beta * model.beta * variance(surrogate.yhat()) / big_n as f64;
    let se = (var_coef + var_mean).max(0.0).sqrt();
    Ok(
        EstimateReport::normal(estimate, se, alpha, Method::Relationship)
            .with_ess(ess_from_se(shared.n(), human_se(shared), se)),
    )
}

fn arm_indices(z: &[f64], arm: f64) -> Vec<usize> {
    (0..z.len()).filter(|&i| z[i] == arm).collect()
}

/// Difference in means between the `z = 1` and `z = 0` arms, each arm
/// estimated with `method`; arm variances are summed.
pub fn diff_in_means(
    shared: &SharedDataset,
    surrogate: &SurrogateDataset,
    method: &MeanMethod,
    alpha: f64,
) -> Result<EstimateReport, EstimatorError> {
    check_alpha(alpha)?;
    let uses_surrogate = !matches!(method, MeanMethod::HumanOnly);
    let uses_shared = !matches!(method, MeanMethod::NaiveSurrogate);
    if uses_surrogate {
        check_compatible(shared, surrogate)?;
    }
    let z_s = shared.z().ok_or(EstimatorError::NoTreatment("shared"))?;
    let z_u = surrogate.z().ok_or(EstimatorError::NoTreatment("surrogate"))?;

    let mut arms = Vec::with_capacity(2);
    for arm in [0u8, 1u8] {
        let idx_s = arm_indices(z_s, f64::from(arm));
        let idx_u = arm_indices(z_u, f64::from(arm));
        if uses_shared && idx_s.len() < 2 {
            return Err(EstimatorError::EmptyArm {
                arm,
                table: "shared",
                got: idx_s.len(),
                need: 2,
            });
        }
        if uses_surrogate && idx_u.len() < 2 {
            return Err(EstimatorError::EmptyArm {
                arm,
                table: "surrogate",
                got: idx_u.len(),
                need: 2,
            });
        }
        // The human-only and naive paths never look at the other table, so
        // an empty arm there is tolerated by substituting the full table.
        let s = if idx_s.is_empty() {
            shared.clone()
        } else {
            shared.subset(&idx_s)?
        };
        let u = if idx_u.is_empty() {
            surrogate.clone()
        } else {
            surrogate.subset(&idx_u)?
        };
        arms.push(method.estimate(&s, &u, alpha)?);
    }
    let (r0, r1) = (&arms[0], &arms[1]);
    let se = (r0.std_error.powi(2) + r1.std_error.powi(2)).sqrt();
    let lambda = match (r0.lambda_used, r1.lambda_used) {
        (Some(a), Some(b)) if a == b => Some(a),
        _ => None,
    };
    let ess = match (r0.ess, r1.ess) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    };
    let mut report = EstimateReport::normal(r1.estimate - r0.estimate, se, alpha, r1.method)
        .with_ess(ess)
        .with_warning(r0.warning.or(r1.warning));
    report.lambda_used = lambda;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn shared(y: &[f64], yhat: &[f64]) -> SharedDataset {
        SharedDataset::from_outcomes(y.to_vec(), yhat.to_vec()).unwrap()
    }

    fn surrogate(yhat: &[f64]) -> SurrogateDataset {
        SurrogateDataset::from_predictions(yhat.to_vec()).unwrap()
    }

    fn with_z(y: &[f64], yhat: &[f64], z: &[f64]) -> SharedDataset {
        SharedDataset::new(
            None,
            vec!["z".into()],
            vec![z.to_vec()],
            Some(0),
            y.to_vec(),
            yhat.to_vec(),
            None,
        )
        .unwrap()
    }

    fn surrogate_with_z(yhat: &[f64], z: &[f64]) -> SurrogateDataset {
        SurrogateDataset::new(None, vec!["z".into()], vec![z.to_vec()], Some(0), yhat.to_vec())
            .unwrap()
    }

    #[test]
    fn human_mean_examples() {
        let r = human_mean(&shared(&[1.0; 3], &[0.0; 3]), 0.05).unwrap();
        assert_eq!((r.estimate, r.std_error), (1.0, 0.0));

        // sd([1,2,3,4]) = sqrt(5/3); / sqrt(4) = 0.645497...
        let r = human_mean(&shared(&[1.0, 2.0, 3.0, 4.0], &[0.0; 4]), 0.05).unwrap();
        assert_eq!(r.estimate, 2.5);
        assert_relative_eq!(r.std_error, (5.0f64 / 3.0).sqrt() / 2.0, epsilon = 1e-15);
        assert!((r.std_error - 0.6455).abs() < 5e-5);

        assert!(matches!(
            human_mean(&shared(&[1.0], &[1.0]), 0.05),
            Err(EstimatorError::TooFewRows { .. })
        ));
        assert!(matches!(
            human_mean(&shared(&[1.0, 2.0], &[1.0, 2.0]), 1.5),
            Err(EstimatorError::InvalidAlpha(_))
        ));
    }

    #[test]
    fn naive_mean_examples() {
        let r = naive_surrogate_mean(&surrogate(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]), 0.05).unwrap();
        assert_eq!(r.estimate, 3.5);
        assert_eq!(r.method, Method::NaiveSurrogate);
        let r = naive_surrogate_mean(&surrogate(&[2.0; 5]), 0.05).unwrap();
        assert_eq!(r.std_error, 0.0);
        assert!(naive_surrogate_mean(&surrogate(&[2.0]), 0.05).is_err());
    }

    #[test]
    fn lambda_for_perfect_predictor_is_the_shrinkage_factor() {
        let y: Vec<f64> = (0..100).map(|i| f64::from(i).sin() * 3.0).collect();
        let l = tune_lambda_mean(&shared(&y, &y), 900).unwrap();
        assert_relative_eq!(l, 0.9, epsilon = 1e-12);
    }

    #[test]
    fn constant_predictor_is_degenerate() {
        let s = shared(&[1.0, 2.0, 3.0], &[5.0; 3]);
        assert!(matches!(
            tune_lambda_mean(&s, 10),
            Err(EstimatorError::DegeneratePredictor)
        ));
        let r = ppi_mean(&s, &surrogate(&[5.0, 6.0]), LambdaMode::Auto, 0.05).unwrap();
        assert_eq!(r.lambda_used, Some(0.0));
        assert_eq!(r.warning, Some(Warning::DegeneratePredictor));
        assert_eq!(r.estimate, 2.0);
    }

    #[test]
    fn ppi_lambda_zero_is_human_mean() {
        let s = shared(&[1.0, 4.0, 2.0, 8.0], &[1.5, 3.0, 2.5, 7.0]);
        let u = surrogate(&[1.0, 2.0, 3.0]);
        let p = ppi_mean(&s, &u, LambdaMode::Fixed(0.0), 0.05).unwrap();
        let h = human_mean(&s, 0.05).unwrap();
        assert_eq!(p.estimate, h.estimate);
        assert_eq!(p.std_error, h.std_error);
        assert_eq!((p.ci_low, p.ci_high), (h.ci_low, h.ci_high));
        assert_eq!(p.ess, Some(4.0));
    }

    #[test]
    fn ppi_perfect_predictor_hands_off_to_surrogate_mean() {
        let s = shared(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]);
        let u = surrogate(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let r = ppi_mean(&s, &u, LambdaMode::Fixed(1.0), 0.05).unwrap();
        assert_eq!(r.estimate, 3.5);
        assert_eq!(r.lambda_used, Some(1.0));
    }

    #[test]
    fn ppi_allows_lambda_outside_unit_interval() {
        let s = shared(&[1.0, 2.0, 3.0], &[1.0, 2.5, 3.0]);
        let u = surrogate(&[1.0, 2.0, 3.0, 4.0]);
        let r = ppi_mean(&s, &u, LambdaMode::Fixed(-1.5), 0.05).unwrap();
        assert_eq!(r.lambda_used, Some(-1.5));
        assert!(ppi_mean(&s, &u, LambdaMode::Fixed(f64::NAN), 0.05).is_err());
    }

    #[test]
    fn dsl_constant_error_cancels() {
        let y = [1.0, 3.0, 2.0, 5.0];
        let yhat: Vec<f64> = y.iter().map(|v| v + 0.5).collect();
        let u = surrogate(&[2.0, 4.0, 6.0]);
        let r = dsl_mean(&shared(&y, &yhat), &u, 0.05).unwrap();
        assert_relative_eq!(r.estimate, 4.0 - 0.5, epsilon = 1e-14);
    }

    #[test]
    fn dsl_matches_ppi_at_lambda_one() {
        let s = shared(&[1.0, 4.0, 2.0, 8.0, 3.3], &[1.5, 3.0, 2.5, 7.0, 2.9]);
        let u = surrogate(&[1.0, 2.0, 3.0, 7.5]);
        let d = dsl_mean(&s, &u, 0.05).unwrap();
        let p = ppi_mean(&s, &u, LambdaMode::Fixed(1.0), 0.05).unwrap();
        assert_relative_eq!(d.estimate, p.estimate, max_relative = 1e-12);
        assert_relative_eq!(d.std_error, p.std_error, max_relative = 1e-12);
    }

    #[test]
    fn dsl_uniform_pi_matches_unweighted() {
        let y = vec![1.0, 4.0, 2.0, 8.0, 3.3];
        let yhat = vec![1.5, 3.0, 2.5, 7.0, 2.9];
        let plain = shared(&y, &yhat);
        let weighted =
            SharedDataset::new(None, vec![], vec![], None, y, yhat, Some(vec![0.3; 5])).unwrap();
        let u = surrogate(&[1.0, 2.0, 3.0, 7.5]);
        let a = dsl_mean(&plain, &u, 0.05).unwrap();
        let b = dsl_mean(&weighted, &u, 0.05).unwrap();
        assert_relative_eq!(a.estimate, b.estimate, max_relative = 1e-12);
        assert_relative_eq!(a.std_error, b.std_error, max_relative = 1e-12);
    }

    #[test]
    fn dsl_weights_tiny_pi() {
        let s = SharedDataset::new(
            None,
            vec![],
            vec![],
            None,
            vec![1.0, 2.0],
            vec![1.0, 2.0],
            Some(vec![1e-320, 0.5]),
        )
        .unwrap();
        assert!(matches!(
            dsl_mean(&s, &surrogate(&[1.0, 2.0]), 0.05),
            Err(EstimatorError::NonFiniteWeights)
        ));
    }

    #[test]
    fn relationship_examples() {
        let yhat = [1.0, 2.0, 4.0, 5.0];
        let y: Vec<f64> = yhat.iter().map(|v| 2.0 * v).collect();
        let u = surrogate(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let r = relationship_correct_mean(&shared(&y, &yhat), &u, 0.05).unwrap();
        assert_relative_eq!(r.estimate, 7.0, epsilon = 1e-12);

        let r = relationship_correct_mean(&shared(&yhat, &yhat), &u, 0.05).unwrap();
        let naive = naive_surrogate_mean(&u, 0.05).unwrap();
        assert_relative_eq!(r.estimate, naive.estimate, epsilon = 1e-12);
        assert_relative_eq!(r.std_error, naive.std_error, epsilon = 1e-12);

        assert!(matches!(
            relationship_correct_mean(&shared(&[1.0, 2.0, 3.0], &[1.0; 3]), &u, 0.05),
            Err(EstimatorError::DegeneratePredictor)
        ));
    }

    #[test]
    fn diff_in_means_requires_both_arms() {
        let s = with_z(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0]);
        let u = surrogate_with_z(&[1.0, 2.0, 3.0, 4.0], &[0.0, 1.0, 0.0, 1.0]);
        assert!(matches!(
            diff_in_means(&s, &u, &MeanMethod::Dsl, 0.05),
            Err(EstimatorError::EmptyArm { arm: 0, .. })
        ));
        let no_z = surrogate(&[1.0, 2.0]);
        assert!(diff_in_means(&s, &no_z, &MeanMethod::Dsl, 0.05).is_err());
    }

    #[test]
    fn diff_in_means_human_only() {
        let s = with_z(&[1.0, 3.0, 4.0, 8.0], &[0.0; 4], &[0.0, 0.0, 1.0, 1.0]);
        let u = surrogate_with_z(&[0.0, 0.0], &[0.0, 1.0]);
        let r = diff_in_means(&s, &u, &MeanMethod::HumanOnly, 0.05).unwrap();
        assert_eq!(r.estimate, 6.0 - 2.0);
        // arm variances: 2 and 8, each over 2 rows
        assert_relative_eq!(r.std_error, (1.0f64 + 4.0).sqrt(), epsilon = 1e-14);
    }
}
