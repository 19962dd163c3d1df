//! Monte Carlo properties of the estimators on the simulation processes.

use surrocal::estimators::{BiasKind, LambdaMode, MeanMethod};
use surrocal::simlab::{
    gen_ols_bias_dgp, run_replications, BiasStructure, DgpConfig, EstimatorSpec, MeanDgpConfig,
    OlsBiasConfig, OlsMethod,
};
use surrocal::stats::{mean, variance};

const REPS: usize = 2000;

fn mean_dgp(bias: BiasStructure, n: usize, big_n: usize) -> DgpConfig {
    DgpConfig::Mean(MeanDgpConfig {
        bias,
        n,
        big_n,
        predictor_rho: 0.7,
        ..MeanDgpConfig::default()
    })
}

fn assert_coverage(spec: EstimatorSpec, dgp: DgpConfig, seed: u64) {
    let s = run_replications(&dgp, &spec, 0.05, REPS, seed, 0).unwrap();
    assert!(
        (0.93..=0.97).contains(&s.empirical_coverage),
        "{} coverage {}",
        s.method,
        s.empirical_coverage
    );
}

#[test]
fn ppi_coverage_under_constant_bias() {
    let dgp = mean_dgp(BiasStructure::Constant(0.4), 300, 3000);
    assert_coverage(EstimatorSpec::Mean(MeanMethod::Ppi(LambdaMode::Auto)), dgp, 1);
}

#[test]
fn dsl_coverage_under_linear_bias() {
    let dgp = mean_dgp(BiasStructure::Linear(0.5), 300, 3000);
    assert_coverage(EstimatorSpec::Mean(MeanMethod::Dsl), dgp, 2);
}

#[test]
fn plugin_coverage_under_linear_bias() {
    let dgp = mean_dgp(BiasStructure::Linear(0.5), 300, 3000);
    let spec = EstimatorSpec::Mean(MeanMethod::PluginDebias {
        bias: BiasKind::LinearInCovariates,
        k_folds: 5,
        seed: 3,
    });
    assert_coverage(spec, dgp, 3);
}

#[test]
fn naive_surrogate_misses_under_bias() {
    let dgp = mean_dgp(BiasStructure::Constant(0.4), 300, 3000);
    let s = run_replications(&dgp, &EstimatorSpec::Mean(MeanMethod::NaiveSurrogate), 0.05, 500, 4, 0)
        .unwrap();
    assert!(s.empirical_coverage < 0.05, "{}", s.empirical_coverage);
    assert!((s.mean_bias - 0.4).abs() < 3.0 * s.mc_std_error + 1e-3);
}

#[test]
fn error_shrinks_at_root_n() {
    // Mean absolute error of a root-n consistent estimator halves when the
    // sample sizes are multiplied by 4.
    let methods = [
        MeanMethod::Ppi(LambdaMode::Auto),
        MeanMethod::Dsl,
        MeanMethod::PluginDebias {
            bias: BiasKind::Constant,
            k_folds: 5,
            seed: 0,
        },
        MeanMethod::Relationship,
    ];
    for m in methods {
        let spec = EstimatorSpec::Mean(m);
        let mae = |n: usize| {
            let dgp = mean_dgp(BiasStructure::Constant(0.3), n, 10 * n);
            let reports =
                surrocal::simlab::replicate(&dgp, &spec, 0.05, REPS, 17, 0).unwrap();
            mean(&reports.iter().map(|r| (r.estimate - 1.0).abs()).collect::<Vec<_>>())
        };
        let ratio = mae(400) / mae(100);
        let slope = ratio.ln() / 4f64.ln();
        assert!((-0.7..=-0.3).contains(&slope), "{}: slope {slope}", spec.label());
    }
}

#[test]
fn ppi_ols_removes_slope_bias() {
    let dgp = DgpConfig::OlsBias(OlsBiasConfig {
        n: 2000,
        big_n: 10_000,
        ..OlsBiasConfig::default()
    });
    let naive = EstimatorSpec::Ols {
        method: OlsMethod::NaiveSurrogate,
        term: 1,
    };
    let ppi = EstimatorSpec::Ols {
        method: OlsMethod::Ppi(LambdaMode::Fixed(1.0)),
        term: 1,
    };
    let sn = run_replications(&dgp, &naive, 0.05, 500, 5, 0).unwrap();
    let sp = run_replications(&dgp, &ppi, 0.05, 500, 5, 0).unwrap();
    assert!((sn.mean_bias - 0.4).abs() < 3.0 * sn.mc_std_error, "{sn:?}");
    assert!(sp.mean_bias.abs() < 3.0 * sp.mc_std_error, "{sp:?}");
}

#[test]
fn ols_bias_error_conditional_means() {
    let g = gen_ols_bias_dgp(&OlsBiasConfig {
        n: 100_000,
        big_n: 4,
        seed: 77,
        ..OlsBiasConfig::default()
    })
    .unwrap();
    let s = &g.shared;
    let z = s.z().unwrap();
    let eps: Vec<f64> = s.yhat().iter().zip(s.y()).map(|(f, y)| f - y).collect();
    let within = |v: &[f64], target: f64| {
        let se = (variance(v) / v.len() as f64).sqrt();
        (mean(v) - target).abs() < 3.0 * se
    };
    assert!(within(&eps, 0.0));
    let e1: Vec<f64> = eps.iter().zip(z).filter(|(_, z)| **z == 1.0).map(|(e, _)| *e).collect();
    let e0: Vec<f64> = eps.iter().zip(z).filter(|(_, z)| **z == 0.0).map(|(e, _)| *e).collect();
    assert!(within(&e1, 0.2));
    assert!(within(&e0, -0.2));
}

#[test]
fn tuned_lambda_gains_over_human() {
    let dgp = mean_dgp(BiasStructure::None, 200, 2000);
    let h = run_replications(&dgp, &EstimatorSpec::Mean(MeanMethod::HumanOnly), 0.05, REPS, 9, 0)
        .unwrap();
    let p = run_replications(
        &dgp,
        &EstimatorSpec::Mean(MeanMethod::Ppi(LambdaMode::Auto)),
        0.05,
        REPS,
        9,
        0,
    )
    .unwrap();
    assert!(p.variance < h.variance);
    assert!(p.mean_ci_width < h.mean_ci_width);
}
