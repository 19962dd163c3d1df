use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use surrocal::data::{load_pair, load_shared, CovariateSpec, Schema};
use surrocal::design::{
    allocate_budget, effective_sample_size, pilot_rho, power_two_arm, DesignInputs, DesignPlan,
};
use surrocal::estimators::{
    diff_in_means, human_ols, moment_diagnostic, ppi_ols, surrogate_ols, BiasKind,
    CoefficientEstimate, EstimateReport, MeanMethod, CSV_HEADER,
};
use surrocal::metrics::{
    agreement_rates, effect_correlation, estimate_risk, kl_discrete, load_effect_pairs,
    load_scenarios, total_variation, wasserstein1, Loss,
};
use surrocal::simlab::{
    gen_twin_dgp, run_replications, tisa_gap, twin_ate, BiasStructure, BinaryDgpConfig,
    DgpConfig, EstimatorSpec, MeanDgpConfig, OlsBiasConfig, OlsMethod, ReplicationSummary,
    SimulationConfig, TwinDgpConfig, SUMMARY_CSV_HEADER,
};
use surrocal::stats::variance;

use crate::args::{
    BiasArg, BiasStructureArg, ColumnArgs, Command, DesignArgs, DgpArg, EstimateArgs, LossArg,
    MethodArg, MetricsArgs, RiskArgs, SimEstimatorArg, SimulateArgs, Target, TwinArgs,
};
use crate::error::CliError;
use crate::output::{emit, num, opt_num, render, Artifact, Provenance};

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Estimate(a) => estimate(&a),
        Command::Design(a) => design(&a),
        Command::Simulate(a) => simulate(&a),
        Command::Twin(a) => twin(&a),
        Command::Metrics(a) => metrics(&a),
        Command::Risk(a) => risk(&a),
    }
}

fn finish(
    prov: Provenance,
    artifact: Artifact,
    out: &crate::args::OutputArgs,
) -> Result<(), CliError> {
    emit(&render(&prov, &artifact, out.format)?, out.output.as_ref())
}

fn schema(c: &ColumnArgs) -> Schema {
    Schema {
        id: Some(c.id_col.clone()),
        y: c.y_col.clone(),
        yhat: c.yhat_col.clone(),
        z: Some(c.z_col.clone()),
        pi: Some(c.pi_col.clone()),
        covariates: match &c.covariates {
            Some(names) => CovariateSpec::Names(names.clone()),
            None => CovariateSpec::Prefix(c.covariate_prefix.clone()),
        },
    }
}

fn bias_kind(b: BiasArg) -> BiasKind {
    match b {
        BiasArg::Constant => BiasKind::Constant,
        BiasArg::Linear => BiasKind::LinearInCovariates,
    }
}

fn report_rows(reports: &[&EstimateReport]) -> Vec<Vec<String>> {
    reports.iter().map(|r| r.csv_record()).collect()
}

fn coefficient_artifact(coefs: &[CoefficientEstimate]) -> Artifact {
    let json = Value::Array(
        coefs
            .iter()
            .map(|c| {
                let mut v = c.report.to_json();
                v.as_object_mut()
                    .expect("report is an object")
                    .insert("term".into(), json!(c.term));
                v
            })
            .collect(),
    );
    let mut header = vec!["term"];
    header.extend(CSV_HEADER);
    let rows = coefs
        .iter()
        .map(|c| {
            let mut r = vec![c.term.clone()];
            r.extend(c.report.csv_record());
            r
        })
        .collect();
    Artifact::new(json, &header, rows)
}

fn estimate(a: &EstimateArgs) -> Result<(), CliError> {
    let (shared, surrogate) = load_pair(&a.shared, &a.surrogate, &schema(&a.columns))?;
    let method = match a.method {
        MethodArg::HumanOnly => MeanMethod::HumanOnly,
        MethodArg::NaiveSurrogate => MeanMethod::NaiveSurrogate,
        MethodArg::Ppi => MeanMethod::Ppi(a.lambda),
        MethodArg::Dsl => MeanMethod::Dsl,
        MethodArg::PluginDebias => MeanMethod::PluginDebias {
            bias: bias_kind(a.bias),
            k_folds: a.k_folds,
            seed: a
                .seed
                .ok_or_else(|| CliError::config("plugin_debias draws random folds; pass --seed"))?,
        },
        MethodArg::Relationship => MeanMethod::Relationship,
    };
    let mut artifact = match a.target {
        Target::Mean => {
            let r = method.estimate(&shared, &surrogate, a.alpha)?;
            Artifact::new(r.to_json(), &CSV_HEADER, report_rows(&[&r]))
        }
        Target::Diff => {
            let r = diff_in_means(&shared, &surrogate, &method, a.alpha)?;
            Artifact::new(r.to_json(), &CSV_HEADER, report_rows(&[&r]))
        }
        Target::Ols => {
            let coefs = match a.method {
                MethodArg::HumanOnly => human_ols(&shared, a.alpha)?,
                MethodArg::NaiveSurrogate => surrogate_ols(&surrogate, a.alpha)?,
                MethodArg::Ppi => ppi_ols(&shared, &surrogate, a.lambda, a.alpha)?,
                other => {
                    return Err(CliError::config(format!(
                        "--target ols supports human_only, naive_surrogate and ppi, not {}",
                        method_name(other)
                    )))
                }
            };
            coefficient_artifact(&coefs)
        }
    };
    if a.diagnostic {
        let d = moment_diagnostic(&shared)?;
        artifact.json = json!({ "report": artifact.json, "moment_diagnostic": d });
        artifact.notes.push(format!(
            "moment_diagnostic: cov_z_eps={} std_error={} z_stat={} slope_shift={}",
            d.cov_z_eps, d.std_error, d.z_stat, d.slope_shift
        ));
    }
    let prov = Provenance::new("estimate", a, a.seed, &[&a.shared, &a.surrogate])?;
    finish(prov, artifact, &a.out)
}

fn method_name(m: MethodArg) -> &'static str {
    match m {
        MethodArg::HumanOnly => "human_only",
        MethodArg::NaiveSurrogate => "naive_surrogate",
        MethodArg::Ppi => "ppi",
        MethodArg::Dsl => "dsl",
        MethodArg::PluginDebias => "plugin_debias",
        MethodArg::Relationship => "relationship",
    }
}

#[derive(Serialize)]
struct DesignResult {
    inputs: DesignInputs,
    plan: DesignPlan,
    /// `ess / n_human`.
    ess_gain: f64,
    searched: bool,
}

fn design(a: &DesignArgs) -> Result<(), CliError> {
    let pilot = match &a.pilot {
        Some(p) => Some(load_shared(p, &schema(&a.columns))?),
        None => None,
    };
    let rho = match (a.rho, &pilot) {
        (Some(_), Some(_)) => return Err(CliError::config("pass either --rho or --pilot, not both")),
        (Some(r), None) => r,
        (None, Some(p)) => pilot_rho(p)?,
        (None, None) => return Err(CliError::config("--rho or --pilot is required")),
    };
    let sigma_y = match (a.sigma_y, &pilot) {
        (Some(s), _) => s,
        (None, Some(p)) => variance(p.y()).sqrt(),
        (None, None) => return Err(CliError::config("--sigma-y or --pilot is required")),
    };
    let inputs = DesignInputs {
        rho,
        sigma_y,
        effect: a.effect,
        alpha: a.alpha,
        cost_human: a.cost_human,
        cost_surrogate: a.cost_surrogate,
        budget: a.budget,
    };
    let (plan, searched) = match (a.n_human, a.n_surrogate) {
        (Some(n), Some(m)) => {
            let total_cost = n as f64 * a.cost_human + m as f64 * a.cost_surrogate;
            if total_cost > a.budget {
                return Err(CliError::config(format!(
                    "allocation costs {total_cost}, above the budget {}",
                    a.budget
                )));
            }
            let plan = DesignPlan {
                n_human: n,
                n_surrogate: m,
                achieved_power: power_two_arm(&inputs, n, m)?,
                ess: effective_sample_size(n, m, rho)?,
                total_cost,
            };
            (plan, false)
        }
        _ => (allocate_budget(&inputs)?, true),
    };
    let result = DesignResult {
        inputs,
        plan,
        ess_gain: plan.ess / plan.n_human as f64,
        searched,
    };
    eprintln!("{:<16}{:>14}", "rho", format!("{rho:.4}"));
    eprintln!("{:<16}{:>14}", "sigma_y", format!("{sigma_y:.4}"));
    eprintln!("{:<16}{:>14}", "n_human", plan.n_human);
    eprintln!("{:<16}{:>14}", "n_surrogate", plan.n_surrogate);
    eprintln!("{:<16}{:>14}", "ess", format!("{:.1}", plan.ess));
    eprintln!("{:<16}{:>14}", "ess_gain", format!("{:.3}", result.ess_gain));
    eprintln!("{:<16}{:>14}", "power", format!("{:.4}", plan.achieved_power));
    eprintln!("{:<16}{:>14}", "total_cost", format!("{:.2}", plan.total_cost));
    let header = [
        "rho",
        "sigma_y",
        "n_human",
        "n_surrogate",
        "achieved_power",
        "ess",
        "ess_gain",
        "total_cost",
    ];
    let row = vec![
        num(rho),
        num(sigma_y),
        plan.n_human.to_string(),
        plan.n_surrogate.to_string(),
        num(plan.achieved_power),
        num(plan.ess),
        num(result.ess_gain),
        num(plan.total_cost),
    ];
    let json = serde_json::to_value(&result).map_err(|e| CliError::Output(e.to_string()))?;
    let inputs: Vec<&Path> = a.pilot.iter().map(PathBuf::as_path).collect();
    let prov = Provenance::new("design", a, None, &inputs)?;
    finish(prov, Artifact::new(json, &header, vec![row]), &a.out)
}

#[derive(Serialize)]
struct ResolvedSimulation {
    dgp: DgpConfig,
    estimators: Vec<EstimatorSpec>,
    reps: usize,
    seed: u64,
    alpha: f64,
}

fn resolve_dgp(a: &SimulateArgs, kind: DgpArg) -> Result<DgpConfig, CliError> {
    let present: [(&str, bool); 13] = [
        ("n", a.n.is_some()),
        ("big-n", a.big_n.is_some()),
        ("mu", a.mu.is_some()),
        ("sigma-y", a.sigma_y.is_some()),
        ("rho", a.rho.is_some()),
        ("bias", a.bias.is_some()),
        ("bias-size", a.bias_size.is_some()),
        ("delta", a.delta.is_some()),
        ("beta0", a.beta0.is_some()),
        ("beta1", a.beta1.is_some()),
        ("accuracy", a.accuracy.is_some()),
        ("tau", a.tau.is_some()),
        ("eta-mean", a.eta_mean.is_some()),
    ];
    let allowed: &[&str] = match kind {
        DgpArg::Mean => &["n", "big-n", "mu", "sigma-y", "rho", "bias", "bias-size"],
        DgpArg::OlsBias => &["n", "big-n", "delta", "beta0", "beta1"],
        DgpArg::Binary => &["n", "big-n", "accuracy"],
        DgpArg::Twin => &["n", "beta0", "beta1", "tau", "eta-mean"],
    };
    let dgp_name = serde_json::to_value(kind).expect("enum serializes");
    for (flag, set) in present {
        if set && !allowed.contains(&flag) {
            return Err(CliError::config(format!(
                "--{flag} does not apply to --dgp {}",
                dgp_name.as_str().unwrap_or_default()
            )));
        }
    }
    if a.interaction && kind != DgpArg::Twin {
        return Err(CliError::config("--interaction applies only to --dgp twin"));
    }
    Ok(match kind {
        DgpArg::Mean => {
            let d = MeanDgpConfig::default();
            let bias = match (a.bias, a.bias_size) {
                (None | Some(BiasStructureArg::None), None) => BiasStructure::None,
                (Some(BiasStructureArg::None) | None, Some(_)) => {
                    return Err(CliError::config("--bias-size needs a --bias structure"))
                }
                (Some(_), None) => return Err(CliError::config("--bias needs --bias-size")),
                (Some(BiasStructureArg::Constant), Some(c)) => BiasStructure::Constant(c),
                (Some(BiasStructureArg::Linear), Some(c)) => BiasStructure::Linear(c),
                (Some(BiasStructureArg::ZAligned), Some(c)) => BiasStructure::ZAligned(c),
            };
            DgpConfig::Mean(MeanDgpConfig {
                mu: a.mu.unwrap_or(d.mu),
                sigma_y: a.sigma_y.unwrap_or(d.sigma_y),
                predictor_rho: a.rho.unwrap_or(d.predictor_rho),
                bias,
                n: a.n.unwrap_or(d.n),
                big_n: a.big_n.unwrap_or(d.big_n),
                seed: 0,
            })
        }
        DgpArg::OlsBias => {
            let d = OlsBiasConfig::default();
            DgpConfig::OlsBias(OlsBiasConfig {
                delta: a.delta.unwrap_or(d.delta),
                beta0: a.beta0.unwrap_or(d.beta0),
                beta1: a.beta1.unwrap_or(d.beta1),
                n: a.n.unwrap_or(d.n),
                big_n: a.big_n.unwrap_or(d.big_n),
                ..d
            })
        }
        DgpArg::Binary => {
            let d = BinaryDgpConfig::default();
            DgpConfig::Binary(BinaryDgpConfig {
                accuracy: a.accuracy.unwrap_or(d.accuracy),
                n: a.n.unwrap_or(d.n),
                big_n: a.big_n.unwrap_or(d.big_n),
                ..d
            })
        }
        DgpArg::Twin => {
            let d = TwinDgpConfig::default();
            DgpConfig::Twin(TwinDgpConfig {
                tau: a.tau.unwrap_or(d.tau),
                eta_mean: a.eta_mean.unwrap_or(d.eta_mean),
                beta0: a.beta0.unwrap_or(d.beta0),
                beta1: a.beta1.unwrap_or(d.beta1),
                interaction: a.interaction,
                n: a.n.unwrap_or(d.n),
                ..d
            })
        }
    })
}

fn resolve_estimators(
    a: &SimulateArgs,
    kind: DgpArg,
    seed: u64,
) -> Result<Vec<EstimatorSpec>, CliError> {
    use SimEstimatorArg as E;
    if kind == DgpArg::Twin {
        if a.target.is_some() || a.term.is_some() {
            return Err(CliError::config("--target and --term do not apply to --dgp twin"));
        }
        let names = if a.estimators.is_empty() {
            vec![E::TwinAte, E::TisaGap]
        } else {
            a.estimators.clone()
        };
        return names
            .into_iter()
            .map(|e| match e {
                E::TwinAte => Ok(EstimatorSpec::TwinAte),
                E::TisaGap => Ok(EstimatorSpec::TisaGap),
                _ => Err(CliError::config("--dgp twin supports twin_ate and tisa_gap only")),
            })
            .collect();
    }
    let target = a.target.unwrap_or(if kind == DgpArg::OlsBias {
        Target::Ols
    } else {
        Target::Mean
    });
    if a.term.is_some() && target != Target::Ols {
        return Err(CliError::config("--term applies only to --target ols"));
    }
    let names = if !a.estimators.is_empty() {
        a.estimators.clone()
    } else if target == Target::Ols {
        vec![E::HumanOnly, E::NaiveSurrogate, E::Ppi]
    } else {
        vec![
            E::HumanOnly,
            E::NaiveSurrogate,
            E::Ppi,
            E::Dsl,
            E::PluginDebias,
            E::Relationship,
        ]
    };
    names
        .into_iter()
        .map(|e| {
            if target == Target::Ols {
                let method = match e {
                    E::HumanOnly => OlsMethod::Human,
                    E::NaiveSurrogate => OlsMethod::NaiveSurrogate,
                    E::Ppi => OlsMethod::Ppi(a.lambda),
                    _ => {
                        return Err(CliError::config(
                            "--target ols supports human_only, naive_surrogate and ppi",
                        ))
                    }
                };
                return Ok(EstimatorSpec::Ols {
                    method,
                    term: a.term.unwrap_or(1),
                });
            }
            let m = match e {
                E::HumanOnly => MeanMethod::HumanOnly,
                E::NaiveSurrogate => MeanMethod::NaiveSurrogate,
                E::Ppi => MeanMethod::Ppi(a.lambda),
                E::Dsl => MeanMethod::Dsl,
                E::PluginDebias => MeanMethod::PluginDebias {
                    bias: bias_kind(a.plugin_bias),
                    k_folds: a.k_folds,
                    seed,
                },
                E::Relationship => MeanMethod::Relationship,
                E::TwinAte | E::TisaGap => {
                    return Err(CliError::config("twin estimators need --dgp twin"))
                }
            };
            Ok(if target == Target::Diff {
                EstimatorSpec::DiffInMeans(m)
            } else {
                EstimatorSpec::Mean(m)
            })
        })
        .collect()
}

fn simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let (resolved, inputs) = match &a.config {
        Some(path) => {
            let flags = [
                a.n.is_some(),
                a.big_n.is_some(),
                a.mu.is_some(),
                a.sigma_y.is_some(),
                a.rho.is_some(),
                a.bias.is_some(),
                a.bias_size.is_some(),
                a.delta.is_some(),
                a.beta0.is_some(),
                a.beta1.is_some(),
                a.accuracy.is_some(),
                a.tau.is_some(),
                a.eta_mean.is_some(),
                a.interaction,
                a.term.is_some(),
            ];
            if flags.iter().any(|f| *f) {
                return Err(CliError::config(
                    "process flags cannot be combined with --config; edit the file instead",
                ));
            }
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
            let cfg = SimulationConfig::from_toml(&text)?;
            let resolved = ResolvedSimulation {
                dgp: cfg.dgp.with_seed(cfg.seed),
                estimators: vec![cfg.estimator],
                reps: cfg.reps,
                seed: cfg.seed,
                alpha: cfg.alpha,
            };
            (resolved, vec![path.as_path()])
        }
        None => {
            let kind = a.dgp.expect("clap enforces --dgp");
            let seed = a.seed.expect("clap enforces --seed");
            let resolved = ResolvedSimulation {
                dgp: resolve_dgp(a, kind)?.with_seed(seed),
                estimators: resolve_estimators(a, kind, seed)?,
                reps: a.reps.expect("clap enforces --reps"),
                seed,
                alpha: a.alpha,
            };
            (resolved, Vec::new())
        }
    };
    let summaries = resolved
        .estimators
        .iter()
        .map(|spec| {
            run_replications(
                &resolved.dgp,
                spec,
                resolved.alpha,
                resolved.reps,
                resolved.seed,
                a.workers,
            )
        })
        .collect::<Result<Vec<ReplicationSummary>, _>>()?;
    let json = serde_json::to_value(&summaries).map_err(|e| CliError::Output(e.to_string()))?;
    let rows = summaries.iter().map(ReplicationSummary::csv_record).collect();
    let prov = Provenance::new("simulate", &resolved, Some(resolved.seed), &inputs)?;
    finish(prov, Artifact::new(json, &SUMMARY_CSV_HEADER, rows), &a.out)
}

fn twin(a: &TwinArgs) -> Result<(), CliError> {
    let cfg = TwinDgpConfig {
        tau: a.tau,
        theta_sd: a.theta_sd,
        eps_sd: a.eps_sd,
        eta_mean: a.eta_mean,
        eta_sd: a.eta_sd,
        beta0: a.beta0,
        beta1: a.beta1,
        xi_sd: a.xi_sd,
        interaction: a.interaction,
        n: a.n,
        seed: a.seed,
    };
    let world = gen_twin_dgp(&cfg)?;
    let observed = world.observed();
    let ate = twin_ate(&world.twin, a.alpha)?;
    let gap = tisa_gap(&observed, a.alpha)?;
    if let Some(path) = &a.export_observed {
        let file = fs::File::create(path)
            .map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
        observed
            .to_shared()?
            .write_csv(file, &Schema::default())
            .map_err(|e| CliError::Output(e.to_string()))?;
    }
    let json = json!({ "twin_ate": ate, "tisa_gap": gap });
    let prov = Provenance::new("twin", a, Some(a.seed), &[])?;
    finish(prov, Artifact::new(json, &CSV_HEADER, report_rows(&[&ate, &gap])), &a.out)
}

fn read_sample(path: &Path) -> Result<Vec<f64>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Data(e.to_string()))?;
        let field = rec.get(0).unwrap_or("");
        let v: f64 = field.parse().map_err(|_| {
            CliError::Data(format!(
                "{}: non-numeric value {field:?} on data row {}",
                path.display(),
                i + 1
            ))
        })?;
        if !v.is_finite() {
            return Err(CliError::Data(format!(
                "{}: non-finite value on data row {}",
                path.display(),
                i + 1
            )));
        }
        out.push(v);
    }
    Ok(out)
}

fn metrics(a: &MetricsArgs) -> Result<(), CliError> {
    if a.pairs.is_none() && a.sample_a.is_none() && a.p.is_none() {
        return Err(CliError::config(
            "nothing to compute: pass --pairs, --sample-a/--sample-b or --p/--q",
        ));
    }
    let mut json = serde_json::Map::new();
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut push = |name: &str, v: Option<f64>| rows.push(vec![name.to_string(), opt_num(v)]);
    let mut inputs: Vec<&Path> = Vec::new();
    if let Some(path) = &a.pairs {
        inputs.push(path);
        let pairs = load_effect_pairs(path)?;
        let agreement = agreement_rates(&pairs, a.alpha)?;
        let corr = if pairs.len() >= 3 {
            Some(effect_correlation(&pairs)?)
        } else {
            None
        };
        push("direction_agreement", Some(agreement.direction_agreement));
        push("significance_agreement", Some(agreement.significance_agreement));
        push("false_significance_rate", agreement.false_significance_rate);
        push("effect_correlation", corr);
        push("pairs", Some(agreement.pairs as f64));
        json.insert("agreement".into(), json!(agreement));
        json.insert("effect_correlation".into(), json!(corr));
    }
    if let (Some(pa), Some(pb)) = (&a.sample_a, &a.sample_b) {
        inputs.push(pa);
        inputs.push(pb);
        let w = wasserstein1(&read_sample(pa)?, &read_sample(pb)?)?;
        push("wasserstein1", Some(w));
        json.insert("wasserstein1".into(), json!(w));
    }
    if let (Some(p), Some(q)) = (&a.p, &a.q) {
        let kl = kl_discrete(p, q)?;
        let tv = total_variation(p, q)?;
        push("kl_divergence", Some(kl));
        push("total_variation", Some(tv));
        json.insert("kl_divergence".into(), json!(kl));
        json.insert("total_variation".into(), json!(tv));
    }
    let prov = Provenance::new("metrics", a, None, &inputs)?;
    finish(
        prov,
        Artifact::new(Value::Object(json), &["metric", "value"], rows),
        &a.out,
    )
}

fn risk(a: &RiskArgs) -> Result<(), CliError> {
    let scenarios = load_scenarios(&a.predictions, &a.outcomes)?;
    let loss = match a.loss {
        LossArg::LogLoss => Loss::LogLoss,
        LossArg::SquaredError => Loss::SquaredError,
    };
    let r = estimate_risk(&scenarios, loss, a.alpha)?;
    let header = [
        "risk",
        "std_error",
        "ci_low",
        "ci_high",
        "alpha",
        "loss",
        "m_scenarios",
    ];
    let row = vec![
        num(r.risk),
        num(r.std_error),
        num(r.ci_low),
        num(r.ci_high),
        num(r.alpha),
        json!(r.loss).as_str().unwrap_or_default().to_string(),
        r.m_scenarios.to_string(),
    ];
    let json = serde_json::to_value(&r).map_err(|e| CliError::Output(e.to_string()))?;
    let prov = Provenance::new("risk", a, None, &[&a.predictions, &a.outcomes])?;
    finish(prov, Artifact::new(json, &header, vec![row]), &a.out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use surrocal::estimators::LambdaMode;

    #[test]
    fn lambda_mode_serializes_readably() {
        assert_eq!(json!(LambdaMode::Auto), json!("auto"));
        assert_eq!(json!(LambdaMode::Fixed(1.0)), json!({ "fixed": 1.0 }));
    }
}
