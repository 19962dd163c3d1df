use proptest::collection::vec;
use proptest::prelude::*;

use surrocal::data::{make_folds, read_shared, Schema, SharedDataset, SurrogateDataset};
use surrocal::design::{allocate_budget, effective_sample_size, power_two_arm, DesignInputs};
use surrocal::estimators::{
    dsl_mean, human_mean, human_ols, ppi_mean, ppi_ols, LambdaMode,
};
use surrocal::metrics::{
    agreement_rates, effect_correlation, kl_discrete, total_variation, wasserstein1, EffectPair,
};

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

fn finite() -> impl Strategy<Value = f64> {
    -1e3..1e3f64
}

/// Shared rows of `(x, y, yhat)` plus surrogate rows of `(x, yhat)`.
fn datasets() -> impl Strategy<Value = (SharedDataset, SurrogateDataset)> {
    (5usize..40, 5usize..80).prop_flat_map(|(n, m)| {
        (vec((finite(), finite(), finite()), n), vec((finite(), finite()), m)).prop_map(
            |(s, u)| {
                let shared = SharedDataset::new(
                    None,
                    vec!["x_1".into()],
                    vec![s.iter().map(|r| r.0).collect()],
                    None,
                    s.iter().map(|r| r.1).collect(),
                    s.iter().map(|r| r.2).collect(),
                    None,
                )
                .unwrap();
                let surrogate = SurrogateDataset::new(
                    None,
                    vec!["x_1".into()],
                    vec![u.iter().map(|r| r.0).collect()],
                    None,
                    u.iter().map(|r| r.1).collect(),
                )
                .unwrap();
                (shared, surrogate)
            },
        )
    })
}

fn simplex(k: usize) -> impl Strategy<Value = Vec<f64>> {
    vec(0.0..1.0f64, k).prop_filter_map("zero mass", |w| {
        let s: f64 = w.iter().sum();
        (s > 1e-6).then(|| w.iter().map(|v| v / s).collect())
    })
}

fn design_inputs() -> impl Strategy<Value = DesignInputs> {
    (-1.0..=1.0f64, 0.2..3.0f64, 0.0..1.0f64, 0.5..20.0f64, 0.01..1.0f64, 200.0..3000.0f64)
        .prop_map(|(rho, sigma_y, effect, ch, cs, budget)| DesignInputs {
            rho,
            sigma_y,
            effect,
            alpha: 0.05,
            cost_human: ch,
            cost_surrogate: cs,
            budget: budget.max(4.0 * ch),
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn csv_round_trip_is_bit_exact(
        rows in vec((any::<f64>().prop_filter("finite", |v| v.is_finite()),
                     any::<f64>().prop_filter("finite", |v| v.is_finite()),
                     any::<f64>().prop_filter("finite", |v| v.is_finite()),
                     0u8..2,
                     0.001..=1.0f64), 1..30)
    ) {
        let d = SharedDataset::new(
            Some((0..rows.len() as i64).map(|i| 7 * i - 3).collect()),
            vec!["x_1".into(), "z".into()],
            vec![rows.iter().map(|r| r.0).collect(), rows.iter().map(|r| f64::from(r.3)).collect()],
            Some(1),
            rows.iter().map(|r| r.1).collect(),
            rows.iter().map(|r| r.2).collect(),
            Some(rows.iter().map(|r| r.4).collect()),
        ).unwrap();
        let schema = Schema::default();
        let mut buf = Vec::new();
        d.write_csv(&mut buf, &schema).unwrap();
        let back = read_shared(buf.as_slice(), &schema).unwrap();
        prop_assert_eq!(back.row_ids(), d.row_ids());
        for (a, b) in back.y().iter().zip(d.y()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
        for (a, b) in back.yhat().iter().zip(d.yhat()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
        for j in 0..2 {
            for (a, b) in back.covariate(j).iter().zip(d.covariate(j)) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
        for (a, b) in back.pi().unwrap().iter().zip(d.pi().unwrap()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
        prop_assert_eq!(back.z_index(), Some(1));
    }

    #[test]
    fn folds_are_pure_and_balanced(n in 2usize..300, k in 2usize..10, seed in any::<u64>()) {
        prop_assume!(k <= n);
        let a = make_folds(n, k, seed).unwrap();
        let b = make_folds(n, k, seed).unwrap();
        prop_assert_eq!(a.fold_index(), b.fold_index());
        let sizes = a.sizes();
        prop_assert_eq!(sizes.iter().sum::<usize>(), n);
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }

    #[test]
    fn lambda_zero_is_human_only((s, u) in datasets()) {
        let h = human_mean(&s, 0.05).unwrap();
        let p = ppi_mean(&s, &u, LambdaMode::Fixed(0.0), 0.05).unwrap();
        prop_assert!(rel_close(h.estimate, p.estimate, 1e-12));
        prop_assert!(rel_close(h.std_error, p.std_error, 1e-12));

        if let (Ok(ho), Ok(po)) = (human_ols(&s, 0.05), ppi_ols(&s, &u, LambdaMode::Fixed(0.0), 0.05)) {
            for (a, b) in ho.iter().zip(&po) {
                prop_assert!(rel_close(a.report.estimate, b.report.estimate, 1e-9));
                prop_assert!(rel_close(a.report.std_error, b.report.std_error, 1e-9));
            }
        }
    }

    #[test]
    fn dsl_equals_ppi_at_one((s, u) in datasets()) {
        let d = dsl_mean(&s, &u, 0.05).unwrap();
        let p = ppi_mean(&s, &u, LambdaMode::Fixed(1.0), 0.05).unwrap();
        let scale = s.y().iter().chain(s.yhat()).chain(u.yhat()).fold(1.0f64, |m, v| m.max(v.abs()));
        prop_assert!((d.estimate - p.estimate).abs() <= 1e-12 * scale);
        prop_assert!(rel_close(d.std_error, p.std_error, 1e-9));
    }

    #[test]
    fn ess_never_below_n(n in 1u64..100_000, big_n in 0u64..1_000_000, rho in -1.0..=1.0f64) {
        let e = effective_sample_size(n, big_n, rho).unwrap();
        prop_assert!(e >= n as f64);
        if rho == 0.0 || big_n == 0 {
            prop_assert_eq!(e, n as f64);
        } else if rho.abs() > 1e-6 {
            prop_assert!(e > n as f64);
        }
    }

    #[test]
    fn power_is_monotone(i in design_inputs(), n in 4u64..2000, m in 0u64..20_000, bump in 1u64..500) {
        let base = power_two_arm(&i, n, m).unwrap();
        prop_assert!(power_two_arm(&i, n + bump, m).unwrap() >= base - 1e-15);
        prop_assert!(power_two_arm(&i, n, m + bump).unwrap() >= base - 1e-15);
        let bigger = DesignInputs { effect: i.effect * 1.5 + 0.01, ..i };
        prop_assert!(power_two_arm(&bigger, n, m).unwrap() >= base - 1e-15);
        let neg = DesignInputs { effect: -i.effect, ..i };
        prop_assert!((power_two_arm(&neg, n, m).unwrap() - base).abs() < 1e-15);
        let stronger = DesignInputs { rho: (i.rho.abs() + 0.1).min(1.0), ..i };
        let weaker = DesignInputs { rho: i.rho.abs(), ..i };
        prop_assert!(power_two_arm(&stronger, n, m).unwrap() >= power_two_arm(&weaker, n, m).unwrap() - 1e-15);
    }

    #[test]
    fn allocation_respects_budget_and_beats_grid(i in design_inputs()) {
        let plan = allocate_budget(&i).unwrap();
        prop_assert!(plan.total_cost <= i.budget + 1e-9);
        let mut best = 0.0f64;
        let max_n = (i.budget / i.cost_human).floor() as u64;
        for n in 4..=max_n {
            let left = i.budget - n as f64 * i.cost_human;
            let max_m = (left / i.cost_surrogate).floor() as u64;
            let mut m = 0;
            while m <= max_m {
                best = best.max(power_two_arm(&i, n, m).unwrap());
                m += 10;
            }
        }
        prop_assert!(plan.achieved_power >= best - 1e-12, "{} < {}", plan.achieved_power, best);
    }

    #[test]
    fn wasserstein_is_a_metric(
        a in vec(-50.0..50.0f64, 1..20),
        b in vec(-50.0..50.0f64, 1..20),
        c in vec(-50.0..50.0f64, 1..20),
    ) {
        let ab = wasserstein1(&a, &b).unwrap();
        let ba = wasserstein1(&b, &a).unwrap();
        let bc = wasserstein1(&b, &c).unwrap();
        let ac = wasserstein1(&a, &c).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - ba).abs() <= 1e-10);
        prop_assert!(ac <= ab + bc + 1e-10);
        prop_assert!(wasserstein1(&a, &a).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn discrete_divergences((p, q) in (2usize..8).prop_flat_map(|k| (simplex(k), simplex(k)))) {
        let tv = total_variation(&p, &q).unwrap();
        prop_assert!((0.0..=1.0).contains(&tv));
        prop_assert!((tv - total_variation(&q, &p).unwrap()).abs() <= 1e-15);
        if q.iter().all(|v| *v > 0.0) {
            prop_assert!(kl_discrete(&p, &q).unwrap() >= 0.0);
        }
    }

    #[test]
    fn agreement_ignores_order(
        raw in vec((-3.0..3.0f64, 0.05..1.0f64, -3.0..3.0f64, 0.05..1.0f64), 3..30),
        seed in any::<u64>(),
    ) {
        let pairs: Vec<EffectPair> = raw.iter().enumerate().map(|(i, r)| EffectPair {
            study_id: format!("s{i}"),
            human_effect: r.0,
            human_se: r.1,
            llm_effect: r.2,
            llm_se: r.3,
        }).collect();
        let mut shuffled = pairs.clone();
        let len = shuffled.len();
        let mut state = seed;
        for i in (1..len).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(agreement_rates(&pairs, 0.05).unwrap(), agreement_rates(&shuffled, 0.05).unwrap());
        if let (Ok(a), Ok(b)) = (effect_correlation(&pairs), effect_correlation(&shuffled)) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn kl_is_asymmetric() {
    let (p, q) = ([0.8, 0.15, 0.05], [0.2, 0.3, 0.5]);
    let forward = kl_discrete(&p, &q).unwrap();
    let backward = kl_discrete(&q, &p).unwrap();
    assert!((forward - backward).abs() > 0.1, "{forward} vs {backward}");
}

#[test]
fn wasserstein_triangle_randomized() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let sample = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
        let len = rng.random_range(1..25);
        (0..len).map(|_| rng.random_range(-10.0..10.0)).collect()
    };
    for _ in 0..1000 {
        let (a, b, c) = (sample(&mut rng), sample(&mut rng), sample(&mut rng));
        let ab = wasserstein1(&a, &b).unwrap();
        let bc = wasserstein1(&b, &c).unwrap();
        let ac = wasserstein1(&a, &c).unwrap();
        assert!(ac <= ab + bc + 1e-10);
    }
}
