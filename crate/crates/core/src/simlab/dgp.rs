//! Data-generating processes for the mean, regression and binary-outcome
//! experiments. Every generator fills the shared rows first and then the
//! surrogate rows from one ChaCha8 stream, drawing the same variables in
//! the same order for every row.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::data::{SharedDataset, SurrogateDataset};
use crate::stats::normal_cdf;

use super::SimError;

/// Structure of the systematic prediction error added to `yhat`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BiasStructure {
    #[default]
    None,
    /// `+c` on every row.
    Constant(f64),
    /// `slope * x_1`, with `x_1 ~ N(1, 1)`.
    Linear(f64),
    /// `delta * (z - 1/2)`: `+delta/2` when `z = 1`, `-delta/2` when `z = 0`.
    ZAligned(f64),
}

impl BiasStructure {
    fn at(&self, x1: f64, z: f64) -> f64 {
        match *self {
            BiasStructure::None => 0.0,
            BiasStructure::Constant(c) => c,
            BiasStructure::Linear(s) => s * x1,
            BiasStructure::ZAligned(d) => d * (z - 0.5),
        }
    }
}

/// Outcome `y = mu + sigma_y * e` with covariates `x_1 ~ N(1, 1)` and
/// `z ~ Bernoulli(1/2)` independent of `y`. The prediction is
/// `yhat = y - (1 - rho)(y - mu) + sqrt(1 - rho^2) sigma_y w + bias(x_1, z)`
/// with `w` standard normal, so `Corr(y, yhat) = rho` when the bias is
/// absent or constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MeanDgpConfig {
    pub mu: f64,
    pub sigma_y: f64,
    pub predictor_rho: f64,
    pub bias: BiasStructure,
    pub n: usize,
    pub big_n: usize,
    pub seed: u64,
}

impl Default for MeanDgpConfig {
    fn default() -> Self {
        Self {
            mu: 1.0,
            sigma_y: 1.0,
            predictor_rho: 0.6,
            bias: BiasStructure::None,
            n: 500,
            big_n: 5000,
            seed: 0,
        }
    }
}

impl MeanDgpConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.predictor_rho.abs() <= 1.0) {
            return Err(SimError::InvalidConfig(format!(
                "predictor_rho = {} outside [-1, 1]",
                self.predictor_rho
            )));
        }
        if !(self.sigma_y > 0.0) || !self.mu.is_finite() || !self.sigma_y.is_finite() {
            return Err(SimError::InvalidConfig("mu finite and sigma_y > 0 required".into()));
        }
        let b = match self.bias {
            BiasStructure::None => 0.0,
            BiasStructure::Constant(v) | BiasStructure::Linear(v) | BiasStructure::ZAligned(v) => v,
        };
        if !b.is_finite() {
            return Err(SimError::InvalidConfig("bias parameter must be finite".into()));
        }
        if self.n < 1 || self.big_n < 1 {
            return Err(SimError::InvalidConfig("n and big_n must be at least 1".into()));
        }
        Ok(())
    }
}

/// Generated tables plus the population value of the target.
#[derive(Debug, Clone)]
pub struct GeneratedData {
    pub shared: SharedDataset,
    pub surrogate: SurrogateDataset,
    pub truth: f64,
}

struct Columns {
    x1: Vec<f64>,
    z: Vec<f64>,
    y: Vec<f64>,
    yhat: Vec<f64>,
}

impl Columns {
    fn with_capacity(n: usize) -> Self {
        Self {
            x1: Vec::with_capacity(n),
            z: Vec::with_capacity(n),
            y: Vec::with_capacity(n),
            yhat: Vec::with_capacity(n),
        }
    }
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn bernoulli_half(rng: &mut ChaCha8Rng) -> f64 {
    if rng.random::<f64>() < 0.5 {
        1.0
    } else {
        0.0
    }
}

pub fn gen_mean_dgp(config: &MeanDgpConfig) -> Result<GeneratedData, SimError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let rho = config.predictor_rho;
    let noise_scale = (1.0 - rho * rho).sqrt() * config.sigma_y;
    let mut draw = |count: usize| {
        let mut c = Columns::with_capacity(count);
        for _ in 0..count {
            let x1 = 1.0 + normal(&mut rng);
            let z = bernoulli_half(&mut rng);
            let y = config.mu + config.sigma_y * normal(&mut rng);
            let w = normal(&mut rng);
            let yhat = y - (1.0 - rho) * (y - config.mu) + noise_scale * w + config.bias.at(x1, z);
            c.x1.push(x1);
            c.z.push(z);
            c.y.push(y);
            c.yhat.push(yhat);
        }
        c
    };
    let s = draw(config.n);
    let u = draw(config.big_n);
    let names = vec!["x_1".to_string(), "z".to_string()];
    Ok(GeneratedData {
        shared: SharedDataset::new(None, names.clone(), vec![s.x1, s.z], Some(1), s.y, s.yhat, None)?,
        surrogate: SurrogateDataset::new(None, names, vec![u.x1, u.z], Some(1), u.yhat)?,
        truth: config.mu,
    })
}

/// Regression `y = beta0 + beta1 z + noise_sd * e` on a balanced binary
/// `z`, with prediction error `delta (z - 1/2) + error_sd * e'`. The error
/// has mean zero overall but shifts the naive slope by `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OlsBiasConfig {
    pub delta: f64,
    pub beta0: f64,
    pub beta1: f64,
    pub noise_sd: f64,
    pub error_sd: f64,
    pub n: usize,
    pub big_n: usize,
    pub seed: u64,
}

impl Default for OlsBiasConfig {
    fn default() -> Self {
        Self {
            delta: 0.4,
            beta0: 1.0,
            beta1: 0.5,
            noise_sd: 1.0,
            error_sd: 0.5,
            n: 10_000,
            big_n: 50_000,
            seed: 0,
        }
    }
}

pub fn gen_ols_bias_dgp(config: &OlsBiasConfig) -> Result<GeneratedData, SimError> {
    if config.n < 4 || config.big_n < 4 {
        return Err(SimError::InvalidConfig("n and big_n must be at least 4".into()));
    }
    let finite = [config.delta, config.beta0, config.beta1, config.noise_sd, config.error_sd];
    if finite.iter().any(|v| !v.is_finite()) || config.noise_sd < 0.0 || config.error_sd < 0.0 {
        return Err(SimError::InvalidConfig(
            "parameters must be finite with non-negative noise".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut draw = |count: usize| {
        let mut c = Columns::with_capacity(count);
        for _ in 0..count {
            let z = bernoulli_half(&mut rng);
            let y = config.beta0 + config.beta1 * z + config.noise_sd * normal(&mut rng);
            let eps = config.delta * (z - 0.5) + config.error_sd * normal(&mut rng);
            c.z.push(z);
            c.y.push(y);
            c.yhat.push(y + eps);
        }
        c
    };
    let s = draw(config.n);
    let u = draw(config.big_n);
    let names = vec!["z".to_string()];
    Ok(GeneratedData {
        shared: SharedDataset::new(None, names.clone(), vec![s.z], Some(0), s.y, s.yhat, None)?,
        surrogate: SurrogateDataset::new(None, names, vec![u.z], Some(0), u.yhat)?,
        truth: config.beta1,
    })
}

/// Binary outcome from a thresholded latent Gaussian,
/// `y = 1{shift_z + e > 0}` with `z ~ Bernoulli(1/2)`, and a predictor that
/// flips labels with class- and arm-dependent probabilities. Within each
/// arm the predictor is correct with probability `accuracy` and its mean
/// exceeds the outcome mean by `bias_z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BinaryDgpConfig {
    pub shift_z0: f64,
    pub shift_z1: f64,
    pub accuracy: f64,
    pub bias_z0: f64,
    pub bias_z1: f64,
    pub n: usize,
    pub big_n: usize,
    pub seed: u64,
}

impl Default for BinaryDgpConfig {
    fn default() -> Self {
        Self {
            shift_z0: -0.3,
            shift_z1: 0.3,
            accuracy: 0.9,
            bias_z0: -0.05,
            bias_z1: 0.10,
            n: 500,
            big_n: 2000,
            seed: 0,
        }
    }
}

/// Per-arm label-flip probabilities `(P(flip | y = 0), P(flip | y = 1))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlipRates {
    pub false_positive: f64,
    pub false_negative: f64,
}

impl BinaryDgpConfig {
    pub fn positive_rate(&self, arm: u8) -> f64 {
        normal_cdf(if arm == 1 { self.shift_z1 } else { self.shift_z0 })
    }

    /// Population mean of `y`.
    pub fn truth(&self) -> f64 {
        0.5 * (self.positive_rate(0) + self.positive_rate(1))
    }

    /// Solves `(1-p) e0 + p e1 = 1 - accuracy` and `(1-p) e0 - p e1 = bias`.
    pub fn flip_rates(&self, arm: u8) -> Result<FlipRates, SimError> {
        let p = self.positive_rate(arm);
        let bias = if arm == 1 { self.bias_z1 } else { self.bias_z0 };
        let err = 1.0 - self.accuracy;
        // Rounding in `1 - accuracy` can leave a boundary rate at -1e-17.
        let snap = |v: f64| if v.abs() < 1e-12 { 0.0 } else { v };
        let rates = FlipRates {
            false_positive: snap((err + bias) / (2.0 * (1.0 - p))),
            false_negative: snap((err - bias) / (2.0 * p)),
        };
        let ok = |v: f64| (0.0..=1.0).contains(&v);
        if !(ok(rates.false_positive) && ok(rates.false_negative)) {
            return Err(SimError::InvalidConfig(format!(
                "accuracy {} with bias {bias} is unattainable in arm {arm}",
                self.accuracy
            )));
        }
        Ok(rates)
    }
}

pub fn gen_binary_dgp(config: &BinaryDgpConfig) -> Result<GeneratedData, SimError> {
    if config.n < 1 || config.big_n < 1 {
        return Err(SimError::InvalidConfig("n and big_n must be at least 1".into()));
    }
    let rates = [config.flip_rates(0)?, config.flip_rates(1)?];
    let shifts = [config.shift_z0, config.shift_z1];
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut draw = |count: usize| {
        let mut c = Columns::with_capacity(count);
        for _ in 0..count {
            let z = bernoulli_half(&mut rng);
            let arm = z as usize;
            let y = if shifts[arm] + normal(&mut rng) > 0.0 { 1.0 } else { 0.0 };
            let flip_p = if y == 1.0 {
                rates[arm].false_negative
            } else {
                rates[arm].false_positive
            };
            let flip = rng.random::<f64>() < flip_p;
            c.z.push(z);
            c.y.push(y);
            c.yhat.push(if flip { 1.0 - y } else { y });
        }
        c
    };
    let s = draw(config.n);
    let u = draw(config.big_n);
    let names = vec!["z".to_string()];
    Ok(GeneratedData {
        shared: SharedDataset::new(None, names.clone(), vec![s.z], Some(0), s.y, s.yhat, None)?,
        surrogate: SurrogateDataset::new(None, names, vec![u.z], Some(0), u.yhat)?,
        truth: config.truth(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{correlation, mean, variance};

    #[test]
    fn perfect_predictor_copies_outcome() {
        let cfg = MeanDgpConfig {
            predictor_rho: 1.0,
            n: 200,
            big_n: 10,
            seed: 3,
            ..MeanDgpConfig::default()
        };
        let g = gen_mean_dgp(&cfg).unwrap();
        assert_eq!(g.shared.y(), g.shared.yhat());
    }

    #[test]
    fn same_seed_same_data() {
        let cfg = MeanDgpConfig {
            bias: BiasStructure::Linear(0.3),
            seed: 42,
            ..MeanDgpConfig::default()
        };
        let a = gen_mean_dgp(&cfg).unwrap();
        let b = gen_mean_dgp(&cfg).unwrap();
        assert_eq!(a.shared, b.shared);
        assert_eq!(a.surrogate, b.surrogate);
        let c = gen_mean_dgp(&MeanDgpConfig { seed: 43, ..cfg }).unwrap();
        assert_ne!(a.shared, c.shared);
    }

    #[test]
    fn constant_bias_law_of_large_numbers() {
        let cfg = MeanDgpConfig {
            bias: BiasStructure::Constant(0.5),
            n: 100_000,
            big_n: 1,
            seed: 5,
            ..MeanDgpConfig::default()
        };
        let g = gen_mean_dgp(&cfg).unwrap();
        let err: Vec<f64> = g.shared.yhat().iter().zip(g.shared.y()).map(|(f, y)| f - y).collect();
        let se = (variance(&err) / err.len() as f64).sqrt();
        assert!((mean(&err) - 0.5).abs() < 3.0 * se);
    }

    #[test]
    fn correlation_converges_to_rho() {
        for (rho, bias) in [
            (0.3, BiasStructure::None),
            (0.9, BiasStructure::Constant(1.0)),
            (-0.5, BiasStructure::None),
        ] {
            let cfg = MeanDgpConfig {
                predictor_rho: rho,
                bias,
                n: 100_000,
                big_n: 1,
                seed: 17,
                ..MeanDgpConfig::default()
            };
            let g = gen_mean_dgp(&cfg).unwrap();
            let r = correlation(g.shared.y(), g.shared.yhat()).unwrap();
            assert!((r - rho).abs() < 0.01, "rho {rho}: got {r}");
        }
    }

    #[test]
    fn rho_out_of_range() {
        let cfg = MeanDgpConfig {
            predictor_rho: 1.2,
            ..MeanDgpConfig::default()
        };
        assert!(matches!(gen_mean_dgp(&cfg), Err(SimError::InvalidConfig(_))));
    }

    #[test]
    fn ols_bias_error_moments() {
        let cfg = OlsBiasConfig {
            n: 100_000,
            big_n: 4,
            seed: 23,
            ..OlsBiasConfig::default()
        };
        let g = gen_ols_bias_dgp(&cfg).unwrap();
        let z = g.shared.z().unwrap();
        let err: Vec<f64> = g.shared.yhat().iter().zip(g.shared.y()).map(|(f, y)| f - y).collect();
        let within = |v: &[f64], target: f64| {
            let se = (variance(v) / v.len() as f64).sqrt();
            (mean(v) - target).abs() < 3.0 * se
        };
        assert!(within(&err, 0.0));
        let arm = |a: f64| -> Vec<f64> {
            err.iter().zip(z).filter(|(_, &zz)| zz == a).map(|(e, _)| *e).collect()
        };
        assert!(within(&arm(1.0), 0.2));
        assert!(within(&arm(0.0), -0.2));
    }

    #[test]
    fn ols_bias_preconditions() {
        let cfg = OlsBiasConfig {
            n: 3,
            ..OlsBiasConfig::default()
        };
        assert!(gen_ols_bias_dgp(&cfg).is_err());
    }

    #[test]
    fn binary_predictor_accuracy_and_bias() {
        let cfg = BinaryDgpConfig {
            n: 200_000,
            big_n: 1,
            seed: 8,
            ..BinaryDgpConfig::default()
        };
        let g = gen_binary_dgp(&cfg).unwrap();
        let (y, f) = (g.shared.y(), g.shared.yhat());
        let acc = y.iter().zip(f).filter(|(a, b)| a == b).count() as f64 / y.len() as f64;
        assert!((acc - 0.9).abs() < 0.005, "accuracy {acc}");
        let bias = mean(f) - mean(y);
        assert!((bias - 0.025).abs() < 0.005, "bias {bias}");
        assert!((mean(y) - cfg.truth()).abs() < 0.005);
    }

    #[test]
    fn binary_unattainable_accuracy() {
        let cfg = BinaryDgpConfig {
            accuracy: 0.5,
            bias_z1: 0.6,
            ..BinaryDgpConfig::default()
        };
        assert!(gen_binary_dgp(&cfg).is_err());
    }
}
