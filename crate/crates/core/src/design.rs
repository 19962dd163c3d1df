//! Design analysis for mixed human/surrogate studies.
//!
//! With a tuned prediction-powered mean, `n` human rows plus `N` surrogate
//! rows whose predictions correlate `rho` with the outcome are worth
//! `n / (1 - rho^2 N/(N+n))` human rows. Power and budget allocation for a
//! two-arm comparison follow by substituting that effective size into the
//! usual normal-approximation formulas.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::SharedDataset;
use crate::stats::{correlation, normal_cdf, z_critical};

#[derive(Debug, Error, PartialEq)]
pub enum DesignError {
    #[error("invalid design input: {0}")]
    InvalidInput(String),
    #[error("budget {budget} cannot buy the minimum of {min_humans} human rows at {cost_human} each")]
    Infeasible {
        budget: f64,
        cost_human: f64,
        min_humans: u64,
    },
}

/// Minimum human rows: two per arm.
pub const MIN_HUMANS: u64 = 4;

/// Above this many candidate human sample sizes the allocation search
/// switches from exhaustive to coarse-to-fine.
const EXHAUSTIVE_LIMIT: u64 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignInputs {
    /// Anticipated correlation between outcome and surrogate prediction.
    pub rho: f64,
    pub sigma_y: f64,
    /// Target difference in arm means.
    pub effect: f64,
    pub alpha: f64,
    pub cost_human: f64,
    pub cost_surrogate: f64,
    pub budget: f64,
}

impl DesignInputs {
    pub fn validate(&self) -> Result<(), DesignError> {
        let bad = |m: &str| Err(DesignError::InvalidInput(m.to_string()));
        let all = [
            self.rho,
            self.sigma_y,
            self.effect,
            self.alpha,
            self.cost_human,
            self.cost_surrogate,
            self.budget,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return bad("all inputs must be finite");
        }
        if self.rho.abs() > 1.0 {
            return bad("rho must lie in [-1, 1]");
        }
        if self.sigma_y <= 0.0 {
            return bad("sigma_y must be positive");
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad("alpha must lie in (0, 1)");
        }
        if self.cost_human <= 0.0 || self.cost_surrogate <= 0.0 || self.budget <= 0.0 {
            return bad("costs and budget must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignPlan {
    pub n_human: u64,
    pub n_surrogate: u64,
    pub achieved_power: f64,
    pub ess: f64,
    pub total_cost: f64,
}

fn ess_unchecked(n: f64, big_n: f64, rho: f64) -> f64 {
    if big_n == 0.0 || rho == 0.0 {
        return n;
    }
    n / (1.0 - rho * rho * big_n / (big_n + n))
}

/// Human-equivalent sample size of `n` human plus `big_n` surrogate rows.
pub fn effective_sample_size(n: u64, big_n: u64, rho: f64) -> Result<f64, DesignError> {
    if n < 1 {
        return Err(DesignError::InvalidInput("n must be at least 1".into()));
    }
    if !(rho.abs() <= 1.0) {
        return Err(DesignError::InvalidInput("rho must lie in [-1, 1]".into()));
    }
    Ok(ess_unchecked(n as f64, big_n as f64, rho))
}

/// Sample correlation between outcome and prediction on a pilot table.
pub fn pilot_rho(pilot: &SharedDataset) -> Result<f64, DesignError> {
    correlation(pilot.y(), pilot.yhat()).ok_or_else(|| {
        DesignError::InvalidInput("pilot outcome or prediction has zero variance".into())
    })
}

fn power_unchecked(inputs: &DesignInputs, n_human: f64, n_surrogate: f64) -> f64 {
    let ess = ess_unchecked(n_human, n_surrogate, inputs.rho);
    // Each arm holds ess/2 effective rows; the difference of the arm means
    // has variance 2 sigma^2 / (ess/2).
    let se = (2.0 * inputs.sigma_y * inputs.sigma_y / (ess / 2.0)).sqrt();
    let z = z_critical(inputs.alpha);
    let shift = inputs.effect.abs() / se;
    normal_cdf(shift - z) + normal_cdf(-shift - z)
}

/// Two-sided normal-approximation power of a two-arm comparison with the
/// human and surrogate rows split evenly between arms.
pub fn power_two_arm(
    inputs: &DesignInputs,
    n_human: u64,
    n_surrogate: u64,
) -> Result<f64, DesignError> {
    inputs.validate()?;
    if n_human < MIN_HUMANS {
        return Err(DesignError::InvalidInput(format!(
            "n_human must be at least {MIN_HUMANS} (two per arm), got {n_human}"
        )));
    }
    Ok(power_unchecked(inputs, n_human as f64, n_surrogate as f64))
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    n: u64,
    big_n: u64,
    power: f64,
    ess: f64,
    cost: f64,
}

impl Candidate {
    /// Higher power, then higher effective size, then lower cost, then
    /// fewer surrogate rows.
    fn beats(&self, other: &Candidate) -> bool {
        if self.power != other.power {
            return self.power > other.power;
        }
        if self.ess != other.ess {
            return self.ess > other.ess;
        }
        if self.cost != other.cost {
            return self.cost < other.cost;
        }
        self.big_n < other.big_n
    }
}

fn candidate(inputs: &DesignInputs, n: u64) -> Candidate {
    let remaining = inputs.budget - n as f64 * inputs.cost_human;
    let mut big_n = if inputs.rho == 0.0 || remaining <= 0.0 {
        0
    } else {
        (remaining / inputs.cost_surrogate).floor() as u64
    };
    while big_n > 0 && n as f64 * inputs.cost_human + big_n as f64 * inputs.cost_surrogate > inputs.budget {
        big_n -= 1;
    }
    let (nf, bf) = (n as f64, big_n as f64);
    Candidate {
        n,
        big_n,
        power: power_unchecked(inputs, nf, bf),
        ess: ess_unchecked(nf, bf, inputs.rho),
        cost: nf * inputs.cost_human + bf * inputs.cost_surrogate,
    }
}

fn best_over(inputs: &DesignInputs, ns: impl Iterator<Item = u64>) -> Candidate {
    let mut best: Option<Candidate> = None;
    for n in ns {
        let c = candidate(inputs, n);
        if best.as_ref().is_none_or(|b| c.beats(b)) {
            best = Some(c);
        }
    }
    best.expect("non-empty search range")
}

/// Chooses human and surrogate sample sizes that maximise power within the
/// budget. For a fixed human count the best surrogate count is the largest
/// affordable one (or zero when `rho = 0`), so the search runs over the
/// human count only.
pub fn allocate_budget(inputs: &DesignInputs) -> Result<DesignPlan, DesignError> {
    inputs.validate()?;
    let n_max = (inputs.budget / inputs.cost_human).floor() as u64;
    if n_max < MIN_HUMANS {
        return Err(DesignError::Infeasible {
            budget: inputs.budget,
            cost_human: inputs.cost_human,
            min_humans: MIN_HUMANS,
        });
    }
    let best = if n_max - MIN_HUMANS <= EXHAUSTIVE_LIMIT {
        best_over(inputs, MIN_HUMANS..=n_max)
    } else {
        let (mut lo, mut hi) = (MIN_HUMANS, n_max);
        let mut step = ((hi - lo) / 1000).max(1);
        loop {
            let grid = (lo..=hi).step_by(step as usize).chain(std::iter::once(hi));
            let b = best_over(inputs, grid);
            if step == 1 {
                break b;
            }
            lo = b.n.saturating_sub(step).max(MIN_HUMANS);
            hi = (b.n + step).min(n_max);
            step = (step / 10).max(1);
        }
    };
    Ok(DesignPlan {
        n_human: best.n,
        n_surrogate: best.big_n,
        achieved_power: best.power,
        ess: best.ess,
        total_cost: best.cost,
    })
}
