use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::stats::{correlation, z_critical};

use super::{check_alpha, open, MetricsError};

/// One effect estimated in a human study and in its surrogate replication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectPair {
    pub study_id: String,
    pub human_effect: f64,
    pub human_se: f64,
    pub llm_effect: f64,
    pub llm_se: f64,
}

impl EffectPair {
    pub fn validate(&self) -> Result<(), MetricsError> {
        let bad = |reason: &str| MetricsError::InvalidPair {
            study_id: self.study_id.clone(),
            reason: reason.to_string(),
        };
        if !(self.human_effect.is_finite() && self.llm_effect.is_finite()) {
            return Err(bad("effects must be finite"));
        }
        if !(self.human_se > 0.0 && self.human_se.is_finite()) {
            return Err(bad("human_se must be finite and > 0"));
        }
        if !(self.llm_se > 0.0 && self.llm_se.is_finite()) {
            return Err(bad("llm_se must be finite and > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Agreement {
    pub direction_agreement: f64,
    pub significance_agreement: f64,
    /// Among human-nonsignificant pairs, the share that are significant in
    /// the surrogate study; absent when every human effect is significant.
    pub false_significance_rate: Option<f64>,
    pub pairs: usize,
}

fn significant(effect: f64, se: f64, z: f64) -> bool {
    (effect / se).abs() > z
}

pub fn agreement_rates(pairs: &[EffectPair], alpha: f64) -> Result<Agreement, MetricsError> {
    check_alpha(alpha)?;
    if pairs.is_empty() {
        return Err(MetricsError::TooFew {
            what: "agreement_rates",
            need: 1,
            got: 0,
        });
    }
    let z = z_critical(alpha);
    let (mut same_sign, mut same_sig, mut null_h, mut false_sig) = (0usize, 0usize, 0usize, 0usize);
    for p in pairs {
        p.validate()?;
        if p.human_effect.signum() == p.llm_effect.signum() {
            same_sign += 1;
        }
        let sh = significant(p.human_effect, p.human_se, z);
        let sl = significant(p.llm_effect, p.llm_se, z);
        if sh == sl {
            same_sig += 1;
        }
        if !sh {
            null_h += 1;
            if sl {
                false_sig += 1;
            }
        }
    }
    let m = pairs.len() as f64;
    Ok(Agreement {
        direction_agreement: same_sign as f64 / m,
        significance_agreement: same_sig as f64 / m,
        false_significance_rate: (null_h > 0).then(|| false_sig as f64 / null_h as f64),
        pairs: pairs.len(),
    })
}

/// Pearson correlation of human and surrogate effect sizes.
pub fn effect_correlation(pairs: &[EffectPair]) -> Result<f64, MetricsError> {
    if pairs.len() < 3 {
        return Err(MetricsError::TooFew {
            what: "effect_correlation",
            need: 3,
            got: pairs.len(),
        });
    }
    for p in pairs {
        p.validate()?;
    }
    let h: Vec<f64> = pairs.iter().map(|p| p.human_effect).collect();
    let l: Vec<f64> = pairs.iter().map(|p| p.llm_effect).collect();
    correlation(&h, &l).ok_or(MetricsError::DegenerateVariance("an effect list"))
}

/// Reads `study_id,human_effect,human_se,llm_effect,llm_se` rows.
pub fn read_effect_pairs<R: Read>(reader: R) -> Result<Vec<EffectPair>, MetricsError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut out = Vec::new();
    for rec in rdr.deserialize() {
        let p: EffectPair = rec?;
        p.validate()?;
        out.push(p);
    }
    Ok(out)
}

pub fn load_effect_pairs(path: impl AsRef<Path>) -> Result<Vec<EffectPair>, MetricsError> {
    read_effect_pairs(open(path.as_ref())?)
}
