//! Trust-score regression and threshold-based attacker classification.
//!
//! Each agent carries a trust score in `[0, 1]`. After every anomaly
//! decision the score is rewarded (report looked normal) or penalised
//! (report flagged), with the reward and penalty rules chosen
//! independently. An agent whose score falls strictly below the threshold
//! is classified as an attacker for that iteration.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Step of the linear reward and penalty rules.
pub const LINEAR_STEP: f64 = 0.05;
pub const DEFAULT_INITIAL_TRUST: f64 = 0.5;
pub const DEFAULT_THRESHOLD: f64 = 0.382;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UpdateMode {
    Binary,
    Linear,
    Exponential,
}

impl UpdateMode {
    pub const ALL: [UpdateMode; 3] = [
        UpdateMode::Binary,
        UpdateMode::Linear,
        UpdateMode::Exponential,
    ];

    pub fn name(self) -> &'static str {
        match self {
            UpdateMode::Binary => "binary",
            UpdateMode::Linear => "linear",
            UpdateMode::Exponential => "exp",
        }
    }
}

impl FromStr for UpdateMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::unknown("update mode", s, &["binary", "linear", "exp"]))
    }
}

pub fn reward(mode: UpdateMode, rho: f64) -> f64 {
    reward_with_step(mode, rho, LINEAR_STEP)
}

pub fn penalize(mode: UpdateMode, rho: f64) -> f64 {
    penalize_with_step(mode, rho, LINEAR_STEP)
}

pub fn reward_with_step(mode: UpdateMode, rho: f64, step: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&rho), "trust {rho} outside [0, 1]");
    match mode {
        UpdateMode::Binary => 1.0,
        UpdateMode::Linear => (rho + step).min(1.0),
        UpdateMode::Exponential => (2.0 * rho).min(1.0),
    }
}

pub fn penalize_with_step(mode: UpdateMode, rho: f64, step: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&rho), "trust {rho} outside [0, 1]");
    match mode {
        UpdateMode::Binary => 0.0,
        UpdateMode::Linear => (rho - step).max(0.0),
        UpdateMode::Exponential => rho / 2.0,
    }
}

/// A reward rule, a penalty rule and the classifier settings.
///
/// Named presets are `<reward>-<penalty>` with modes `binary`, `linear`
/// and `exp`; see [`TrustStrategy::PRESETS`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrustStrategy {
    pub reward_mode: UpdateMode,
    pub penalty_mode: UpdateMode,
    pub rho_init: f64,
    pub rho_th: f64,
    pub linear_step: f64,
}

impl Default for TrustStrategy {
    fn default() -> Self {
        Self::new(UpdateMode::Linear, UpdateMode::Exponential)
    }
}

impl TrustStrategy {
    pub const PRESETS: [&'static str; 5] = [
        "binary-binary",
        "linear-linear",
        "exp-exp",
        "exp-linear",
        "linear-exp",
    ];

    pub fn new(reward_mode: UpdateMode, penalty_mode: UpdateMode) -> Self {
        Self {
            reward_mode,
            penalty_mode,
            rho_init: DEFAULT_INITIAL_TRUST,
            rho_th: DEFAULT_THRESHOLD,
            linear_step: LINEAR_STEP,
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        if !Self::PRESETS.contains(&name) {
            return Err(Error::unknown("trust strategy", name, &Self::PRESETS));
        }
        name.parse()
    }

    /// Every preset, in listing order.
    pub fn presets() -> Vec<TrustStrategy> {
        Self::PRESETS
            .iter()
            .map(|n| Self::preset(n).expect("preset names parse"))
            .collect()
    }

    /// `<reward>-<penalty>`, e.g. `linear-exp`.
    pub fn name(&self) -> String {
        format!("{}-{}", self.reward_mode.name(), self.penalty_mode.name())
    }

    pub fn validate(&self) -> Result<()> {
        for (key, v) in [("rho_init", self.rho_init), ("rho_th", self.rho_th)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::config(key, format!("must lie in [0, 1], got {v}")));
            }
        }
        if !(self.linear_step > 0.0 && self.linear_step <= 1.0) {
            return Err(Error::config(
                "linear_step",
                format!("must lie in (0, 1], got {}", self.linear_step),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for TrustStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Parses any `<reward>-<penalty>` pair, not only the presets.
impl FromStr for TrustStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (reward, penalty) = s
            .split_once('-')
            .ok_or_else(|| Error::unknown("trust strategy", s, &Self::PRESETS))?;
        Ok(Self::new(reward.parse()?, penalty.parse()?))
    }
}

/// One regression step given the anomaly decision `zeta`.
pub fn update_trust(strategy: &TrustStrategy, zeta: bool, rho: f64) -> f64 {
    if zeta {
        penalize_with_step(strategy.penalty_mode, rho, strategy.linear_step)
    } else {
        reward_with_step(strategy.reward_mode, rho, strategy.linear_step)
    }
}

/// True when the agent is considered an attacker.
pub fn classify_attacker(rho: f64, rho_th: f64) -> bool {
    rho < rho_th
}
