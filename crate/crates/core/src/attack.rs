//! Insider data-injection attacks on distance reports.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackModel {
    None,
    /// Report a uniform draw from `[0, 1/theta]`.
    RandomDistance,
    /// Shift the report down by a uniform draw from `[-10 theta, 0]`, floored at 0.
    BiasedDistance,
    /// Divide the report by `10^(a/10)`, `a ~ N(0, theta)`.
    ExtraDistanceError,
    ZeroDistance,
}

impl AttackModel {
    pub const ALL: [AttackModel; 5] = [
        AttackModel::None,
        AttackModel::RandomDistance,
        AttackModel::BiasedDistance,
        AttackModel::ExtraDistanceError,
        AttackModel::ZeroDistance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AttackModel::None => "none",
            AttackModel::RandomDistance => "random-distance",
            AttackModel::BiasedDistance => "biased-distance",
            AttackModel::ExtraDistanceError => "extra-distance-error",
            AttackModel::ZeroDistance => "zero-distance",
        }
    }

    pub fn names() -> Vec<&'static str> {
        Self::ALL.iter().map(|m| m.name()).collect()
    }
}

impl fmt::Display for AttackModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AttackModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::unknown("attack model", s, &Self::names()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackSpec {
    pub model: AttackModel,
    /// Per-iteration probability that a compromised agent injects.
    pub rate: f64,
    pub theta: f64,
    pub attacker_count_min: usize,
    pub attacker_count_max: usize,
}

impl Default for AttackSpec {
    fn default() -> Self {
        Self {
            model: AttackModel::None,
            rate: 0.5,
            theta: 1.0,
            attacker_count_min: 3,
            attacker_count_max: 10,
        }
    }
}

impl AttackSpec {
    pub fn new(model: AttackModel, rate: f64) -> Self {
        Self {
            model,
            rate,
            ..Self::default()
        }
    }

    /// A spec with no compromised agents at all.
    pub fn disabled() -> Self {
        Self {
            attacker_count_min: 0,
            attacker_count_max: 0,
            ..Self::default()
        }
    }

    pub fn validate(&self, agent_count: usize) -> Result<()> {
        if !(self.rate > 0.0 && self.rate <= 1.0) {
            return Err(Error::config(
                "attack_rate",
                format!("must lie in (0, 1], got {}", self.rate),
            ));
        }
        if !(self.theta.is_finite() && self.theta > 0.0) {
            return Err(Error::config(
                "theta",
                format!("must be positive, got {}", self.theta),
            ));
        }
        if self.attacker_count_min > self.attacker_count_max {
            return Err(Error::config(
                "attacker_count_min",
                format!(
                    "{} exceeds attacker_count_max {}",
                    self.attacker_count_min, self.attacker_count_max
                ),
            ));
        }
        if self.attacker_count_max > agent_count {
            return Err(Error::config(
                "attacker_count_max",
                format!(
                    "{} exceeds agent_count {agent_count}",
                    self.attacker_count_max
                ),
            ));
        }
        Ok(())
    }
}

/// Picks the compromised agents for one run, returned in ascending order.
///
/// The set size is uniform on `[min, max]`; members are drawn without
/// replacement.
pub fn select_attackers<R: Rng + ?Sized>(
    agent_count: usize,
    spec: &AttackSpec,
    rng: &mut R,
) -> Result<Vec<usize>> {
    spec.validate(agent_count)?;
    let count = rng.random_range(spec.attacker_count_min..=spec.attacker_count_max);
    let mut members = index::sample(rng, agent_count, count).into_vec();
    members.sort_unstable();
    Ok(members)
}

pub fn should_attack<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> bool {
    rng.random::<f64>() < rate
}

pub fn biased_distance(d_raw: f64, delta: f64) -> f64 {
    (d_raw + delta).max(0.0)
}

pub fn extra_distance_error(d_raw: f64, a: f64) -> f64 {
    d_raw / 10f64.powf(a / 10.0)
}

/// Replaces an honest report with the value the attack model fabricates.
///
/// # Panics
///
/// On [`AttackModel::None`]; callers only inject for an actual attack.
pub fn inject<R: Rng + ?Sized>(model: AttackModel, theta: f64, d_raw: f64, rng: &mut R) -> f64 {
    debug_assert!(d_raw >= 0.0 && theta > 0.0);
    match model {
        AttackModel::None => panic!("inject called without an attack model"),
        AttackModel::RandomDistance => rng.random_range(0.0..=theta.recip()),
        AttackModel::BiasedDistance => {
            biased_distance(d_raw, rng.random_range(-10.0 * theta..=0.0))
        }
        AttackModel::ExtraDistanceError => {
            // theta is the variance of `a`
            let a = Normal::new(0.0, theta.sqrt())
                .expect("theta validated positive")
                .sample(rng);
            extra_distance_error(d_raw, a)
        }
        AttackModel::ZeroDistance => 0.0,
    }
}
