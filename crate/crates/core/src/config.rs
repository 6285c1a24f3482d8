//! Flat JSON scenario files.
//!
//! Every key is optional and defaults to the reference experiment setup.
//! Unknown keys are rejected.
//!
//! ```json
//! {
//!   "name": "zero-50",
//!   "engine": "trust-aware",
//!   "policy": "stochastic",
//!   "strategy": "linear-exp",
//!   "attack_model": "zero-distance",
//!   "attack_rate": 0.5,
//!   "runs": 200,
//!   "master_seed": 42
//! }
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::Scenario;
use crate::swarm::WorldConfig;
use crate::trust::{TrustStrategy, UpdateMode};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agent_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region_width: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region_height: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_power: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attack_model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attack_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attacker_count_min: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attacker_count_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_md: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_fa: Option<f64>,
    /// Preset name such as `linear-exp`. Excludes `reward_mode`/`penalty_mode`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reward_mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub penalty_mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_init: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_th: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linear_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engine: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
}

fn parse_key<T>(key: &'static str, value: &Option<String>, default: T) -> Result<T>
where
    T: std::str::FromStr<Err = Error>,
{
    match value {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|e: Error| Error::config(key, e.to_string())),
    }
}

impl ScenarioFile {
    pub fn into_scenario(self) -> Result<Scenario> {
        let base = Scenario::default();

        let mut world = WorldConfig::new(
            self.region_width.unwrap_or(base.world.region_width),
            self.region_height.unwrap_or(base.world.region_height),
        );
        world.noise_power = self.noise_power.unwrap_or(world.noise_power);
        world.s_max = self.s_max.unwrap_or(world.s_max);
        world.c1 = self.c1.unwrap_or(world.c1);
        world.c2 = self.c2.unwrap_or(world.c2);
        world.horizon = self.horizon.unwrap_or(world.horizon);
        world.agent_count = self.agent_count.unwrap_or(world.agent_count);

        let mut attack = base.attack.clone();
        attack.model = parse_key("attack_model", &self.attack_model, attack.model)?;
        attack.rate = self.attack_rate.unwrap_or(attack.rate);
        attack.theta = self.theta.unwrap_or(attack.theta);
        attack.attacker_count_min = self.attacker_count_min.unwrap_or(attack.attacker_count_min);
        attack.attacker_count_max = self.attacker_count_max.unwrap_or(attack.attacker_count_max);

        let mut detector = base.detector;
        detector.p_md = self.p_md.unwrap_or(detector.p_md);
        detector.p_fa = self.p_fa.unwrap_or(detector.p_fa);

        let mut strategy = match (&self.strategy, &self.reward_mode, &self.penalty_mode) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(Error::config(
                    "strategy",
                    "give either `strategy` or `reward_mode`/`penalty_mode`, not both",
                ))
            }
            (Some(name), None, None) => {
                TrustStrategy::preset(name).map_err(|e| Error::config("strategy", e.to_string()))?
            }
            (None, reward, penalty) => TrustStrategy::new(
                parse_key::<UpdateMode>("reward_mode", reward, base.strategy.reward_mode)?,
                parse_key::<UpdateMode>("penalty_mode", penalty, base.strategy.penalty_mode)?,
            ),
        };
        strategy.rho_init = self.rho_init.unwrap_or(strategy.rho_init);
        strategy.rho_th = self.rho_th.unwrap_or(strategy.rho_th);
        strategy.linear_step = self.linear_step.unwrap_or(strategy.linear_step);

        let scenario = Scenario {
            name: self.name.unwrap_or(base.name),
            world,
            attack,
            detector,
            strategy,
            policy: parse_key("policy", &self.policy, base.policy)?,
            engine: parse_key("engine", &self.engine, base.engine)?,
            runs: self.runs.unwrap_or(base.runs),
            master_seed: self.master_seed.unwrap_or(base.master_seed),
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// The fully spelled-out file for `s`.
    pub fn from_scenario(s: &Scenario) -> Self {
        Self {
            name: Some(s.name.clone()),
            agent_count: Some(s.world.agent_count),
            region_width: Some(s.world.region_width),
            region_height: Some(s.world.region_height),
            noise_power: Some(s.world.noise_power),
            s_max: Some(s.world.s_max),
            c1: Some(s.world.c1),
            c2: Some(s.world.c2),
            horizon: Some(s.world.horizon),
            attack_model: Some(s.attack.model.name().to_owned()),
            attack_rate: Some(s.attack.rate),
            theta: Some(s.attack.theta),
            attacker_count_min: Some(s.attack.attacker_count_min),
            attacker_count_max: Some(s.attack.attacker_count_max),
            p_md: Some(s.detector.p_md),
            p_fa: Some(s.detector.p_fa),
            strategy: None,
            reward_mode: Some(s.strategy.reward_mode.name().to_owned()),
            penalty_mode: Some(s.strategy.penalty_mode.name().to_owned()),
            rho_init: Some(s.strategy.rho_init),
            rho_th: Some(s.strategy.rho_th),
            linear_step: Some(s.strategy.linear_step),
            policy: Some(s.policy.name().to_owned()),
            engine: Some(s.engine.name().to_owned()),
            runs: Some(s.runs),
            master_seed: Some(s.master_seed),
        }
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    serde_json::from_str::<ScenarioFile>(text)?.into_scenario()
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).map_err(|source| Error::ConfigRead {
        path: path.to_owned(),
        source,
    })?;
    parse_scenario(&text).map_err(|e| match e {
        Error::Json(source) => Error::ConfigParse {
            path: path.to_owned(),
            source,
        },
        other => other,
    })
}

pub fn scenario_to_json(s: &Scenario) -> String {
    serde_json::to_string_pretty(&ScenarioFile::from_scenario(s)).expect("plain data serialises")
}
