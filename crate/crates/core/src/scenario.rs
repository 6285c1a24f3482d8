use serde::{Deserialize, Serialize};

use crate::attack::AttackSpec;
use crate::detection::DetectorSpec;
use crate::engine::{EngineKind, GenBestPolicy};
use crate::error::{Error, Result};
use crate::swarm::WorldConfig;
use crate::trust::TrustStrategy;

pub const DEFAULT_RUNS: usize = 1000;
pub const DEFAULT_MASTER_SEED: u64 = 0x5EED_2023;

/// Everything needed to run one Monte-Carlo experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    /// Label written to the `scenario` CSV column and used as file stem.
    pub name: String,
    pub world: WorldConfig,
    pub attack: AttackSpec,
    pub detector: DetectorSpec,
    pub strategy: TrustStrategy,
    pub policy: GenBestPolicy,
    pub engine: EngineKind,
    pub runs: usize,
    pub master_seed: u64,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            name: "scenario".to_owned(),
            world: WorldConfig::default(),
            attack: AttackSpec::default(),
            detector: DetectorSpec::default(),
            strategy: TrustStrategy::default(),
            policy: GenBestPolicy::BinaryRejection,
            engine: EngineKind::Conventional,
            runs: DEFAULT_RUNS,
            master_seed: DEFAULT_MASTER_SEED,
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.world.validate()?;
        self.attack.validate(self.world.agent_count)?;
        self.detector.validate()?;
        self.strategy.validate()?;
        if self.runs == 0 {
            return Err(Error::config("runs", "must be at least 1"));
        }
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c))
        {
            return Err(Error::config(
                "name",
                format!(
                    "`{}` must be non-empty and use only [A-Za-z0-9._-]",
                    self.name
                ),
            ));
        }
        Ok(())
    }
}
