//! Trust-aware particle swarm optimisation for multi-agent target
//! localisation under insider data-injection attacks.
//!
//! A swarm of agents measures noisy distances to an unknown target and
//! shares `(position, distance)` reports. Compromised agents may replace
//! their reports with fabricated distances. An abstract anomaly detector
//! with fixed error rates feeds per-agent trust scores, which a threshold
//! classifier turns into attacker labels; the trust-aware engine uses those
//! labels and scores when maintaining the swarm-best record.
//!
//! Module map:
//!
//! * [`swarm`]: geometry, world configuration, sensing model
//! * [`attack`]: attacker selection and injection models
//! * [`detection`]: the stochastic anomaly detector
//! * [`trust`]: trust regression and attacker classification
//! * [`engine`]: conventional and trust-aware PSO iterations
//! * [`harness`]: Monte-Carlo runner, metrics, CSV/SVG output, figure grids
//! * [`config`], [`cli`]: scenario files and the command line

#[cfg(test)]
macro_rules! assert_close {
    ($a:expr, $b:expr, $tol:expr) => {{
        let (a, b): (f64, f64) = ($a, $b);
        assert!((a - b).abs() <= $tol, "{a} vs {b} (tol {})", $tol);
    }};
}

pub mod attack;
pub mod cli;
pub mod config;
pub mod detection;
pub mod engine;
pub mod error;
pub mod harness;
pub mod rng;
pub mod scenario;
pub mod swarm;
pub mod trust;

pub use attack::{AttackModel, AttackSpec};
pub use detection::DetectorSpec;
pub use engine::{Candidate, EngineKind, GenBestPolicy, Simulation, SwarmBest};
pub use error::{Error, Result};
pub use harness::reproduce::Figure;
pub use harness::{run_scenario, IterationMetrics, MetricsTable};
pub use scenario::Scenario;
pub use swarm::{AgentState, Position, Velocity, WorldConfig};
pub use trust::{TrustStrategy, UpdateMode};
