//! Geometric state of the swarm and the distance-sensing model.

use std::ops::{Add, Sub};

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trust::DEFAULT_INITIAL_TRUST;

/// A point on the plane, in metres.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance_to(self, other: Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Displacement per round, in metres.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Velocity {
    pub vx: f64,
    pub vy: f64,
}

impl Velocity {
    pub const ZERO: Velocity = Velocity { vx: 0.0, vy: 0.0 };

    pub const fn new(vx: f64, vy: f64) -> Self {
        Self { vx, vy }
    }

    pub fn norm(self) -> f64 {
        self.vx.hypot(self.vy)
    }

    pub fn scale(self, k: f64) -> Velocity {
        Velocity::new(self.vx * k, self.vy * k)
    }

    /// Rescale onto the circle of radius `s_max` if the speed exceeds it.
    pub fn clamp_speed(self, s_max: f64) -> Velocity {
        let norm = self.norm();
        if norm > s_max {
            self.scale(s_max / norm)
        } else {
            self
        }
    }
}

impl Add for Velocity {
    type Output = Velocity;
    fn add(self, rhs: Velocity) -> Velocity {
        Velocity::new(self.vx + rhs.vx, self.vy + rhs.vy)
    }
}

impl Add<Velocity> for Position {
    type Output = Position;
    fn add(self, v: Velocity) -> Position {
        Position::new(self.x + v.vx, self.y + v.vy)
    }
}

/// The displacement that carries `rhs` onto `self`.
impl Sub for Position {
    type Output = Velocity;
    fn sub(self, rhs: Position) -> Velocity {
        Velocity::new(self.x - rhs.x, self.y - rhs.y)
    }
}

/// World geometry and PSO constants shared by every agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldConfig {
    pub region_width: f64,
    pub region_height: f64,
    /// Always the centre of the region.
    pub target: Position,
    /// Variance of the dB-scale sensing noise.
    pub noise_power: f64,
    pub s_max: f64,
    pub c1: f64,
    pub c2: f64,
    pub horizon: usize,
    pub agent_count: usize,
}

impl Default for WorldConfig {
    fn default() -> Self {
        Self::new(60.0, 60.0)
    }
}

impl WorldConfig {
    /// A region of the given size with the target at its centre and the
    /// remaining parameters at their reference values.
    pub fn new(region_width: f64, region_height: f64) -> Self {
        Self {
            region_width,
            region_height,
            target: Position::new(region_width / 2.0, region_height / 2.0),
            noise_power: 0.1,
            s_max: 5.0,
            c1: 0.5,
            c2: 0.5,
            horizon: 50,
            agent_count: 100,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |key, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config(
                    key,
                    format!("must be a positive number, got {v}"),
                ))
            }
        };
        positive("region_width", self.region_width)?;
        positive("region_height", self.region_height)?;
        positive("s_max", self.s_max)?;
        if !(self.noise_power.is_finite() && self.noise_power >= 0.0) {
            return Err(Error::config(
                "noise_power",
                format!("must be non-negative, got {}", self.noise_power),
            ));
        }
        for (key, c) in [("c1", self.c1), ("c2", self.c2)] {
            if !c.is_finite() {
                return Err(Error::config(key, "must be finite"));
            }
        }
        if self.agent_count == 0 {
            return Err(Error::config("agent_count", "must be at least 1"));
        }
        if self.horizon == 0 {
            return Err(Error::config("horizon", "must be at least 1"));
        }
        Ok(())
    }
}

/// Lowest distance an agent has ever reported, and where it reported it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersonalBest {
    pub distance: f64,
    pub position: Option<Position>,
}

impl Default for PersonalBest {
    fn default() -> Self {
        Self {
            distance: f64::INFINITY,
            position: None,
        }
    }
}

impl PersonalBest {
    /// Record `(distance, position)` if strictly better. Returns whether it was.
    pub fn offer(&mut self, distance: f64, position: Position) -> bool {
        if distance < self.distance {
            self.distance = distance;
            self.position = Some(position);
            true
        } else {
            false
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentState {
    /// Zero-based index into the swarm.
    pub id: usize,
    pub position: Position,
    pub velocity: Velocity,
    pub personal_best: PersonalBest,
    pub trust: f64,
    /// Ground truth. Detection logic never reads this.
    pub is_attacker: bool,
    /// Output of the threshold attacker classifier at the latest iteration.
    pub flagged: bool,
}

pub fn true_distance(p: Position, target: Position) -> f64 {
    p.distance_to(target)
}

/// Applies log-normal noise `n` (in dB) to a true distance.
///
/// Deterministic in `(true_distance, n)`; draw `n` with [`sample_noise`].
pub fn measure_distance(true_distance: f64, n: f64) -> f64 {
    debug_assert!(
        true_distance >= 0.0,
        "negative true distance {true_distance}"
    );
    true_distance * 10f64.powf(n / 10.0)
}

/// Draws `n ~ N(0, noise_power)`.
pub fn sample_noise<R: Rng + ?Sized>(noise_power: f64, rng: &mut R) -> f64 {
    // std_dev is finite and non-negative for any validated config
    Normal::new(0.0, noise_power.sqrt())
        .expect("noise power must be non-negative")
        .sample(rng)
}

/// Places `agent_count` agents uniformly over the region, at rest.
pub fn init_swarm<R: Rng + ?Sized>(cfg: &WorldConfig, rng: &mut R) -> Vec<AgentState> {
    (0..cfg.agent_count)
        .map(|id| {
            let x = rng.random_range(0.0..=cfg.region_width);
            let y = rng.random_range(0.0..=cfg.region_height);
            AgentState {
                id,
                position: Position::new(x, y),
                velocity: Velocity::ZERO,
                personal_best: PersonalBest::default(),
                trust: DEFAULT_INITIAL_TRUST,
                is_attacker: false,
                flagged: false,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Concern, RunStreams};
    use proptest::prelude::*;

    #[test]
    fn true_distance_examples() {
        let origin = Position::new(0.0, 0.0);
        assert_eq!(true_distance(origin, origin), 0.0);
        assert_eq!(true_distance(origin, Position::new(3.0, 4.0)), 5.0);
        assert_close!(
            true_distance(Position::new(30.0, 30.0), origin),
            30.0 * 2f64.sqrt(),
            1e-12
        );
    }

    #[test]
    fn measure_distance_examples() {
        assert_eq!(measure_distance(10.0, 0.0), 10.0);
        assert_close!(measure_distance(10.0, 10.0), 100.0, 1e-12);
        assert_eq!(measure_distance(0.0, 3.7), 0.0);
    }

    #[test]
    #[should_panic(expected = "negative true distance")]
    fn measure_distance_rejects_negative() {
        measure_distance(-1.0, 0.0);
    }

    #[test]
    fn sensing_noise_matches_declared_law() {
        let mut rng = RunStreams::new(11).stream(Concern::Sensing);
        let n = 100_000;
        let db: Vec<f64> = (0..n)
            .map(|_| {
                let d = measure_distance(10.0, sample_noise(0.1, &mut rng));
                10.0 * (d / 10.0).log10()
            })
            .collect();
        let mean = db.iter().sum::<f64>() / n as f64;
        let var = db.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 0.1).abs() < 0.01, "variance {var}");
    }

    #[test]
    fn zero_noise_power_is_exact() {
        let mut rng = RunStreams::new(1).stream(Concern::Sensing);
        for _ in 0..100 {
            assert_eq!(sample_noise(0.0, &mut rng), 0.0);
        }
    }

    #[test]
    fn init_swarm_reference_region() {
        let cfg = WorldConfig::default();
        let agents = init_swarm(&cfg, &mut RunStreams::new(5).stream(Concern::Placement));
        assert_eq!(agents.len(), 100);
        for (i, a) in agents.iter().enumerate() {
            assert_eq!(a.id, i);
            assert!((0.0..=60.0).contains(&a.position.x));
            assert!((0.0..=60.0).contains(&a.position.y));
            assert_eq!(a.velocity, Velocity::ZERO);
            assert_eq!(a.personal_best.distance, f64::INFINITY);
            assert!(a.personal_best.position.is_none());
            assert!(!a.flagged);
        }
        assert_eq!(cfg.target, Position::new(30.0, 30.0));
    }

    #[test]
    fn init_swarm_single_agent_and_determinism() {
        let cfg = WorldConfig {
            agent_count: 1,
            ..WorldConfig::default()
        };
        let a = init_swarm(&cfg, &mut RunStreams::new(9).stream(Concern::Placement));
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].velocity, Velocity::ZERO);

        let cfg = WorldConfig::default();
        let s = RunStreams::new(9);
        assert_eq!(
            init_swarm(&cfg, &mut s.stream(Concern::Placement)),
            init_swarm(&cfg, &mut s.stream(Concern::Placement))
        );
    }

    #[test]
    fn validate_names_key() {
        let cfg = WorldConfig {
            s_max: 0.0,
            ..WorldConfig::default()
        };
        match cfg.validate() {
            Err(Error::Config { key, .. }) => assert_eq!(key, "s_max"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(WorldConfig {
            noise_power: -0.1,
            ..WorldConfig::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn clamp_speed_rescales() {
        assert_eq!(
            Velocity::new(6.0, 8.0).clamp_speed(5.0),
            Velocity::new(3.0, 4.0)
        );
        assert_eq!(
            Velocity::new(3.0, 4.0).clamp_speed(5.0),
            Velocity::new(3.0, 4.0)
        );
    }

    proptest! {
        #[test]
        fn measure_is_monotone(d in 0.0f64..1e3, dd in 1e-6f64..1e3, n in -10.0f64..10.0, dn in 1e-6f64..5.0) {
            prop_assert!(measure_distance(d + dd, n) > measure_distance(d, n));
            if d > 0.0 {
                prop_assert!(measure_distance(d, n + dn) > measure_distance(d, n));
            }
            prop_assert!(measure_distance(d, n) >= 0.0);
        }

        #[test]
        fn clamp_never_exceeds_limit(vx in -1e3f64..1e3, vy in -1e3f64..1e3, s in 0.1f64..20.0) {
            let v = Velocity::new(vx, vy).clamp_speed(s);
            prop_assert!(v.norm() <= s * (1.0 + 1e-12));
        }
    }
}
