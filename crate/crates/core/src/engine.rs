//! PSO iteration dynamics.
//!
//! Two engines share the same sensing, attack and detection pipeline:
//!
//! * the conventional engine trusts every report and cascades personal-best
//!   improvements into the swarm-best record;
//! * the trust-aware engine invalidates a swarm-best record whose source is
//!   currently classified as an attacker, then rebuilds it from the current
//!   reports of trustworthy agents with one of the [`GenBestPolicy`] rules.
//!
//! Detection and trust regression run under both engines so the attacker
//! classifier can be evaluated on conventional dynamics too; only the
//! trust-aware engine feeds the classification back into the swarm.

use std::fmt;
use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::attack::{self, AttackModel};
use crate::detection;
use crate::error::{Error, Result};
use crate::harness::metrics::{detection_rates, mean_honest_distance, IterationMetrics};
use crate::rng::{Concern, RunStreams, SimRng};
use crate::scenario::Scenario;
use crate::swarm::{self, AgentState, Position, Velocity};
use crate::trust;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineKind {
    Conventional,
    TrustAware,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenBestPolicy {
    BinaryRejection,
    /// Compare trust-scaled distances `d / rho`.
    HyperbolicScaling,
    /// Resample the trustworthy set proportionally to trust, then compare raw distances.
    StochasticFiltering,
}

macro_rules! named_enum {
    ($ty:ident, $kind:literal, { $($variant:ident => $name:literal),+ $(,)? }) => {
        impl $ty {
            pub const ALL: &'static [$ty] = &[$($ty::$variant),+];

            pub fn name(self) -> &'static str {
                match self {
                    $($ty::$variant => $name),+
                }
            }

            pub fn names() -> Vec<&'static str> {
                vec![$($name),+]
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok($ty::$variant),)+
                    _ => Err(Error::unknown($kind, s, &Self::names())),
                }
            }
        }
    };
}

named_enum!(EngineKind, "engine", {
    Conventional => "conventional",
    TrustAware => "trust-aware",
});

named_enum!(GenBestPolicy, "policy", {
    BinaryRejection => "binary-rejection",
    HyperbolicScaling => "hyperbolic",
    StochasticFiltering => "stochastic",
});

/// The swarm-global best record.
///
/// `distance == +inf` marks an unset or invalidated record. `position`
/// keeps the last valid swarm-best position across invalidation so the
/// velocity update always has an attractor once one has existed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwarmBest {
    pub distance: f64,
    pub position: Option<Position>,
    pub source: usize,
}

impl Default for SwarmBest {
    fn default() -> Self {
        Self {
            distance: f64::INFINITY,
            position: None,
            source: 0,
        }
    }
}

impl SwarmBest {
    pub fn is_set(&self) -> bool {
        self.distance.is_finite()
    }

    pub fn invalidate(&mut self) {
        self.distance = f64::INFINITY;
    }

    fn replace(&mut self, c: &Candidate) {
        self.distance = c.distance;
        self.position = Some(c.position);
        self.source = c.id;
    }
}

/// A trustworthy agent's report for the current iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub distance: f64,
    pub position: Position,
    pub trust: f64,
    pub id: usize,
}

#[allow(clippy::too_many_arguments)]
pub fn update_velocity(
    v: Velocity,
    p: Position,
    personal_best: Position,
    swarm_best: Position,
    c1: f64,
    c2: f64,
    r1: f64,
    r2: f64,
    s_max: f64,
) -> Velocity {
    let cognitive = (personal_best - p).scale(c1 * r1);
    let social = (swarm_best - p).scale(c2 * r2);
    (v + cognitive + social).clamp_speed(s_max)
}

/// Scans candidates in order, keeping the first strict minimum.
pub fn genbest_binary(candidates: &[Candidate], mut best: SwarmBest) -> SwarmBest {
    for c in candidates {
        if c.distance < best.distance {
            best.replace(c);
        }
    }
    best
}

/// Like [`genbest_binary`] but on `distance / trust`.
///
/// `source_trust` is the current trust of the agent that produced `best`.
pub fn genbest_hyperbolic(
    candidates: &[Candidate],
    mut best: SwarmBest,
    source_trust: f64,
) -> SwarmBest {
    let mut incumbent = best.distance / source_trust;
    for c in candidates {
        assert!(c.trust > 0.0, "candidate {} has zero trust", c.id);
        let scaled = c.distance / c.trust;
        if scaled < incumbent {
            best.replace(c);
            incumbent = scaled;
        }
    }
    best
}

/// Normalised sampling weights of the candidates.
pub fn filter_pmf(candidates: &[Candidate]) -> Result<Vec<f64>> {
    let total: f64 = candidates.iter().map(|c| c.trust).sum();
    if total.is_nan() || total <= 0.0 || candidates.iter().any(|c| c.trust < 0.0) {
        return Err(Error::DegeneratePmf);
    }
    Ok(candidates.iter().map(|c| c.trust / total).collect())
}

/// Draws `candidates.len()` indices i.i.d. with probability proportional to trust.
pub fn filter_candidates<R: Rng + ?Sized>(
    candidates: &[Candidate],
    rng: &mut R,
) -> Result<Vec<usize>> {
    if candidates.is_empty() {
        return Ok(Vec::new());
    }
    let dist =
        WeightedIndex::new(candidates.iter().map(|c| c.trust)).map_err(|_| Error::DegeneratePmf)?;
    Ok((0..candidates.len()).map(|_| dist.sample(rng)).collect())
}

pub fn genbest_stochastic<R: Rng + ?Sized>(
    candidates: &[Candidate],
    mut best: SwarmBest,
    rng: &mut R,
) -> Result<SwarmBest> {
    for k in filter_candidates(candidates, rng)? {
        let c = &candidates[k];
        if c.distance < best.distance {
            best.replace(c);
        }
    }
    Ok(best)
}

/// State of a single Monte-Carlo run.
#[derive(Debug, Clone)]
pub struct Simulation {
    scenario: Scenario,
    agents: Vec<AgentState>,
    best: SwarmBest,
    attackers: Vec<usize>,
    /// Distances reported at the latest iteration, after injection.
    reports: Vec<f64>,
    iteration: usize,
    sensing: SimRng,
    detector: SimRng,
    motion: SimRng,
    filtering: SimRng,
    attack_streams: Vec<Option<SimRng>>,
}

impl Simulation {
    /// Initialises run `run` of `scenario`, seeded from its master seed.
    pub fn new(scenario: &Scenario, run: u64) -> Result<Self> {
        Self::with_streams(scenario, RunStreams::for_run(scenario.master_seed, run))
    }

    pub fn with_streams(scenario: &Scenario, streams: RunStreams) -> Result<Self> {
        scenario.validate()?;
        let world = &scenario.world;
        let mut agents = swarm::init_swarm(world, &mut streams.stream(Concern::Placement));
        let attackers = attack::select_attackers(
            world.agent_count,
            &scenario.attack,
            &mut streams.stream(Concern::AttackerSelection),
        )?;
        let mut attack_streams = vec![None; world.agent_count];
        for &i in &attackers {
            agents[i].is_attacker = true;
            attack_streams[i] = Some(streams.agent_stream(Concern::Attack, i));
        }
        for a in &mut agents {
            a.trust = scenario.strategy.rho_init;
        }
        Ok(Self {
            scenario: scenario.clone(),
            reports: vec![f64::INFINITY; agents.len()],
            agents,
            best: SwarmBest::default(),
            attackers,
            iteration: 0,
            sensing: streams.stream(Concern::Sensing),
            detector: streams.stream(Concern::Detector),
            motion: streams.stream(Concern::Motion),
            filtering: streams.stream(Concern::Filtering),
            attack_streams,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn agents(&self) -> &[AgentState] {
        &self.agents
    }

    pub fn best(&self) -> &SwarmBest {
        &self.best
    }

    /// Compromised agents, ascending.
    pub fn attackers(&self) -> &[usize] {
        &self.attackers
    }

    pub fn reports(&self) -> &[f64] {
        &self.reports
    }

    /// Iterations completed so far.
    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// Advances one iteration with the scenario's engine.
    pub fn step(&mut self) -> Result<IterationMetrics> {
        match self.scenario.engine {
            EngineKind::Conventional => self.step_conventional(),
            EngineKind::TrustAware => self.step_trust_aware(),
        }
    }

    /// Runs the remaining iterations up to the horizon.
    pub fn run(mut self) -> Result<Vec<IterationMetrics>> {
        let horizon = self.scenario.world.horizon;
        let mut out = Vec::with_capacity(horizon.saturating_sub(self.iteration));
        while self.iteration < horizon {
            out.push(self.step()?);
        }
        Ok(out)
    }

    pub fn step_conventional(&mut self) -> Result<IterationMetrics> {
        self.sense(true);
        self.advance()
    }

    pub fn step_trust_aware(&mut self) -> Result<IterationMetrics> {
        self.sense(false);

        if self.agents[self.best.source].flagged {
            self.best.invalidate();
        }

        let candidates: Vec<Candidate> = self
            .agents
            .iter()
            .filter(|a| !a.flagged)
            .map(|a| Candidate {
                distance: self.reports[a.id],
                position: a.position,
                trust: a.trust,
                id: a.id,
            })
            .collect();
        if !candidates.is_empty() {
            self.best = match self.scenario.policy {
                GenBestPolicy::BinaryRejection => genbest_binary(&candidates, self.best),
                GenBestPolicy::HyperbolicScaling => {
                    let source_trust = self.agents[self.best.source].trust;
                    genbest_hyperbolic(&candidates, self.best, source_trust)
                }
                GenBestPolicy::StochasticFiltering => {
                    genbest_stochastic(&candidates, self.best, &mut self.filtering)?
                }
            };
        }
        self.advance()
    }

    /// Measurement, injection, personal-best update and attacker
    /// classification for every agent. With `cascade`, personal-best
    /// improvements also update the swarm best.
    fn sense(&mut self, cascade: bool) {
        let world = &self.scenario.world;
        let spec = &self.scenario.attack;
        for agent in &mut self.agents {
            let truth = swarm::true_distance(agent.position, world.target);
            let n = swarm::sample_noise(world.noise_power, &mut self.sensing);
            let mut d = swarm::measure_distance(truth, n);

            let mut attacked_now = false;
            if spec.model != AttackModel::None {
                if let Some(rng) = self.attack_streams[agent.id].as_mut() {
                    if attack::should_attack(spec.rate, rng) {
                        d = attack::inject(spec.model, spec.theta, d, rng);
                        attacked_now = true;
                    }
                }
            }
            self.reports[agent.id] = d;

            if agent.personal_best.offer(d, agent.position)
                && cascade
                && agent.personal_best.distance < self.best.distance
            {
                self.best.distance = agent.personal_best.distance;
                self.best.position = agent.personal_best.position;
                self.best.source = agent.id;
            }

            let strategy = &self.scenario.strategy;
            let zeta =
                detection::classify(attacked_now, &self.scenario.detector, &mut self.detector);
            agent.trust = trust::update_trust(strategy, zeta, agent.trust);
            agent.flagged = trust::classify_attacker(agent.trust, strategy.rho_th);
        }
    }

    /// Velocity update, speed clamp and position advance, then metrics.
    fn advance(&mut self) -> Result<IterationMetrics> {
        let world = &self.scenario.world;
        for agent in &mut self.agents {
            let r1: f64 = self.motion.random();
            let r2: f64 = self.motion.random();
            let own = agent.personal_best.position.unwrap_or(agent.position);
            let guide = self.best.position.unwrap_or(own);
            agent.velocity = update_velocity(
                agent.velocity,
                agent.position,
                own,
                guide,
                world.c1,
                world.c2,
                r1,
                r2,
                world.s_max,
            );
        }
        for agent in &mut self.agents {
            agent.position = agent.position + agent.velocity;
        }
        self.iteration += 1;

        let flags: Vec<bool> = self.agents.iter().map(|a| a.flagged).collect();
        let truth: Vec<bool> = self.agents.iter().map(|a| a.is_attacker).collect();
        let (r_md, r_fa) = detection_rates(&flags, &truth);
        Ok(IterationMetrics {
            t: self.iteration,
            mean_honest_distance: mean_honest_distance(&self.agents, world.target)?,
            r_md,
            r_fa,
        })
    }
}
