use serde::Serialize;

use crate::error::{Error, Result};
use crate::swarm::{true_distance, AgentState, Position};

/// Swarm-level measurements taken after iteration `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationMetrics {
    pub t: usize,
    pub mean_honest_distance: f64,
    /// Share of compromised agents not currently classified as attackers.
    pub r_md: f64,
    /// Share of honest agents currently classified as attackers.
    pub r_fa: f64,
}

/// Mean distance to the target over agents outside the attacker set.
pub fn mean_honest_distance(agents: &[AgentState], target: Position) -> Result<f64> {
    let (sum, count) = agents
        .iter()
        .filter(|a| !a.is_attacker)
        .fold((0.0, 0usize), |(s, n), a| {
            (s + true_distance(a.position, target), n + 1)
        });
    if count == 0 {
        return Err(Error::NoHonestAgents);
    }
    Ok(sum / count as f64)
}

/// `(r_md, r_fa)` of the attacker classifier. Both slices are indexed by agent.
///
/// A rate whose population is empty is reported as 0.
pub fn detection_rates(flags: &[bool], is_attacker: &[bool]) -> (f64, f64) {
    assert_eq!(flags.len(), is_attacker.len());
    let mut attackers = 0usize;
    let mut missed = 0usize;
    let mut honest = 0usize;
    let mut false_alarms = 0usize;
    for (&flagged, &attacker) in flags.iter().zip(is_attacker) {
        if attacker {
            attackers += 1;
            missed += usize::from(!flagged);
        } else {
            honest += 1;
            false_alarms += usize::from(flagged);
        }
    }
    let rate = |k: usize, n: usize| if n == 0 { 0.0 } else { k as f64 / n as f64 };
    (rate(missed, attackers), rate(false_alarms, honest))
}
