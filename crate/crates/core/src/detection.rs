//! Abstract data-anomaly detector.
//!
//! The detector is a stochastic oracle that knows whether a report was
//! injected and errs at fixed rates. It never looks at the distance value.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorSpec {
    /// Probability that an injected report goes unflagged.
    pub p_md: f64,
    /// Probability that a genuine report is flagged.
    pub p_fa: f64,
}

impl Default for DetectorSpec {
    fn default() -> Self {
        Self {
            p_md: 0.5,
            p_fa: 0.05,
        }
    }
}

impl DetectorSpec {
    pub const PERFECT: DetectorSpec = DetectorSpec {
        p_md: 0.0,
        p_fa: 0.0,
    };

    pub fn validate(&self) -> Result<()> {
        for (key, p) in [("p_md", self.p_md), ("p_fa", self.p_fa)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config(key, format!("must lie in [0, 1], got {p}")));
            }
        }
        Ok(())
    }
}

/// Whether the detector labels this iteration's report as an anomaly.
///
/// `attacked_now` is true only when the agent is compromised *and* injected
/// at this iteration; a compromised agent reporting honestly falls under the
/// false-alarm branch. Exactly one uniform draw is consumed per call.
pub fn classify<R: Rng + ?Sized>(attacked_now: bool, spec: &DetectorSpec, rng: &mut R) -> bool {
    let p_flag = if attacked_now {
        1.0 - spec.p_md
    } else {
        spec.p_fa
    };
    rng.random::<f64>() < p_flag
}
