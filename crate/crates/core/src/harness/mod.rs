//! Monte-Carlo experiment runner.
//!
//! Runs are independent and may execute on a rayon pool; results are
//! gathered in run-index order before averaging, so the output never
//! depends on scheduling.

pub mod csv_out;
pub mod metrics;
pub mod plot;
pub mod reproduce;

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::engine::{EngineKind, Simulation};
use crate::error::{Error, Result};
use crate::scenario::Scenario;

pub use metrics::IterationMetrics;

/// Per-iteration means over every run of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsTable {
    pub scenario: Scenario,
    /// One row per iteration, `t = 1..=horizon`.
    pub rows: Vec<IterationMetrics>,
}

impl MetricsTable {
    /// Value of the `policy` column; conventional runs have no policy.
    pub fn policy_label(&self) -> &'static str {
        match self.scenario.engine {
            EngineKind::Conventional => "none",
            EngineKind::TrustAware => self.scenario.policy.name(),
        }
    }

    pub fn at(&self, t: usize) -> &IterationMetrics {
        &self.rows[t - 1]
    }

    pub fn last(&self) -> &IterationMetrics {
        self.rows.last().expect("tables have at least one row")
    }

    pub fn to_csv(&self) -> String {
        csv_out::to_csv_string(self)
    }

    /// Writes `<dir>/<scenario name>.csv`.
    pub fn write_csv_file(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(format!("{}.csv", self.scenario.name));
        fs::write(&path, self.to_csv()).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }
}

/// One run of `scenario`, reproducible without executing the others.
pub fn run_single(scenario: &Scenario, run: u64) -> Result<Vec<IterationMetrics>> {
    Simulation::new(scenario, run)?.run()
}

pub fn run_scenario(scenario: &Scenario) -> Result<MetricsTable> {
    scenario.validate()?;
    let runs: Vec<Vec<IterationMetrics>> = (0..scenario.runs as u64)
        .into_par_iter()
        .map(|r| run_single(scenario, r))
        .collect::<Result<_>>()?;
    Ok(MetricsTable {
        scenario: scenario.clone(),
        rows: average(&runs, scenario.world.horizon),
    })
}

/// [`run_scenario`] on a dedicated pool of `jobs` threads.
pub fn run_scenario_with_jobs(scenario: &Scenario, jobs: Option<usize>) -> Result<MetricsTable> {
    match jobs {
        None => run_scenario(scenario),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool construction")
            .install(|| run_scenario(scenario)),
    }
}

fn average(runs: &[Vec<IterationMetrics>], horizon: usize) -> Vec<IterationMetrics> {
    let n = runs.len() as f64;
    (0..horizon)
        .map(|i| {
            let mut acc = IterationMetrics {
                t: i + 1,
                mean_honest_distance: 0.0,
                r_md: 0.0,
                r_fa: 0.0,
            };
            for run in runs {
                acc.mean_honest_distance += run[i].mean_honest_distance;
                acc.r_md += run[i].r_md;
                acc.r_fa += run[i].r_fa;
            }
            acc.mean_honest_distance /= n;
            acc.r_md /= n;
            acc.r_fa /= n;
            acc
        })
        .collect()
}
