//! Scenario grids behind the three reference experiments.
//!
//! * `fig2`: conventional PSO under each attack model at 50 % and 10 %.
//! * `fig3`: attacker-classifier accuracy of the five trust strategies
//!   under zero-distance attacks at 50 % and 10 %.
//! * `fig4`: conventional PSO against trust-aware PSO with each swarm-best
//!   policy, for zero- and random-distance attacks at 50 % and 10 %.
//!
//! Every scenario becomes one CSV; with plotting enabled each panel of the
//! figure additionally becomes one SVG overlaying its series.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::attack::{AttackModel, AttackSpec};
use crate::engine::{EngineKind, GenBestPolicy};
use crate::error::{Error, Result};
use crate::harness::plot::{line_chart_svg, Series};
use crate::harness::{run_scenario_with_jobs, MetricsTable};
use crate::rng::mix64;
use crate::scenario::{Scenario, DEFAULT_MASTER_SEED, DEFAULT_RUNS};
use crate::trust::TrustStrategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
}

impl Figure {
    pub const ALL: [Figure; 3] = [Figure::Fig2, Figure::Fig3, Figure::Fig4];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::unknown("figure", s, &["fig2", "fig3", "fig4"]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    MeanDistance,
    MissRate,
    FalseAlarmRate,
}

impl Metric {
    fn axis_label(self) -> &'static str {
        match self {
            Metric::MeanDistance => "mean honest distance to target (m)",
            Metric::MissRate => "attacker misdetection rate r_md",
            Metric::FalseAlarmRate => "attacker false alarm rate r_fa",
        }
    }

    pub fn value(self, m: &crate::harness::IterationMetrics) -> f64 {
        match self {
            Metric::MeanDistance => m.mean_honest_distance,
            Metric::MissRate => m.r_md,
            Metric::FalseAlarmRate => m.r_fa,
        }
    }
}

/// One sub-figure: a metric plotted for several scenarios.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub id: String,
    pub title: String,
    pub metric: Metric,
    /// Indices into [`FigurePlan::scenarios`].
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePlan {
    pub figure: Figure,
    pub scenarios: Vec<Scenario>,
    pub panels: Vec<Panel>,
}

/// Seed of a named scenario, so each scenario draws independently of its neighbours.
pub fn scenario_seed(base: u64, name: &str) -> u64 {
    let h = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3)
    });
    mix64(base ^ h)
}

fn rate_label(rate: f64) -> String {
    format!("{}%", (rate * 100.0).round())
}

pub fn figure_plan(figure: Figure, runs: usize, base_seed: u64) -> FigurePlan {
    let mut scenarios = Vec::new();
    let mut panels = Vec::new();
    let mut push = |name: String, engine, attack, strategy, policy| {
        scenarios.push(Scenario {
            master_seed: scenario_seed(base_seed, &name),
            name,
            engine,
            attack,
            strategy,
            policy,
            runs,
            ..Scenario::default()
        });
        scenarios.len() - 1
    };

    match figure {
        Figure::Fig2 => {
            for (panel, rate) in [("fig2a", 0.5), ("fig2b", 0.1)] {
                let members = AttackModel::ALL
                    .iter()
                    .map(|&m| {
                        push(
                            format!("{panel}-{}", m.name()),
                            EngineKind::Conventional,
                            AttackSpec::new(m, rate),
                            TrustStrategy::default(),
                            GenBestPolicy::BinaryRejection,
                        )
                    })
                    .collect();
                panels.push(Panel {
                    id: panel.to_owned(),
                    title: format!("Conventional PSO, attack rate {}", rate_label(rate)),
                    metric: Metric::MeanDistance,
                    members,
                });
            }
        }
        Figure::Fig3 => {
            for (pair, rate) in [(["fig3a", "fig3b"], 0.5), (["fig3c", "fig3d"], 0.1)] {
                let members: Vec<usize> = TrustStrategy::presets()
                    .into_iter()
                    .map(|strategy| {
                        push(
                            format!("{}{}-{}", pair[0], &pair[1][4..], strategy.name()),
                            EngineKind::Conventional,
                            AttackSpec::new(AttackModel::ZeroDistance, rate),
                            strategy,
                            GenBestPolicy::BinaryRejection,
                        )
                    })
                    .collect();
                for (id, metric) in [
                    (pair[0], Metric::MissRate),
                    (pair[1], Metric::FalseAlarmRate),
                ] {
                    let what = if metric == Metric::MissRate {
                        "r_md"
                    } else {
                        "r_fa"
                    };
                    panels.push(Panel {
                        id: id.to_owned(),
                        title: format!("{what} at attack rate {}", rate_label(rate)),
                        metric,
                        members: members.clone(),
                    });
                }
            }
        }
        Figure::Fig4 => {
            let grid = [
                ("fig4a", AttackModel::ZeroDistance, 0.5),
                ("fig4b", AttackModel::RandomDistance, 0.5),
                ("fig4c", AttackModel::ZeroDistance, 0.1),
                ("fig4d", AttackModel::RandomDistance, 0.1),
            ];
            for (panel, model, rate) in grid {
                let attack = AttackSpec::new(model, rate);
                let strategy = TrustStrategy::preset("linear-exp").expect("preset");
                let mut members = vec![push(
                    format!("{panel}-conventional"),
                    EngineKind::Conventional,
                    attack.clone(),
                    strategy,
                    GenBestPolicy::BinaryRejection,
                )];
                for &policy in GenBestPolicy::ALL {
                    members.push(push(
                        format!("{panel}-{}", policy.name()),
                        EngineKind::TrustAware,
                        attack.clone(),
                        strategy,
                        policy,
                    ));
                }
                panels.push(Panel {
                    id: panel.to_owned(),
                    title: format!("{} attacks at {}", model.name(), rate_label(rate)),
                    metric: Metric::MeanDistance,
                    members,
                });
            }
        }
    }
    FigurePlan {
        figure,
        scenarios,
        panels,
    }
}

#[derive(Debug, Clone)]
pub struct ReproduceOptions {
    pub out_dir: PathBuf,
    pub runs: usize,
    pub master_seed: u64,
    pub plot: bool,
    pub jobs: Option<usize>,
}

impl ReproduceOptions {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        Self {
            out_dir: out_dir.into(),
            runs: DEFAULT_RUNS,
            master_seed: DEFAULT_MASTER_SEED,
            plot: false,
            jobs: None,
        }
    }
}

/// Series label of a scenario within its panel.
fn series_label(s: &Scenario, figure: Figure) -> String {
    match figure {
        Figure::Fig2 => s.attack.model.name().to_owned(),
        Figure::Fig3 => s.strategy.name(),
        Figure::Fig4 => match s.engine {
            EngineKind::Conventional => "conventional".to_owned(),
            EngineKind::TrustAware => s.policy.name().to_owned(),
        },
    }
}

pub fn panel_svg(plan: &FigurePlan, panel: &Panel, tables: &[MetricsTable]) -> String {
    let series: Vec<Series> = panel
        .members
        .iter()
        .map(|&k| Series {
            label: series_label(&tables[k].scenario, plan.figure),
            points: tables[k]
                .rows
                .iter()
                .map(|m| (m.t as f64, panel.metric.value(m)))
                .collect(),
        })
        .collect();
    line_chart_svg(
        &panel.title,
        "iteration",
        panel.metric.axis_label(),
        &series,
    )
}

/// Runs a figure's scenarios and returns them in plan order.
pub fn run_figure(plan: &FigurePlan, jobs: Option<usize>) -> Result<Vec<MetricsTable>> {
    plan.scenarios
        .iter()
        .map(|s| {
            eprintln!("[{}] running {} ({} runs)", plan.figure, s.name, s.runs);
            run_scenario_with_jobs(s, jobs)
        })
        .collect()
}

/// Writes the CSVs (and SVGs when requested) of a computed figure.
pub fn write_figure(
    plan: &FigurePlan,
    tables: &[MetricsTable],
    out_dir: &Path,
    plot: bool,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::new();
    for t in tables {
        written.push(t.write_csv_file(out_dir)?);
    }
    if plot {
        for panel in &plan.panels {
            let path = out_dir.join(format!("{}.svg", panel.id));
            fs::write(&path, panel_svg(plan, panel, tables)).map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Reproduces one figure end to end. Returns the files written.
pub fn reproduce(figure: Figure, opts: &ReproduceOptions) -> Result<Vec<PathBuf>> {
    if opts.runs == 0 {
        return Err(Error::config("runs", "must be at least 1"));
    }
    let plan = figure_plan(figure, opts.runs, opts.master_seed);
    // fail on an unwritable directory before spending minutes simulating
    fs::create_dir_all(&opts.out_dir).map_err(|e| Error::io(&opts.out_dir, e))?;
    let tables = run_figure(&plan, opts.jobs)?;
    write_figure(&plan, &tables, &opts.out_dir, opts.plot)
}
