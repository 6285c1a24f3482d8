//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for configuration or usage errors, 2 when
//! output cannot be written.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::attack::AttackModel;
use crate::config::load_scenario;
use crate::engine::{EngineKind, GenBestPolicy};
use crate::error::{Error, Result};
use crate::harness::plot::{line_chart_svg, Series};
use crate::harness::reproduce::{reproduce, Figure, ReproduceOptions};
use crate::harness::{run_scenario_with_jobs, MetricsTable};
use crate::scenario::{DEFAULT_MASTER_SEED, DEFAULT_RUNS};
use crate::trust::TrustStrategy;

pub const OUT_DIR_ENV: &str = "SWARMTRUST_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "swarmtrust",
    version,
    about = "Trust-aware PSO under data-injection attacks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a single scenario described by a JSON config.
    Run(RunArgs),
    /// Run every scenario behind one of the reference figures.
    Reproduce(ReproduceArgs),
    /// Print the accepted names of strategies, policies, engines and attack models.
    ListPresets,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output directory for CSV and SVG files.
    #[arg(long, env = OUT_DIR_ENV, default_value = "results")]
    pub out: PathBuf,
    /// Override the master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override the number of Monte-Carlo runs.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: Option<u64>,
    /// Also write SVG line charts.
    #[arg(long)]
    pub plot: bool,
    /// Maximum number of concurrently simulated runs.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// One of fig2, fig3, fig4.
    #[arg(long)]
    pub figure: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn list_presets() -> String {
    let mut out = String::new();
    let mut section = |title: &str, names: &[&str]| {
        out.push_str(title);
        out.push_str(":\n");
        for n in names {
            out.push_str("  ");
            out.push_str(n);
            out.push('\n');
        }
    };
    section("strategies", &TrustStrategy::PRESETS);
    section("policies", &GenBestPolicy::names());
    section("engines", &EngineKind::names());
    section("attack-models", &AttackModel::names());
    section("figures", &["fig2", "fig3", "fig4"]);
    out
}

fn create_out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn distance_svg(table: &MetricsTable) -> String {
    let series = [Series {
        label: table.scenario.name.clone(),
        points: table
            .rows
            .iter()
            .map(|m| (m.t as f64, m.mean_honest_distance))
            .collect(),
    }];
    line_chart_svg(
        &table.scenario.name,
        "iteration",
        "mean honest distance to target (m)",
        &series,
    )
}

fn run_command(args: &RunArgs) -> Result<Vec<PathBuf>> {
    let mut scenario = load_scenario(&args.config)?;
    let out = &args.output;
    if let Some(seed) = out.seed {
        scenario.master_seed = seed;
    }
    if let Some(runs) = out.runs {
        scenario.runs = runs as usize;
    }
    create_out_dir(&out.out)?;
    eprintln!("running {} ({} runs)", scenario.name, scenario.runs);
    let table = run_scenario_with_jobs(&scenario, out.jobs.map(|j| j as usize))?;
    let mut written = vec![table.write_csv_file(&out.out)?];
    if out.plot {
        let path = out.out.join(format!("{}.svg", scenario.name));
        fs::write(&path, distance_svg(&table)).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

fn reproduce_command(args: &ReproduceArgs) -> Result<Vec<PathBuf>> {
    let figure: Figure = args.figure.parse()?;
    let out = &args.output;
    let opts = ReproduceOptions {
        out_dir: out.out.clone(),
        runs: out.runs.map_or(DEFAULT_RUNS, |r| r as usize),
        master_seed: out.seed.unwrap_or(DEFAULT_MASTER_SEED),
        plot: out.plot,
        jobs: out.jobs.map(|j| j as usize),
    };
    reproduce(figure, &opts)
}

pub fn execute(cli: &Cli) -> Result<Vec<PathBuf>> {
    match &cli.command {
        Command::Run(args) => run_command(args),
        Command::Reproduce(args) => reproduce_command(args),
        Command::ListPresets => {
            print!("{}", list_presets());
            Ok(Vec::new())
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    if err.is_io() {
        2
    } else {
        1
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
