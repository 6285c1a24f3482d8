//! Python bindings. Scenarios cross the boundary as the same JSON the CLI
//! reads, so every config key works unchanged from Python.

use std::path::PathBuf;

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use swarmtrust_core::config::{parse_scenario, scenario_to_json};
use swarmtrust_core::harness::reproduce::{reproduce as reproduce_figure, ReproduceOptions};
use swarmtrust_core::trust::{self, UpdateMode};
use swarmtrust_core::{
    AttackModel, EngineKind, Error, Figure, GenBestPolicy, IterationMetrics, Position, Scenario,
    TrustStrategy,
};

fn to_py(err: Error) -> PyErr {
    if err.is_io() {
        PyOSError::new_err(err.to_string())
    } else {
        PyValueError::new_err(err.to_string())
    }
}

fn scenario(config_json: &str, runs: Option<usize>, seed: Option<u64>) -> PyResult<Scenario> {
    let mut s = parse_scenario(config_json).map_err(to_py)?;
    if let Some(runs) = runs {
        s.runs = runs;
    }
    if let Some(seed) = seed {
        s.master_seed = seed;
    }
    s.validate().map_err(to_py)?;
    Ok(s)
}

fn metrics_dict<'py>(py: Python<'py>, m: &IterationMetrics) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("t", m.t)?;
    d.set_item("mean_distance", m.mean_honest_distance)?;
    d.set_item("r_md", m.r_md)?;
    d.set_item("r_fa", m.r_fa)?;
    Ok(d)
}

#[pyfunction]
fn true_distance(position: (f64, f64), target: (f64, f64)) -> f64 {
    swarmtrust_core::swarm::true_distance(
        Position::new(position.0, position.1),
        Position::new(target.0, target.1),
    )
}

/// Noisy report of a true distance for noise sample `n` (dB).
#[pyfunction]
fn measure_distance(distance: f64, n: f64) -> PyResult<f64> {
    if distance.is_nan() || distance < 0.0 {
        return Err(PyValueError::new_err("distance must be non-negative"));
    }
    Ok(swarmtrust_core::swarm::measure_distance(distance, n))
}

fn check_trust(rho: f64) -> PyResult<()> {
    if (0.0..=1.0).contains(&rho) {
        Ok(())
    } else {
        Err(PyValueError::new_err(format!("trust {rho} outside [0, 1]")))
    }
}

#[pyfunction]
fn reward(mode: &str, rho: f64) -> PyResult<f64> {
    check_trust(rho)?;
    Ok(trust::reward(
        mode.parse::<UpdateMode>().map_err(to_py)?,
        rho,
    ))
}

#[pyfunction]
fn penalize(mode: &str, rho: f64) -> PyResult<f64> {
    check_trust(rho)?;
    Ok(trust::penalize(
        mode.parse::<UpdateMode>().map_err(to_py)?,
        rho,
    ))
}

/// One trust step under a `<reward>-<penalty>` strategy; `flagged` is the detector output.
#[pyfunction]
fn update_trust(strategy: &str, flagged: bool, rho: f64) -> PyResult<f64> {
    check_trust(rho)?;
    let s: TrustStrategy = strategy.parse().map_err(to_py)?;
    Ok(trust::update_trust(&s, flagged, rho))
}

#[pyfunction]
#[pyo3(signature = (rho, rho_th = trust::DEFAULT_THRESHOLD))]
fn classify_attacker(rho: f64, rho_th: f64) -> bool {
    trust::classify_attacker(rho, rho_th)
}

#[pyfunction]
fn list_presets(py: Python<'_>) -> PyResult<Bound<'_, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("strategies", TrustStrategy::PRESETS.to_vec())?;
    d.set_item("policies", GenBestPolicy::names())?;
    d.set_item("engines", EngineKind::names())?;
    d.set_item("attack_models", AttackModel::names())?;
    d.set_item(
        "figures",
        Figure::ALL.iter().map(|f| f.name()).collect::<Vec<_>>(),
    )?;
    Ok(d)
}

/// The fully resolved scenario, defaults filled in, as JSON.
#[pyfunction]
#[pyo3(signature = (config_json = "{}"))]
fn resolve_scenario(config_json: &str) -> PyResult<String> {
    Ok(scenario_to_json(&scenario(config_json, None, None)?))
}

/// Per-iteration averages over all runs, one dict per iteration.
#[pyfunction]
#[pyo3(signature = (config_json = "{}", runs = None, seed = None))]
fn run_scenario<'py>(
    py: Python<'py>,
    config_json: &str,
    runs: Option<usize>,
    seed: Option<u64>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let s = scenario(config_json, runs, seed)?;
    let table = py
        .detach(|| swarmtrust_core::run_scenario(&s))
        .map_err(to_py)?;
    table.rows.iter().map(|m| metrics_dict(py, m)).collect()
}

/// Same as `run_scenario`, rendered exactly as the CLI writes it.
#[pyfunction]
#[pyo3(signature = (config_json = "{}", runs = None, seed = None))]
fn run_scenario_csv(
    py: Python<'_>,
    config_json: &str,
    runs: Option<usize>,
    seed: Option<u64>,
) -> PyResult<String> {
    let s = scenario(config_json, runs, seed)?;
    py.detach(|| swarmtrust_core::run_scenario(&s))
        .map(|t| t.to_csv())
        .map_err(to_py)
}

/// Writes a figure's CSVs (and SVGs with `plot`) and returns their paths.
#[pyfunction]
#[pyo3(signature = (figure, out_dir, runs = 1000, seed = None, plot = false))]
fn reproduce(
    py: Python<'_>,
    figure: &str,
    out_dir: PathBuf,
    runs: usize,
    seed: Option<u64>,
    plot: bool,
) -> PyResult<Vec<String>> {
    let figure: Figure = figure.parse().map_err(to_py)?;
    let mut opts = ReproduceOptions::new(out_dir);
    opts.runs = runs;
    opts.plot = plot;
    if let Some(seed) = seed {
        opts.master_seed = seed;
    }
    let paths = py
        .detach(|| reproduce_figure(figure, &opts))
        .map_err(to_py)?;
    Ok(paths.iter().map(|p| p.display().to_string()).collect())
}

/// A single run, stepped from Python.
#[pyclass(module = "swarmtrust")]
struct Simulation {
    inner: swarmtrust_core::Simulation,
}

#[pymethods]
impl Simulation {
    #[new]
    #[pyo3(signature = (config_json = "{}", run = 0, seed = None))]
    fn new(config_json: &str, run: u64, seed: Option<u64>) -> PyResult<Self> {
        let s = scenario(config_json, None, seed)?;
        let inner = swarmtrust_core::Simulation::new(&s, run).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Advances one iteration and returns its metrics.
    fn step<'py>(&mut self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let m = self.inner.step().map_err(to_py)?;
        metrics_dict(py, &m)
    }

    /// Steps until the horizon and returns the remaining metrics.
    fn run_to_end<'py>(&mut self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let horizon = self.inner.scenario().world.horizon;
        let mut out = Vec::new();
        while self.inner.iteration() < horizon {
            out.push(self.step(py)?);
        }
        Ok(out)
    }

    #[getter]
    fn iteration(&self) -> usize {
        self.inner.iteration()
    }

    #[getter]
    fn horizon(&self) -> usize {
        self.inner.scenario().world.horizon
    }

    #[getter]
    fn target(&self) -> (f64, f64) {
        let t = self.inner.scenario().world.target;
        (t.x, t.y)
    }

    #[getter]
    fn positions(&self) -> Vec<(f64, f64)> {
        self.inner
            .agents()
            .iter()
            .map(|a| (a.position.x, a.position.y))
            .collect()
    }

    #[getter]
    fn trust(&self) -> Vec<f64> {
        self.inner.agents().iter().map(|a| a.trust).collect()
    }

    #[getter]
    fn flagged(&self) -> Vec<bool> {
        self.inner.agents().iter().map(|a| a.flagged).collect()
    }

    #[getter]
    fn attackers(&self) -> Vec<usize> {
        self.inner.attackers().to_vec()
    }

    #[getter]
    fn reports(&self) -> Vec<f64> {
        self.inner.reports().to_vec()
    }

    /// `(distance, (x, y), source)` of the swarm best, or None before any report.
    #[getter]
    fn best(&self) -> Option<(f64, (f64, f64), usize)> {
        let b = self.inner.best();
        match (b.is_set(), b.position) {
            (true, Some(p)) => Some((b.distance, (p.x, p.y), b.source)),
            _ => None,
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Simulation(scenario={:?}, iteration={})",
            self.inner.scenario().name,
            self.inner.iteration()
        )
    }
}

#[pymodule]
fn swarmtrust(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(true_distance, m)?)?;
    m.add_function(wrap_pyfunction!(measure_distance, m)?)?;
    m.add_function(wrap_pyfunction!(reward, m)?)?;
    m.add_function(wrap_pyfunction!(penalize, m)?)?;
    m.add_function(wrap_pyfunction!(update_trust, m)?)?;
    m.add_function(wrap_pyfunction!(classify_attacker, m)?)?;
    m.add_function(wrap_pyfunction!(list_presets, m)?)?;
    m.add_function(wrap_pyfunction!(resolve_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario_csv, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    m.add_class::<Simulation>()?;
    Ok(())
}
