//! Python module `nua_py`: scenario generation, the three association
//! schemes and the metrics, over plain Python values.

use nua_core::baselines::{default_bias_grid, BiasPoint};
use nua_core::nua::StepRule;
use nua_core::report::compute_metrics;
use nua_core::scenario::path_loss as core_path_loss;
use nua_core::{
    Association, BsKind, GenerationParams, IterationTrace, Network, RunOptions, RunOutcome, Scenario,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: nua_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_kind(kind: &str) -> PyResult<BsKind> {
    match kind {
        "macro" => Ok(BsKind::Macro),
        "small" => Ok(BsKind::Small),
        other => Err(PyValueError::new_err(format!("kind must be 'macro' or 'small', got {other:?}"))),
    }
}

fn parse_step_rule(rule: &str) -> PyResult<StepRule> {
    match rule {
        "line_search" => Ok(StepRule::LineSearch),
        "backtracking" => Ok(StepRule::Backtracking),
        other => Err(PyValueError::new_err(format!("unknown step rule {other:?}"))),
    }
}

/// A deployment: stations, radio parameters and the traffic grid.
#[pyclass(name = "Scenario", module = "nua_py", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyScenario {
    inner: Scenario,
}

#[pymethods]
impl PyScenario {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Scenario::from_json(text).map(|inner| Self { inner }).map_err(py_err)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Scenario::load(path).map(|inner| Self { inner }).map_err(py_err)
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(py_err)
    }

    fn save(&self, path: &str) -> PyResult<()> {
        self.inner.save(path).map_err(py_err)
    }

    #[getter]
    fn num_bs(&self) -> usize {
        self.inner.num_bs()
    }

    #[getter]
    fn num_points(&self) -> usize {
        self.inner.num_points()
    }

    #[getter]
    fn kappa(&self) -> f64 {
        self.inner.kappa()
    }

    #[getter]
    fn station_ids(&self) -> Vec<u32> {
        self.inner.base_stations.iter().map(|b| b.id).collect()
    }

    fn with_kappa(&self, kappa: f64) -> PyResult<Self> {
        checked(self.inner.with_kappa(kappa))
    }

    /// Copy with every station of `kind` given backhaul rate `rate_bps`.
    #[pyo3(signature = (rate_bps, kind = "small"))]
    fn with_backhaul_rate(&self, rate_bps: f64, kind: &str) -> PyResult<Self> {
        checked(self.inner.with_backhaul_rate(parse_kind(kind)?, rate_bps))
    }

    fn with_solar_efficiency(&self, efficiency: f64) -> PyResult<Self> {
        checked(self.inner.with_solar_efficiency(efficiency))
    }

    fn __repr__(&self) -> String {
        format!("Scenario({} stations, {} points, kappa={})", self.inner.num_bs(), self.inner.num_points(), self.inner.kappa())
    }
}

fn checked(scenario: Scenario) -> PyResult<PyScenario> {
    scenario.validate().map_err(py_err)?;
    Ok(PyScenario { inner: scenario })
}

/// Outcome of one scheme run, scored on the scenario it was given.
#[pyclass(name = "RunResult", module = "nua_py", frozen, get_all, skip_from_py_object)]
#[derive(Debug, Clone)]
pub struct PyRunResult {
    /// `converged`, `max_iterations` or `infeasible`.
    pub status: String,
    pub iterations: usize,
    /// Infinite when the final association saturates a queue.
    pub psi: f64,
    pub latency_index: f64,
    pub brown_power_w: f64,
    /// Serving station id per traffic point.
    pub serving: Vec<u32>,
    /// Objective of the relaxed iterate, starting point first.
    pub psi_trace: Vec<f64>,
}

#[pymethods]
impl PyRunResult {
    fn __repr__(&self) -> String {
        format!("RunResult(status={:?}, iterations={}, psi={})", self.status, self.iterations, self.psi)
    }
}

fn run_result(out: &RunOutcome, net: &Network) -> PyRunResult {
    let (latency_index, brown_power_w) = match compute_metrics(&out.association, net) {
        Ok(m) => (m.latency_index, m.brown_power_total),
        Err(_) => (f64::INFINITY, f64::NAN),
    };
    PyRunResult {
        status: out.status().label().to_string(),
        iterations: out.trace.iterations(),
        psi: out.psi,
        latency_index,
        brown_power_w,
        serving: serving_ids(&out.association, net),
        psi_trace: trace_psi(&out.trace),
    }
}

fn serving_ids(assoc: &Association, net: &Network) -> Vec<u32> {
    assoc.choices().into_iter().map(|j| net.bs_id(j)).collect()
}

fn trace_psi(trace: &IterationTrace) -> Vec<f64> {
    trace.psi_sequence()
}

fn options(max_iters: usize, tol: f64, step_rule: &str) -> PyResult<RunOptions> {
    Ok(RunOptions { max_iters, tol, step_rule: parse_step_rule(step_rule)?, ..RunOptions::default() })
}

fn network(scenario: &PyScenario) -> PyResult<Network> {
    Network::new(scenario.inner.clone()).map_err(py_err)
}

/// Generated reference deployment: 3 macro and 7 small cells.
#[pyfunction]
#[pyo3(signature = (seed = 0, grid = 50, kappa = 0.0))]
fn generate(seed: u64, grid: usize, kappa: f64) -> PyResult<PyScenario> {
    let params = GenerationParams { grid, kappa, ..Default::default() };
    nua_core::generate_scenario(seed, &params).map(|inner| PyScenario { inner }).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (scenario, max_iters = 500, tol = 1e-6, step_rule = "line_search"))]
fn run_nua(py: Python<'_>, scenario: &PyScenario, max_iters: usize, tol: f64, step_rule: &str) -> PyResult<PyRunResult> {
    let net = network(scenario)?;
    let opts = options(max_iters, tol, step_rule)?;
    let out = py.detach(|| nua_core::run(&net, &opts)).map_err(py_err)?;
    Ok(run_result(&out, &net))
}

/// NUA planned without caches, scored with them.
#[pyfunction]
#[pyo3(signature = (scenario, max_iters = 500, tol = 1e-6, step_rule = "line_search"))]
fn run_nua_nc(
    py: Python<'_>,
    scenario: &PyScenario,
    max_iters: usize,
    tol: f64,
    step_rule: &str,
) -> PyResult<PyRunResult> {
    let net = network(scenario)?;
    let opts = options(max_iters, tol, step_rule)?;
    let out = py.detach(|| nua_core::nua_nc_run(&net, &opts)).map_err(py_err)?;
    Ok(run_result(&out, &net))
}

#[pyclass(name = "DrbSweep", module = "nua_py", frozen, get_all, skip_from_py_object)]
#[derive(Debug, Clone)]
pub struct PyDrbSweep {
    pub best_bias: f64,
    pub best_psi: f64,
    pub biases: Vec<f64>,
    pub psi: Vec<f64>,
    pub latency_index: Vec<f64>,
    pub brown_power_w: Vec<f64>,
}

fn drb_result(best_bias: f64, best_psi: f64, curve: &[BiasPoint]) -> PyDrbSweep {
    PyDrbSweep {
        best_bias,
        best_psi,
        biases: curve.iter().map(|p| p.bias).collect(),
        psi: curve.iter().map(|p| p.psi).collect(),
        latency_index: curve.iter().map(|p| p.latency_index).collect(),
        brown_power_w: curve.iter().map(|p| p.brown_power_w).collect(),
    }
}

/// Small cell bias sweep; the default grid is 60 log-spaced values in [0.5, 16].
#[pyfunction]
#[pyo3(signature = (scenario, biases = None))]
fn drb_sweep(py: Python<'_>, scenario: &PyScenario, biases: Option<Vec<f64>>) -> PyResult<PyDrbSweep> {
    let net = network(scenario)?;
    let grid = biases.unwrap_or_else(default_bias_grid);
    let sweep = py.detach(|| nua_core::drb_sweep(&net, &grid)).map_err(py_err)?;
    Ok(drb_result(sweep.best_bias, sweep.best_psi, &sweep.curve))
}

#[pyclass(name = "Metrics", module = "nua_py", frozen, get_all, skip_from_py_object)]
#[derive(Debug, Clone)]
pub struct PyMetrics {
    pub psi: f64,
    pub latency_index: f64,
    pub brown_power_w: f64,
    pub rho: Vec<f64>,
    pub rho_tilde: Vec<f64>,
    pub weight: Vec<f64>,
    pub brown_w: Vec<f64>,
}

fn association_from_ids(serving: &[u32], net: &Network) -> PyResult<Association> {
    if serving.len() != net.num_points() {
        return Err(PyValueError::new_err(format!(
            "expected {} station ids, got {}",
            net.num_points(),
            serving.len()
        )));
    }
    let choices = serving
        .iter()
        .map(|&id| {
            net.scenario().index_of(id).ok_or_else(|| PyValueError::new_err(format!("unknown station id {id}")))
        })
        .collect::<PyResult<Vec<_>>>()?;
    Ok(Association::from_choices(net.num_bs(), &choices))
}

/// Metrics of a one-hot association given as a serving station id per point.
#[pyfunction]
fn metrics(scenario: &PyScenario, serving: Vec<u32>) -> PyResult<PyMetrics> {
    let net = network(scenario)?;
    let m = compute_metrics(&association_from_ids(&serving, &net)?, &net).map_err(py_err)?;
    Ok(PyMetrics {
        psi: m.psi,
        latency_index: m.latency_index,
        brown_power_w: m.brown_power_total,
        rho: m.per_bs.iter().map(|b| b.rho).collect(),
        rho_tilde: m.per_bs.iter().map(|b| b.rho_tilde).collect(),
        weight: m.per_bs.iter().map(|b| b.w).collect(),
        brown_w: m.per_bs.iter().map(|b| b.brown_w).collect(),
    })
}

/// Path loss in dB for a `'macro'` or `'small'` station at `distance_m`.
#[pyfunction]
fn path_loss(kind: &str, distance_m: f64) -> PyResult<f64> {
    core_path_loss(parse_kind(kind)?, distance_m).map_err(py_err)
}

#[pymodule]
fn nua_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add_class::<PyRunResult>()?;
    m.add_class::<PyDrbSweep>()?;
    m.add_class::<PyMetrics>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(run_nua, m)?)?;
    m.add_function(wrap_pyfunction!(run_nua_nc, m)?)?;
    m.add_function(wrap_pyfunction!(drb_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(metrics, m)?)?;
    m.add_function(wrap_pyfunction!(path_loss, m)?)?;
    Ok(())
}
