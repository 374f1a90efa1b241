//! Python bindings for `qwalk`.

use std::path::PathBuf;

use num_complex::Complex64;
use pyo3::exceptions::{PyFileExistsError, PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use qwalk::dispersion::{dispersion_sweep, velocity_and_spread};
use qwalk::experiment::{self, ExperimentConfig, RunOptions};
use qwalk::prelude as q;
use qwalk::Error;

fn to_py(err: Error) -> PyErr {
    match err {
        Error::OutputExists(_) => PyFileExistsError::new_err(err.to_string()),
        Error::Io(_) => PyOSError::new_err(err.to_string()),
        Error::Invariant(_) | Error::LightCone { .. } => PyRuntimeError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn parse_kind(name: &str) -> PyResult<q::DisorderKind> {
    q::DisorderKind::ALL
        .into_iter()
        .find(|k| k.label() == name.replace('-', "_"))
        .ok_or_else(|| PyValueError::new_err(format!("unknown disorder kind {name:?}")))
}

fn parse_component(name: &str) -> PyResult<q::Component> {
    match name {
        "up" => Ok(q::Component::Up),
        "down" => Ok(q::Component::Down),
        _ => Err(PyValueError::new_err(format!("component must be \"up\" or \"down\", got {name:?}"))),
    }
}

/// Coin state `cos(δ/2)|↑⟩ + e^{iη} sin(δ/2)|↓⟩` at the origin.
#[pyclass(frozen, from_py_object, name = "InitialSpec")]
#[derive(Clone)]
struct PyInitialSpec(q::InitialSpec);

#[pymethods]
impl PyInitialSpec {
    #[new]
    fn new(delta: f64, eta: f64) -> PyResult<Self> {
        q::InitialSpec::new(delta, eta).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn symmetric() -> Self {
        Self(q::InitialSpec::symmetric())
    }

    #[staticmethod]
    fn up() -> Self {
        Self(q::InitialSpec::up())
    }

    #[staticmethod]
    fn down() -> Self {
        Self(q::InitialSpec::down())
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.0.delta
    }

    #[getter]
    fn eta(&self) -> f64 {
        self.0.eta
    }

    /// `(up, down)` amplitudes.
    fn spinor(&self) -> (Complex64, Complex64) {
        let s = self.0.spinor();
        (s.up, s.down)
    }

    fn __repr__(&self) -> String {
        format!("InitialSpec(delta={}, eta={})", self.0.delta, self.0.eta)
    }
}

/// A seeded one-dimensional coin schedule.
#[pyclass(frozen, name = "Schedule")]
struct PySchedule(q::CoinSchedule);

#[pymethods]
impl PySchedule {
    #[new]
    #[pyo3(signature = (kind, steps, seed=0, fraction=1.0, theta=std::f64::consts::FRAC_PI_4, su2=false))]
    fn new(kind: &str, steps: usize, seed: u64, fraction: f64, theta: f64, su2: bool) -> PyResult<Self> {
        let mut spec = q::ScheduleSpec::new(parse_kind(kind)?, seed, steps)
            .with_fraction(fraction)
            .with_su2(su2);
        spec.base_theta = theta;
        q::build_schedule(&spec).map(Self).map_err(to_py)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind().label()
    }

    #[getter]
    fn steps(&self) -> usize {
        self.0.steps()
    }

    /// `(xi, theta, zeta)` at cell `(x, t)`.
    fn angles(&self, x: i64, t: usize) -> PyResult<(f64, f64, f64)> {
        let a = self.0.angles_at(x, t).map_err(to_py)?;
        Ok((a.xi, a.theta, a.zeta))
    }

    /// Effective group velocity and spread estimate at wavenumber `k` after `t` steps.
    #[pyo3(signature = (k, t, component="up"))]
    fn effective_velocity(&self, k: f64, t: usize, component: &str) -> PyResult<(f64, f64)> {
        let (v, spread) = velocity_and_spread(&self.0, k, t, parse_component(component)?).map_err(to_py)?;
        Ok((v.value, spread))
    }
}

/// A seeded two-dimensional `(θ, ϑ)` schedule.
#[pyclass(frozen, name = "Schedule2D")]
struct PySchedule2D(q::Schedule2D);

#[pymethods]
impl PySchedule2D {
    #[new]
    #[pyo3(signature = (kind, steps, seed=0, fraction=1.0, theta=0.0, vartheta=0.0))]
    fn new(kind: &str, steps: usize, seed: u64, fraction: f64, theta: f64, vartheta: f64) -> PyResult<Self> {
        let mut spec = q::Schedule2DSpec::new(parse_kind(kind)?, seed, steps).with_fraction(fraction);
        spec.base_theta = theta;
        spec.base_vartheta = vartheta;
        q::build_schedule_2d(&spec).map(Self).map_err(to_py)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind().label()
    }

    #[getter]
    fn steps(&self) -> usize {
        self.0.steps()
    }

    fn angles(&self, x: i64, y: i64, t: usize) -> PyResult<(f64, f64)> {
        self.0.angles_at(x, y, t).map_err(to_py)
    }
}

/// Per-step σ and entanglement entropy plus the final position distribution.
#[pyclass(frozen, name = "Trajectory")]
struct PyTrajectory {
    #[pyo3(get)]
    sigma: Vec<f64>,
    #[pyo3(get)]
    entropy: Vec<f64>,
    #[pyo3(get)]
    max_norm_drift: f64,
    /// 1D: `[(x, p)]`; 2D: `[(x, y, p)]` with zero cells omitted.
    #[pyo3(get)]
    distribution: Py<PyAny>,
}

#[pyfunction]
#[pyo3(signature = (schedule, steps=None, initial=None))]
fn run_1d(
    py: Python<'_>,
    schedule: &PySchedule,
    steps: Option<usize>,
    initial: Option<PyInitialSpec>,
) -> PyResult<PyTrajectory> {
    let spec = initial.map_or_else(q::InitialSpec::symmetric, |i| i.0);
    let steps = steps.unwrap_or(schedule.0.steps());
    let traj = py
        .detach(|| q::run_1d(&spec, &schedule.0, steps, q::RecordFlags::scalars()))
        .map_err(to_py)?;
    let dist: Vec<(i64, f64)> = q::position_distribution_1d(&traj.final_state).iter().collect();
    Ok(PyTrajectory {
        sigma: traj.sigmas(),
        entropy: traj.entropies(),
        max_norm_drift: traj.max_norm_drift(),
        distribution: dist.into_pyobject(py)?.into_any().unbind(),
    })
}

#[pyfunction]
#[pyo3(signature = (schedule, steps=None, initial=None))]
fn run_2d(
    py: Python<'_>,
    schedule: &PySchedule2D,
    steps: Option<usize>,
    initial: Option<PyInitialSpec>,
) -> PyResult<PyTrajectory> {
    let spec = initial.map_or_else(q::InitialSpec::symmetric, |i| i.0);
    let steps = steps.unwrap_or(schedule.0.steps());
    let traj = py
        .detach(|| q::run_2d(&spec, &schedule.0, steps, q::RecordFlags::scalars()))
        .map_err(to_py)?;
    let dist: Vec<(i64, i64, f64)> = q::position_distribution_2d(&traj.final_state)
        .iter()
        .filter(|&(_, _, p)| p != 0.0)
        .collect();
    Ok(PyTrajectory {
        sigma: traj.sigmas(),
        entropy: traj.entropies(),
        max_norm_drift: traj.max_norm_drift(),
        distribution: dist.into_pyobject(py)?.into_any().unbind(),
    })
}

type Point = (f64, Option<f64>, Option<f64>, bool);
type SweepTuple = (f64, f64, f64, f64, Option<f64>, Option<f64>, bool);

fn point(p: q::DispersionPoint) -> Point {
    (p.omega, p.v_p, p.v_g, p.propagating)
}

/// `(omega, v_p, v_g, propagating)` for the uniform coin.
#[pyfunction]
fn omega_uniform(k: f64, theta: f64) -> PyResult<Point> {
    q::omega_uniform(k, theta).map(point).map_err(to_py)
}

/// `(omega, v_p, v_g, propagating)` for the general SU(2) coin, `phi = xi + zeta`.
#[pyfunction]
fn omega_su2(k: f64, theta: f64, phi: f64) -> PyResult<Point> {
    q::omega_su2(k, theta, phi).map(point).map_err(to_py)
}

/// Rows `(k, theta, phi, omega, v_p, v_g, propagating)` over the grid.
#[pyfunction]
#[pyo3(signature = (ks, thetas, phis=vec![0.0]))]
fn sweep(ks: Vec<f64>, thetas: Vec<f64>, phis: Vec<f64>) -> PyResult<Vec<SweepTuple>> {
    let rows = dispersion_sweep(&ks, &thetas, &phis).map_err(to_py)?;
    Ok(rows
        .into_iter()
        .map(|r| (r.point.k, r.theta, r.phi, r.point.omega, r.point.v_p, r.point.v_g, r.point.propagating))
        .collect())
}

#[pyfunction]
fn preset_names() -> Vec<&'static str> {
    experiment::presets::names().collect()
}

#[pyfunction]
fn preset_config(name: &str) -> PyResult<String> {
    experiment::presets::preset_text(name).map(str::to_owned).map_err(to_py)
}

/// Runs a JSON experiment config and returns `summary.json` as a string.
#[pyfunction]
#[pyo3(signature = (config, out=None, overwrite=false, workers=None))]
fn run_experiment(
    py: Python<'_>,
    config: &str,
    out: Option<PathBuf>,
    overwrite: bool,
    workers: Option<usize>,
) -> PyResult<String> {
    let cfg = ExperimentConfig::from_json(config).map_err(to_py)?;
    let opts = RunOptions { out, overwrite, workers };
    let summary = py.detach(|| experiment::run_experiment(&cfg, &opts)).map_err(to_py)?;
    serde_json::to_string_pretty(&summary).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn qwalk_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInitialSpec>()?;
    m.add_class::<PySchedule>()?;
    m.add_class::<PySchedule2D>()?;
    m.add_class::<PyTrajectory>()?;
    m.add_function(wrap_pyfunction!(run_1d, m)?)?;
    m.add_function(wrap_pyfunction!(run_2d, m)?)?;
    m.add_function(wrap_pyfunction!(omega_uniform, m)?)?;
    m.add_function(wrap_pyfunction!(omega_su2, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(preset_names, m)?)?;
    m.add_function(wrap_pyfunction!(preset_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
