//! Python bindings for `zeno_core`.
//!
//! Bloch vectors cross the boundary as `(rx, ry, rz)` tuples, operators as
//! nested lists of complex numbers, and trajectories as dicts of columns.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use zeno_core::algebra::{bloch_to_density, BlochVector, ComplexMatrix2, DensityMatrix, C64};
use zeno_core::dynamics::{SuperoperatorForm, TimeSeries};
use zeno_core::intelligent::IntelligentStateReport;
use zeno_core::measurement::{eigenstate, Outcome};

create_exception!(zeno_py, ZenoError, PyValueError);

fn err(e: zeno_core::ZenoError) -> PyErr {
    ZenoError::new_err(e.to_string())
}

fn matrix_rows(m: &ComplexMatrix2) -> Vec<Vec<C64>> {
    m.entries.iter().map(|row| row.to_vec()).collect()
}

fn bloch_tuple(b: &BlochVector) -> (f64, f64, f64) {
    (b.rx, b.ry, b.rz)
}

#[pyclass(name = "BathParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyBathParams(zeno_core::BathParams);

#[pymethods]
impl PyBathParams {
    #[new]
    #[pyo3(signature = (n, psi = 0.0, gamma = 1.0))]
    fn new(n: f64, psi: f64, gamma: f64) -> PyResult<Self> {
        zeno_core::BathParams::new(gamma, n, psi).map(Self).map_err(err)
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.0.gamma()
    }

    #[getter]
    fn n(&self) -> f64 {
        self.0.n()
    }

    #[getter]
    fn psi(&self) -> f64 {
        self.0.psi()
    }

    #[getter]
    fn m(&self) -> f64 {
        self.0.m()
    }

    #[getter]
    fn fast_rate(&self) -> f64 {
        self.0.fast_rate()
    }

    #[getter]
    fn slow_rate(&self) -> f64 {
        self.0.slow_rate()
    }

    #[getter]
    fn population_rate(&self) -> f64 {
        self.0.population_rate()
    }

    /// The jump operator S as a 2x2 nested list.
    fn lindblad_operator(&self) -> Vec<Vec<C64>> {
        matrix_rows(&zeno_core::lindblad_operator(&self.0))
    }

    fn __repr__(&self) -> String {
        format!(
            "BathParams(n={}, psi={}, gamma={})",
            self.0.n(),
            self.0.psi(),
            self.0.gamma()
        )
    }
}

#[pyclass(name = "MeasurementDirection", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyDirection(zeno_core::MeasurementDirection);

#[pymethods]
impl PyDirection {
    #[new]
    fn new(theta: f64, phi: f64) -> PyResult<Self> {
        zeno_core::MeasurementDirection::new(theta, phi).map(Self).map_err(err)
    }

    #[staticmethod]
    fn plus_z() -> Self {
        Self(zeno_core::MeasurementDirection::plus_z())
    }

    #[staticmethod]
    fn minus_z() -> Self {
        Self(zeno_core::MeasurementDirection::minus_z())
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.0.theta()
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.0.phi()
    }

    fn unit_vector(&self) -> (f64, f64, f64) {
        let [x, y, z] = self.0.unit_vector();
        (x, y, z)
    }

    fn angle_to(&self, other: &Self) -> f64 {
        self.0.angle_to(&other.0)
    }

    fn __repr__(&self) -> String {
        format!("MeasurementDirection(theta={}, phi={})", self.0.theta(), self.0.phi())
    }
}

/// A Bloch triple, or one of "excited", "ground", "mixed", "plus-mu",
/// "minus-mu" (the last two need `direction`).
fn initial_state(
    state: &Bound<'_, PyAny>,
    direction: Option<&PyDirection>,
) -> PyResult<DensityMatrix> {
    if let Ok((x, y, z)) = state.extract::<(f64, f64, f64)>() {
        let b = BlochVector::new(x, y, z).map_err(err)?;
        return bloch_to_density(&b).map_err(err);
    }
    let name: String = state.extract()?;
    let along = |sign| {
        direction
            .map(|d| DensityMatrix::pure(&eigenstate(&d.0, sign)))
            .ok_or_else(|| PyValueError::new_err(format!("state `{name}` needs a direction")))
    };
    match name.as_str() {
        "excited" => Ok(DensityMatrix::excited()),
        "ground" => Ok(DensityMatrix::ground()),
        "mixed" => Ok(DensityMatrix::maximally_mixed()),
        "plus-mu" => along(Outcome::Plus),
        "minus-mu" => along(Outcome::Minus),
        other => Err(PyValueError::new_err(format!("unknown state `{other}`"))),
    }
}

fn series_dict<'py>(py: Python<'py>, series: &TimeSeries) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    let column = |f: &dyn Fn(&zeno_core::dynamics::Sample) -> f64| -> Vec<f64> {
        series.samples.iter().map(f).collect()
    };
    d.set_item("t", column(&|s| s.t))?;
    d.set_item("rx", column(&|s| s.bloch.rx))?;
    d.set_item("ry", column(&|s| s.bloch.ry))?;
    d.set_item("rz", column(&|s| s.bloch.rz))?;
    if series.is_measured() {
        d.set_item("sigma_mu_mean", column(&|s| s.measured.unwrap().sigma_mu_mean))?;
        d.set_item("survival", column(&|s| s.measured.unwrap().survival))?;
    }
    Ok(d)
}

fn report_dict<'py>(py: Python<'py>, r: &IntelligentStateReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("amplitudes", r.state.amplitudes().to_vec())?;
    d.set_item("eigenvalue", r.eigenvalue)?;
    d.set_item("var_j1", r.var_j1)?;
    d.set_item("var_j2", r.var_j2)?;
    d.set_item("jz_mean", r.jz_mean)?;
    d.set_item("saturation_residual", r.saturation_residual)?;
    Ok(d)
}

#[pyfunction]
fn optimal_directions(bath: &PyBathParams) -> (PyDirection, PyDirection) {
    let (a, b) = zeno_core::optimal_directions(&bath.0);
    (PyDirection(a), PyDirection(b))
}

#[pyfunction]
fn decay_exponent_f(bath: &PyBathParams, direction: &PyDirection) -> f64 {
    zeno_core::decay_exponent_f(&bath.0, &direction.0)
}

#[pyfunction]
fn survival_probability(bath: &PyBathParams, direction: &PyDirection, t: f64) -> PyResult<f64> {
    zeno_core::survival_probability(&bath.0, &direction.0, t).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (bath, direction, tol = zeno_core::measurement::DEFAULT_ZENO_TOL))]
fn total_zeno_condition(bath: &PyBathParams, direction: &PyDirection, tol: f64) -> bool {
    zeno_core::total_zeno_condition(&bath.0, &direction.0, tol)
}

/// F/γ as rows of constant θ (θ from 0 to π inclusive, φ from 0 to 2π).
#[pyfunction]
#[pyo3(signature = (bath, phi_count = 400, theta_count = 200))]
fn landscape_scan(bath: &PyBathParams, phi_count: usize, theta_count: usize) -> PyResult<Vec<Vec<f64>>> {
    let grid = zeno_core::landscape_scan(&bath.0, phi_count, theta_count).map_err(err)?;
    Ok(grid.values.chunks(phi_count).map(<[f64]>::to_vec).collect())
}

/// Free evolution, or continuous monitoring when `direction` is given.
#[pyfunction]
#[pyo3(signature = (bath, initial, t_max, dt = zeno_core::dynamics::DEFAULT_DT, direction = None))]
fn integrate<'py>(
    py: Python<'py>,
    bath: &PyBathParams,
    initial: &Bound<'py, PyAny>,
    t_max: f64,
    dt: f64,
    direction: Option<PyDirection>,
) -> PyResult<Bound<'py, PyDict>> {
    let rho0 = initial_state(initial, direction.as_ref())?;
    let form = match direction {
        Some(d) => SuperoperatorForm::Measured(d.0),
        None => SuperoperatorForm::Expanded,
    };
    let series = zeno_core::integrate(form, &bath.0, &rho0, t_max, dt).map_err(err)?;
    series_dict(py, &series)
}

#[pyfunction]
fn analytic_bloch(bath: &PyBathParams, bloch: (f64, f64, f64), t: f64) -> PyResult<(f64, f64, f64)> {
    let b0 = BlochVector::new(bloch.0, bloch.1, bloch.2).map_err(err)?;
    zeno_core::analytic_bloch(&bath.0, &b0, t)
        .map(|b| bloch_tuple(&b))
        .map_err(err)
}

/// Reports for (|φ₁⟩, |φ₂⟩) = (|+⟩_μ₁, |+⟩_μ₂).
#[pyfunction]
fn eigenstates_of_s<'py>(
    py: Python<'py>,
    bath: &PyBathParams,
) -> PyResult<(Bound<'py, PyDict>, Bound<'py, PyDict>)> {
    let (a, b) = zeno_core::eigenstates_of_s(&bath.0).map_err(err)?;
    Ok((report_dict(py, &a)?, report_dict(py, &b)?))
}

#[pyfunction]
fn steady_state_under_measurement(bath: &PyBathParams, direction: &PyDirection) -> PyResult<(f64, f64, f64)> {
    zeno_core::steady_state_under_measurement(&bath.0, &direction.0)
        .map(|rho| bloch_tuple(&rho.bloch()))
        .map_err(err)
}

#[pyfunction]
fn discrete_zeno_protocol<'py>(
    py: Python<'py>,
    bath: &PyBathParams,
    direction: &PyDirection,
    initial: &Bound<'py, PyAny>,
    delta_t: f64,
    n_steps: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let rho0 = initial_state(initial, Some(direction))?;
    let series = zeno_core::discrete_zeno_protocol(&bath.0, &direction.0, &rho0, delta_t, n_steps)
        .map_err(err)?;
    series_dict(py, &series)
}

#[pyfunction]
fn initial_slope_check(bath: &PyBathParams) -> PyResult<f64> {
    zeno_core::initial_slope_check(&bath.0).map_err(err)
}

#[pymodule]
fn zeno_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ZenoError", m.py().get_type::<ZenoError>())?;
    m.add_class::<PyBathParams>()?;
    m.add_class::<PyDirection>()?;
    m.add_function(wrap_pyfunction!(optimal_directions, m)?)?;
    m.add_function(wrap_pyfunction!(decay_exponent_f, m)?)?;
    m.add_function(wrap_pyfunction!(survival_probability, m)?)?;
    m.add_function(wrap_pyfunction!(total_zeno_condition, m)?)?;
    m.add_function(wrap_pyfunction!(landscape_scan, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(analytic_bloch, m)?)?;
    m.add_function(wrap_pyfunction!(eigenstates_of_s, m)?)?;
    m.add_function(wrap_pyfunction!(steady_state_under_measurement, m)?)?;
    m.add_function(wrap_pyfunction!(discrete_zeno_protocol, m)?)?;
    m.add_function(wrap_pyfunction!(initial_slope_check, m)?)?;
    Ok(())
}
