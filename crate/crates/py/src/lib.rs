//! Python bindings.
//!
//! Matrices cross the boundary as lists of rows of `complex`, states as flat
//! lists of `complex`.

use num_complex::Complex64 as C64;
use pyo3::create_exception;
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use rwa_core::integrator::{self, Method};
use rwa_core::linalg::{self, Axis, ComplexMatrix, Pauli, StateVector};
use rwa_core::{fock, jc, runner, scenario, semiclassical, Error, FockTruncation};

create_exception!(rwa, SingularityError, PyRuntimeError);
create_exception!(rwa, ConfigError, PyValueError);

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Singularity { .. } => SingularityError::new_err(err.to_string()),
        Error::Config { .. } => ConfigError::new_err(err.to_string()),
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        Error::NonHermitian { .. } | Error::StepUnderflow { .. } => {
            PyRuntimeError::new_err(err.to_string())
        }
        other => PyValueError::new_err(other.to_string()),
    }
}

type Rows = Vec<Vec<C64>>;

fn matrix_in(rows: Rows) -> PyResult<ComplexMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if n == 0 || m == 0 || rows.iter().any(|r| r.len() != m) {
        return Err(PyValueError::new_err("matrix must be a non-empty list of equal-length rows"));
    }
    ComplexMatrix::new(n, m, rows.into_iter().flatten().collect()).map_err(to_py)
}

fn matrix_out(m: &ComplexMatrix) -> Rows {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn state_in(amps: Vec<C64>) -> PyResult<StateVector> {
    StateVector::normalized(amps).map_err(to_py)
}

fn trunc(dim: usize) -> PyResult<FockTruncation> {
    FockTruncation::new(dim).map_err(to_py)
}

#[pyclass(name = "DriveParams", module = "rwa", from_py_object)]
#[derive(Clone, Copy)]
struct PyDriveParams(semiclassical::DriveParams);

#[pymethods]
impl PyDriveParams {
    #[new]
    #[pyo3(signature = (delta, g, omega, phi = 0.0))]
    fn new(delta: f64, g: f64, omega: f64, phi: f64) -> PyResult<Self> {
        semiclassical::DriveParams::new(delta, g, omega, phi)
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.0.delta
    }

    #[getter]
    fn g(&self) -> f64 {
        self.0.g
    }

    #[getter]
    fn omega(&self) -> f64 {
        self.0.omega
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.0.phi
    }

    fn detuning(&self) -> f64 {
        self.0.detuning()
    }

    fn generalized_rabi(&self) -> f64 {
        self.0.generalized_rabi()
    }

    fn __repr__(&self) -> String {
        let p = &self.0;
        format!("DriveParams(delta={}, g={}, omega={}, phi={})", p.delta, p.g, p.omega, p.phi)
    }
}

#[pyclass(name = "JcParams", module = "rwa", from_py_object)]
#[derive(Clone, Copy)]
struct PyJcParams(jc::JcParams);

#[pymethods]
impl PyJcParams {
    #[new]
    fn new(big_omega: f64, omega: f64, g: f64, dim: usize) -> PyResult<Self> {
        jc::JcParams::new(big_omega, omega, g, dim).map(Self).map_err(to_py)
    }

    #[getter]
    fn big_omega(&self) -> f64 {
        self.0.big_omega
    }

    #[getter]
    fn omega(&self) -> f64 {
        self.0.omega
    }

    #[getter]
    fn g(&self) -> f64 {
        self.0.g
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn detuning(&self) -> f64 {
        self.0.detuning()
    }

    fn __repr__(&self) -> String {
        let p = &self.0;
        format!(
            "JcParams(big_omega={}, omega={}, g={}, dim={})",
            p.big_omega,
            p.omega,
            p.g,
            p.dim()
        )
    }
}

#[pyclass(name = "IntegratorConfig", module = "rwa", from_py_object)]
#[derive(Clone, Copy)]
struct PyIntegratorConfig(integrator::IntegratorConfig);

#[pymethods]
impl PyIntegratorConfig {
    #[new]
    #[pyo3(signature = (method = "rk45-adaptive", dt = 0.01, rel_tol = 1e-10, abs_tol = 1e-12, renormalize = false))]
    fn new(method: &str, dt: f64, rel_tol: f64, abs_tol: f64, renormalize: bool) -> PyResult<Self> {
        let cfg = integrator::IntegratorConfig {
            method: method.parse::<Method>().map_err(to_py)?,
            dt,
            rel_tol,
            abs_tol,
            renormalize,
        };
        cfg.validate().map_err(to_py)?;
        Ok(Self(cfg))
    }

    #[getter]
    fn method(&self) -> String {
        self.0.method.to_string()
    }

    #[getter]
    fn dt(&self) -> f64 {
        self.0.dt
    }
}

#[pyclass(name = "TimeSeries", module = "rwa", frozen)]
struct PyTimeSeries(integrator::TimeSeries);

#[pymethods]
impl PyTimeSeries {
    #[getter]
    fn times(&self) -> Vec<f64> {
        self.0.times.clone()
    }

    #[getter]
    fn states(&self) -> Vec<Vec<C64>> {
        self.0.states.iter().map(|s| s.amplitudes().to_vec()).collect()
    }

    #[getter]
    fn norms(&self) -> Vec<f64> {
        self.0.norms.clone()
    }

    #[getter]
    fn flags(&self) -> Vec<String> {
        self.0.flags.iter().map(ToString::to_string).collect()
    }

    /// `|amp_k|^2` per sample.
    fn population(&self, k: usize) -> PyResult<Vec<f64>> {
        if k >= self.0.dim() {
            return Err(PyValueError::new_err(format!(
                "basis index {k} out of range for dimension {}",
                self.0.dim()
            )));
        }
        Ok(self.0.population(k))
    }

    /// `<psi(t)|obs|psi(t)>` per sample.
    fn observable(&self, obs: Rows) -> PyResult<Vec<f64>> {
        integrator::observable_series(&self.0, &matrix_in(obs)?).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

#[pyclass(name = "RunOutput", module = "rwa", frozen)]
struct PyRunOutput(runner::RunOutput);

#[pymethods]
impl PyRunOutput {
    #[getter]
    fn label(&self) -> String {
        self.0.label.clone()
    }

    #[getter]
    fn config_hash(&self) -> String {
        self.0.config_hash.clone()
    }

    #[getter]
    fn series(&self) -> PyTimeSeries {
        PyTimeSeries(self.0.series.clone())
    }

    /// Requested observables by name.
    #[getter]
    fn observables(&self) -> Vec<(String, Vec<f64>)> {
        self.0.observables.clone()
    }

    fn to_csv(&self) -> String {
        self.0.to_csv()
    }
}

#[pyfunction]
fn pauli(index: &str) -> PyResult<Rows> {
    let which: Pauli = index.parse().map_err(to_py)?;
    Ok(matrix_out(&linalg::pauli(which)))
}

#[pyfunction]
fn walsh_hadamard() -> Rows {
    matrix_out(&linalg::walsh_hadamard())
}

#[pyfunction]
fn commutator(a: Rows, b: Rows) -> PyResult<Rows> {
    let c = linalg::commutator(&matrix_in(a)?, &matrix_in(b)?).map_err(to_py)?;
    Ok(matrix_out(&c))
}

#[pyfunction]
fn tensor_product(a: Rows, b: Rows) -> PyResult<Rows> {
    Ok(matrix_out(&linalg::tensor_product(&matrix_in(a)?, &matrix_in(b)?)))
}

/// `exp(scale * a)`.
#[pyfunction]
#[pyo3(signature = (a, scale = C64::new(1.0, 0.0)))]
fn expm_series(a: Rows, scale: C64) -> PyResult<Rows> {
    let e = linalg::expm_series(&matrix_in(a)?, scale).map_err(to_py)?;
    Ok(matrix_out(&e))
}

/// `exp(i lam sigma_k)` for axis `1`, `2` or `3`.
#[pyfunction]
fn expm_su2(axis: &str, lam: f64) -> PyResult<Rows> {
    let axis: Axis = axis.parse().map_err(to_py)?;
    Ok(matrix_out(&linalg::expm_su2(axis, lam)))
}

#[pyfunction]
fn expm_via_hadamard(lam: f64) -> Rows {
    matrix_out(&linalg::expm_via_hadamard(lam))
}

#[pyfunction]
fn bch_conjugate(x: Rows, a: Rows, depth: usize) -> PyResult<Rows> {
    let m = linalg::bch_conjugate(&matrix_in(x)?, &matrix_in(a)?, depth).map_err(to_py)?;
    Ok(matrix_out(&m))
}

/// `|<a|b>|^2` of two (normalized on entry) states.
#[pyfunction]
fn fidelity(a: Vec<C64>, b: Vec<C64>) -> PyResult<f64> {
    linalg::fidelity(&state_in(a)?, &state_in(b)?).map_err(to_py)
}

/// `(a, a_dag, n)` on `dim` Fock levels.
#[pyfunction]
fn ladder_ops(dim: usize) -> PyResult<(Rows, Rows, Rows)> {
    let ops = fock::ladder_ops(trunc(dim)?);
    Ok((matrix_out(&ops.a), matrix_out(&ops.a_dag), matrix_out(&ops.n_op)))
}

#[pyfunction]
fn commutation_defect(dim: usize) -> PyResult<Rows> {
    Ok(matrix_out(&fock::commutation_defect(trunc(dim)?)))
}

#[pyfunction]
fn number_state(n: usize, dim: usize) -> PyResult<Vec<C64>> {
    let s = fock::number_state(n, trunc(dim)?).map_err(to_py)?;
    Ok(s.into_amplitudes())
}

#[pyfunction]
fn hamiltonian_full(t: f64, p: PyDriveParams) -> Rows {
    matrix_out(&semiclassical::hamiltonian_full(t, &p.0))
}

#[pyfunction]
fn hamiltonian_rwa(t: f64, p: PyDriveParams) -> Rows {
    matrix_out(&semiclassical::hamiltonian_rwa(t, &p.0))
}

#[pyfunction]
fn propagator_rwa_resonance(t: f64, p: PyDriveParams) -> PyResult<Rows> {
    let u = semiclassical::propagator_rwa_resonance(t, &p.0).map_err(to_py)?;
    Ok(matrix_out(&u))
}

#[pyfunction]
fn propagator_rwa_detuned(t: f64, p: PyDriveParams) -> Rows {
    matrix_out(&semiclassical::propagator_rwa_detuned(t, &p.0))
}

#[pyfunction]
fn propagator_rwa_lab(t: f64, p: PyDriveParams) -> Rows {
    matrix_out(&semiclassical::propagator_rwa_lab(t, &p.0))
}

#[pyfunction]
fn solve_beyond_rwa(p: PyDriveParams, t_final: f64, dt: f64, psi0: Vec<C64>) -> PyResult<PyTimeSeries> {
    semiclassical::solve_beyond_rwa(&p.0, t_final, dt, &state_in(psi0)?)
        .map(PyTimeSeries)
        .map_err(to_py)
}

#[pyfunction]
fn hamiltonian_quantum_rabi(p: PyJcParams) -> Rows {
    matrix_out(&jc::hamiltonian_quantum_rabi(&p.0))
}

#[pyfunction]
fn hamiltonian_jc(p: PyJcParams) -> Rows {
    matrix_out(&jc::hamiltonian_jc(&p.0))
}

#[pyfunction]
fn frame_transform_u(t: f64, p: PyJcParams) -> Rows {
    matrix_out(&jc::frame_transform_u(t, &p.0))
}

#[pyfunction]
fn propagator_jc_resonance(t: f64, p: PyJcParams) -> PyResult<Rows> {
    let u = jc::propagator_jc_resonance(t, &p.0).map_err(to_py)?;
    Ok(matrix_out(&u))
}

#[pyfunction]
fn propagator_jc_detuned(t: f64, p: PyJcParams) -> Rows {
    matrix_out(&jc::propagator_jc_detuned(t, &p.0))
}

#[pyfunction]
#[pyo3(signature = (p, psi0, t_final, cfg = None))]
fn simulate_quantum_rabi(
    p: PyJcParams,
    psi0: Vec<C64>,
    t_final: f64,
    cfg: Option<PyIntegratorConfig>,
) -> PyResult<PyTimeSeries> {
    let cfg = cfg.map(|c| c.0).unwrap_or_default();
    jc::simulate_quantum_rabi(&p.0, &state_in(psi0)?, t_final, &cfg)
        .map(PyTimeSeries)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (p, psi0, t_final, cfg = None))]
fn simulate_jc(
    p: PyJcParams,
    psi0: Vec<C64>,
    t_final: f64,
    cfg: Option<PyIntegratorConfig>,
) -> PyResult<PyTimeSeries> {
    let cfg = cfg.map(|c| c.0).unwrap_or_default();
    jc::simulate_jc(&p.0, &state_in(psi0)?, t_final, &cfg)
        .map(PyTimeSeries)
        .map_err(to_py)
}

/// Integrate a constant Hamiltonian.
#[pyfunction]
#[pyo3(signature = (h, psi0, t0, t1, cfg = None))]
fn integrate(
    h: Rows,
    psi0: Vec<C64>,
    t0: f64,
    t1: f64,
    cfg: Option<PyIntegratorConfig>,
) -> PyResult<PyTimeSeries> {
    let cfg = cfg.map(|c| c.0).unwrap_or_default();
    integrator::integrate(&matrix_in(h)?, &state_in(psi0)?, t0, t1, &cfg)
        .map(PyTimeSeries)
        .map_err(to_py)
}

fn parse_scenario(text: &str) -> PyResult<scenario::Scenario> {
    scenario::Scenario::from_toml_str(text).map_err(to_py)
}

/// Run a scenario given as TOML text.
#[pyfunction]
#[pyo3(signature = (toml_text, label = "scenario"))]
fn run_scenario(py: Python<'_>, toml_text: &str, label: &str) -> PyResult<PyRunOutput> {
    let sc = parse_scenario(toml_text)?;
    py.detach(|| runner::execute(label, &sc))
        .map(PyRunOutput)
        .map_err(to_py)
}

/// Summary of a comparison between two scenarios given as TOML text.
#[pyfunction]
fn compare(py: Python<'_>, toml_a: &str, toml_b: &str) -> PyResult<Vec<(String, f64)>> {
    let (a, b) = (parse_scenario(toml_a)?, parse_scenario(toml_b)?);
    let report = py
        .detach(|| runner::compare(&runner::execute("a", &a)?, &runner::execute("b", &b)?))
        .map_err(to_py)?;
    let s = report.summary;
    Ok(vec![
        ("max_deviation".into(), s.max_deviation),
        ("mean_deviation".into(), s.mean_deviation),
        ("time_of_max".into(), s.time_of_max),
        ("min_fidelity".into(), s.min_fidelity),
        ("mean_fidelity".into(), s.mean_fidelity),
    ])
}

/// Sweep table as CSV text.
#[pyfunction]
fn sweep(py: Python<'_>, toml_text: &str, param: &str, values: Vec<f64>) -> PyResult<String> {
    let sc = parse_scenario(toml_text)?;
    py.detach(|| runner::sweep("scenario", &sc, param, &values))
        .map(|t| t.to_csv())
        .map_err(to_py)
}

#[pymodule]
fn rwa(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("SingularityError", m.py().get_type::<SingularityError>())?;
    m.add("ConfigError", m.py().get_type::<ConfigError>())?;
    m.add_class::<PyDriveParams>()?;
    m.add_class::<PyJcParams>()?;
    m.add_class::<PyIntegratorConfig>()?;
    m.add_class::<PyTimeSeries>()?;
    m.add_class::<PyRunOutput>()?;
    m.add_function(wrap_pyfunction!(pauli, m)?)?;
    m.add_function(wrap_pyfunction!(walsh_hadamard, m)?)?;
    m.add_function(wrap_pyfunction!(commutator, m)?)?;
    m.add_function(wrap_pyfunction!(tensor_product, m)?)?;
    m.add_function(wrap_pyfunction!(expm_series, m)?)?;
    m.add_function(wrap_pyfunction!(expm_su2, m)?)?;
    m.add_function(wrap_pyfunction!(expm_via_hadamard, m)?)?;
    m.add_function(wrap_pyfunction!(bch_conjugate, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(ladder_ops, m)?)?;
    m.add_function(wrap_pyfunction!(commutation_defect, m)?)?;
    m.add_function(wrap_pyfunction!(number_state, m)?)?;
    m.add_function(wrap_pyfunction!(hamiltonian_full, m)?)?;
    m.add_function(wrap_pyfunction!(hamiltonian_rwa, m)?)?;
    m.add_function(wrap_pyfunction!(propagator_rwa_resonance, m)?)?;
    m.add_function(wrap_pyfunction!(propagator_rwa_detuned, m)?)?;
    m.add_function(wrap_pyfunction!(propagator_rwa_lab, m)?)?;
    m.add_function(wrap_pyfunction!(solve_beyond_rwa, m)?)?;
    m.add_function(wrap_pyfunction!(hamiltonian_quantum_rabi, m)?)?;
    m.add_function(wrap_pyfunction!(hamiltonian_jc, m)?)?;
    m.add_function(wrap_pyfunction!(frame_transform_u, m)?)?;
    m.add_function(wrap_pyfunction!(propagator_jc_resonance, m)?)?;
    m.add_function(wrap_pyfunction!(propagator_jc_detuned, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_quantum_rabi, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_jc, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
