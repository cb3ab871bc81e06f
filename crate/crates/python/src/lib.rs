//! Python bindings for `epr2`.

use epr2::correlations::{self, Setting};
use epr2::harness::{simulate_lhv, StateSpec};
use epr2::linalg::Mat4;
use epr2::localmodels::{self, Epr2Split, SettingGrid};
use epr2::states::{self, BdParams};
use epr2::Error;
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: Error) -> PyErr {
    if e.is_numerical() {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn setting(v: [f64; 3]) -> PyResult<Setting> {
    Setting::new(v).map_err(py_err)
}

/// Two-qubit density matrix in the basis |00⟩, |01⟩, |10⟩, |11⟩.
#[pyclass(name = "DensityMatrix", module = "epr2_py", frozen)]
struct PyDensityMatrix(states::DensityMatrix);

#[pymethods]
impl PyDensityMatrix {
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
            return Err(PyValueError::new_err("expected a 4x4 matrix"));
        }
        let m = Mat4::from_fn(|i, j| rows[i][j]);
        states::DensityMatrix::new(m).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn pure(theta: f64) -> PyResult<Self> {
        Ok(Self(states::pure_theta(theta).map_err(py_err)?.projector()))
    }

    #[staticmethod]
    fn werner(x: f64) -> PyResult<Self> {
        states::werner(x).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn generalized_werner(x: f64, theta: f64) -> PyResult<Self> {
        states::generalized_werner(x, theta).map(Self).map_err(py_err)
    }

    #[staticmethod]
    #[pyo3(signature = (*, x=0.0, y=0.0, a=0.0, b=0.0, gamma=0.0))]
    fn bell_diag(x: f64, y: f64, a: f64, b: f64, gamma: f64) -> PyResult<Self> {
        let p = BdParams::new(x, y, a, b, gamma).map_err(py_err)?;
        states::bell_diag(&p).map(Self).map_err(py_err)
    }

    /// State from the CLI mini-language, e.g. `"gw:x=0.8,theta=0.3"`.
    #[staticmethod]
    fn from_spec(spec: &str) -> PyResult<Self> {
        let spec: StateSpec = spec.parse().map_err(py_err)?;
        spec.density_matrix().map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        states::DensityMatrix::from_json_str(text).map(Self).map_err(py_err)
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }

    fn rows(&self) -> Vec<Vec<Complex64>> {
        self.0.matrix().0.iter().map(|r| r.to_vec()).collect()
    }

    fn concurrence(&self) -> f64 {
        epr2::concurrence(&self.0)
    }

    fn p_q(&self, a: [f64; 3], b: [f64; 3]) -> PyResult<f64> {
        Ok(correlations::p_q(&self.0, &setting(a)?, &setting(b)?))
    }

    /// `[P(+,+), P(+,−), P(−,+), P(−,−)]`
    fn joint_table(&self, a: [f64; 3], b: [f64; 3]) -> PyResult<[f64; 4]> {
        Ok(correlations::joint_table(&self.0, &setting(a)?, &setting(b)?).cells())
    }

    /// Optimal ensemble as `[(weight, amplitudes)]`.
    fn wootters_decomposition(&self) -> PyResult<Vec<(f64, Vec<Complex64>)>> {
        let d = epr2::entanglement::wootters_decomposition(&self.0).map_err(py_err)?;
        Ok(d.branches.into_iter().map(|(t, phi)| (t, phi.0.to_vec())).collect())
    }

    /// Local/nonlocal split with `p_local = 1 − C`.
    fn split(&self) -> PyResult<PySplit> {
        localmodels::model_general(&self.0).map(PySplit).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix({})", self.0.to_json_string())
    }
}

/// A state with its local model and local weight.
#[pyclass(name = "Split", module = "epr2_py", frozen)]
struct PySplit(Epr2Split);

#[pymethods]
impl PySplit {
    /// The family construction for a CLI state spec (`file:` uses the
    /// general one).
    #[staticmethod]
    fn from_spec(spec: &str) -> PyResult<Self> {
        let spec: StateSpec = spec.parse().map_err(py_err)?;
        spec.split().map(Self).map_err(py_err)
    }

    #[getter]
    fn p_local(&self) -> f64 {
        self.0.p_local
    }

    #[getter]
    fn state(&self) -> PyDensityMatrix {
        PyDensityMatrix(self.0.source)
    }

    fn local(&self, a: [f64; 3], b: [f64; 3]) -> PyResult<f64> {
        Ok(self.0.local(&setting(a)?, &setting(b)?))
    }

    fn quantum(&self, a: [f64; 3], b: [f64; 3]) -> PyResult<f64> {
        Ok(self.0.quantum(&setting(a)?, &setting(b)?))
    }

    fn remainder(&self, a: [f64; 3], b: [f64; 3]) -> PyResult<f64> {
        self.0.remainder(&setting(a)?, &setting(b)?).map_err(py_err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    /// Checks the split on a `polar × azimuth` grid of settings per party.
    #[pyo3(signature = (polar=20, azimuth=8))]
    fn check<'py>(&self, py: Python<'py>, polar: usize, azimuth: usize) -> PyResult<Bound<'py, PyDict>> {
        let grid = SettingGrid::new(polar, azimuth);
        let r = py.detach(|| self.0.check(&grid));
        let d = PyDict::new(py);
        d.set_item("count", r.count)?;
        d.set_item("min_remainder", r.min_remainder)?;
        d.set_item("max_local_error", r.max_local_error)?;
        d.set_item("min_ratio", r.min_ratio)?;
        d.set_item("valid", r.is_valid(1e-9))?;
        Ok(d)
    }

    /// Monte-Carlo frequencies of the local model,
    /// `[P(+,+), P(+,−), P(−,+), P(−,−)]`.
    #[pyo3(signature = (a, b, samples=100_000, seed=epr2::harness::DEFAULT_SEED))]
    fn simulate(&self, py: Python<'_>, a: [f64; 3], b: [f64; 3], samples: usize, seed: u64) -> PyResult<[f64; 4]> {
        if samples == 0 {
            return Err(PyValueError::new_err("samples must be positive"));
        }
        let (a, b) = (setting(a)?, setting(b)?);
        Ok(py.detach(|| simulate_lhv(&self.0.model, &a, &b, samples, seed)).cells())
    }

    fn __repr__(&self) -> String {
        format!("Split(p_local={}, branches={})", self.0.p_local, self.0.model.branches.len())
    }
}

#[pyfunction]
fn concurrence(rho: &PyDensityMatrix) -> f64 {
    epr2::concurrence(&rho.0)
}

#[pyfunction]
fn model_pure(theta: f64) -> PyResult<PySplit> {
    localmodels::model_pure(theta).map(PySplit).map_err(py_err)
}

#[pyfunction]
fn model_werner(x: f64) -> PyResult<PySplit> {
    localmodels::model_werner(x).map(PySplit).map_err(py_err)
}

#[pyfunction]
fn model_gen_werner(x: f64, theta: f64) -> PyResult<PySplit> {
    localmodels::model_gen_werner(x, theta).map(PySplit).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (*, x=0.0, y=0.0, a=0.0, b=0.0, gamma=0.0))]
fn model_bd(x: f64, y: f64, a: f64, b: f64, gamma: f64) -> PyResult<PySplit> {
    let p = BdParams::new(x, y, a, b, gamma).map_err(py_err)?;
    localmodels::model_bd(&p).map(PySplit).map_err(py_err)
}

#[pyfunction]
fn model_general(rho: &PyDensityMatrix) -> PyResult<PySplit> {
    rho.split()
}

#[pymodule]
fn epr2_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PySplit>()?;
    m.add_function(wrap_pyfunction!(concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(model_pure, m)?)?;
    m.add_function(wrap_pyfunction!(model_werner, m)?)?;
    m.add_function(wrap_pyfunction!(model_gen_werner, m)?)?;
    m.add_function(wrap_pyfunction!(model_bd, m)?)?;
    m.add_function(wrap_pyfunction!(model_general, m)?)?;
    Ok(())
}
