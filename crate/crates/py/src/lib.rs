//! Python module `qsl`: states, generators, trajectories and bound reports.

use std::collections::BTreeMap;

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use qsl_core::bounds::{self, BoundKind, BoundReport, TrajectoryProfile};
use qsl_core::dynamics::{self, Trajectory};
use qsl_core::figures::{self, Figure};
use qsl_core::functionals;
use qsl_core::models::{self, ModelParams};
use qsl_core::qmath::{HermitianMatrix, DEFAULT_CLIP};
use qsl_core::{CMatrix, Error, ReferenceBasis};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::PositivityLost { .. } | Error::GridTooCoarse(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        other => PyValueError::new_err(other.to_string()),
    }
}

type Rows = Vec<Vec<Complex64>>;

fn to_matrix(rows: &Rows) -> PyResult<CMatrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("expected a non-empty square matrix"));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn to_rows(m: &CMatrix) -> Rows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn basis_for(basis: Option<&Rows>, dim: usize) -> PyResult<ReferenceBasis> {
    match basis {
        None => Ok(ReferenceBasis::computational(dim)),
        Some(rows) => ReferenceBasis::new(to_matrix(rows)?).map_err(py_err),
    }
}

/// Density matrix. Built from nested lists of complex numbers.
#[pyclass(name = "DensityMatrix", module = "qsl", from_py_object)]
#[derive(Clone)]
struct PyDensityMatrix(dynamics::DensityMatrix);

#[pymethods]
impl PyDensityMatrix {
    #[new]
    fn new(rows: Rows) -> PyResult<Self> {
        Ok(Self(
            dynamics::DensityMatrix::new(to_matrix(&rows)?).map_err(py_err)?,
        ))
    }

    #[staticmethod]
    fn bloch(theta: f64) -> Self {
        Self(dynamics::DensityMatrix::bloch_state(theta))
    }

    #[staticmethod]
    fn maximally_mixed(dim: usize) -> Self {
        Self(dynamics::DensityMatrix::maximally_mixed(dim))
    }

    #[staticmethod]
    fn diagonal(populations: Vec<f64>) -> PyResult<Self> {
        Ok(Self(
            dynamics::DensityMatrix::diagonal(&populations).map_err(py_err)?,
        ))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn purity(&self) -> f64 {
        self.0.purity()
    }

    #[pyo3(signature = (clip = DEFAULT_CLIP))]
    fn entropy(&self, clip: f64) -> PyResult<f64> {
        functionals::entropy(&self.0, clip).map_err(py_err)
    }

    fn information(&self) -> PyResult<f64> {
        functionals::max_information(&self.0).map_err(py_err)
    }

    /// Relative entropy of coherence; computational basis by default.
    #[pyo3(signature = (basis = None, clip = DEFAULT_CLIP))]
    fn coherence(&self, basis: Option<Rows>, clip: f64) -> PyResult<f64> {
        let basis = basis_for(basis.as_ref(), self.0.dim())?;
        functionals::coherence(&self.0, &basis, clip).map_err(py_err)
    }

    fn to_list(&self) -> Rows {
        to_rows(self.0.matrix())
    }

    fn __repr__(&self) -> String {
        format!(
            "DensityMatrix(dim={}, purity={:.6})",
            self.0.dim(),
            self.0.purity()
        )
    }
}

/// GKSL generator: a Hamiltonian plus weighted jump operators.
#[pyclass(name = "Lindbladian", module = "qsl", from_py_object)]
#[derive(Clone)]
struct PyLindbladian(dynamics::Lindbladian);

#[pymethods]
impl PyLindbladian {
    #[new]
    #[pyo3(signature = (hamiltonian, jumps = Vec::new()))]
    fn new(hamiltonian: Rows, jumps: Vec<(Rows, f64)>) -> PyResult<Self> {
        let h = HermitianMatrix::new(to_matrix(&hamiltonian)?).map_err(py_err)?;
        let mut l = dynamics::Lindbladian::new(h);
        for (op, rate) in jumps {
            l = l.with_jump(to_matrix(&op)?, rate).map_err(py_err)?;
        }
        Ok(Self(l))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    /// `L(rho)` at time `t`.
    #[pyo3(signature = (rho, t = 0.0))]
    fn apply(&self, rho: &PyDensityMatrix, t: f64) -> PyResult<Rows> {
        if rho.0.dim() != self.0.dim() {
            return Err(PyValueError::new_err("dimension mismatch"));
        }
        Ok(to_rows(&self.0.apply_matrix(rho.0.matrix(), t)))
    }
}

/// Parameters of a built-in qubit model.
#[pyclass(name = "ModelParams", module = "qsl", frozen, from_py_object)]
#[derive(Clone)]
struct PyModelParams(ModelParams);

#[pymethods]
impl PyModelParams {
    #[staticmethod]
    #[pyo3(name = "thermalization", signature = (gamma0, n, theta))]
    fn thermalization(gamma0: f64, n: f64, theta: f64) -> PyResult<Self> {
        Ok(Self(
            ModelParams::thermalization(gamma0, n, theta).map_err(py_err)?,
        ))
    }

    #[staticmethod]
    fn dephasing(gamma: f64, theta: f64) -> PyResult<Self> {
        Ok(Self(ModelParams::dephasing(gamma, theta).map_err(py_err)?))
    }

    #[staticmethod]
    fn dissipative(gamma: f64, theta: f64) -> PyResult<Self> {
        Ok(Self(
            ModelParams::dissipative(gamma, theta).map_err(py_err)?,
        ))
    }

    #[getter]
    fn model(&self) -> String {
        self.0.model.to_string()
    }
    #[getter]
    fn gamma0(&self) -> f64 {
        self.0.gamma0
    }
    #[getter(N)]
    fn n(&self) -> f64 {
        self.0.n
    }
    #[getter]
    fn gamma(&self) -> f64 {
        self.0.gamma
    }
    #[getter]
    fn theta(&self) -> f64 {
        self.0.theta
    }

    fn lindbladian(&self) -> PyResult<PyLindbladian> {
        Ok(PyLindbladian(
            models::builtin_lindbladian(&self.0).map_err(py_err)?,
        ))
    }

    fn initial_state(&self) -> PyDensityMatrix {
        PyDensityMatrix(dynamics::DensityMatrix::bloch_state(self.0.theta))
    }

    fn analytic_state(&self, t: f64) -> PyResult<PyDensityMatrix> {
        Ok(PyDensityMatrix(
            models::analytic_state(&self.0, t).map_err(py_err)?,
        ))
    }

    /// Closed-form quantities of the model at time `t`, keyed by name.
    fn analytic_quantities(&self, t: f64) -> PyResult<BTreeMap<&'static str, f64>> {
        let q = models::analytic_quantities(&self.0, t).map_err(py_err)?;
        Ok(q.named().into_iter().collect())
    }

    fn __repr__(&self) -> String {
        serde_json::to_string(&self.0).unwrap_or_default()
    }
}

/// One bound evaluated over a trajectory.
#[pyclass(name = "BoundReport", module = "qsl", frozen, from_py_object)]
#[derive(Clone)]
struct PyBoundReport(BoundReport);

#[pymethods]
impl PyBoundReport {
    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind.name()
    }
    #[getter]
    fn numerator(&self) -> f64 {
        self.0.numerator
    }
    #[getter]
    fn bound_value(&self) -> f64 {
        self.0.bound_value
    }
    #[getter(horizon_T)]
    fn horizon_t(&self) -> f64 {
        self.0.horizon_t
    }
    #[getter]
    fn slack(&self) -> f64 {
        self.0.slack
    }
    #[getter]
    fn regularized(&self) -> bool {
        self.0.regularized
    }
    #[getter]
    fn terms(&self) -> BTreeMap<String, f64> {
        self.0.denominator_terms.clone()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).unwrap_or_default()
    }

    fn __repr__(&self) -> String {
        format!(
            "BoundReport(kind={}, bound_value={:e}, slack={:.6})",
            self.0.kind.name(),
            self.0.bound_value,
            self.0.slack
        )
    }
}

/// Sampled solution of the master equation.
#[pyclass(name = "Trajectory", module = "qsl", frozen)]
struct PyTrajectory(Trajectory);

#[pymethods]
impl PyTrajectory {
    #[getter]
    fn times(&self) -> Vec<f64> {
        self.0.times().to_vec()
    }
    #[getter]
    fn horizon(&self) -> f64 {
        self.0.horizon()
    }
    #[getter]
    fn steps(&self) -> usize {
        self.0.steps()
    }
    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn states(&self) -> Vec<PyDensityMatrix> {
        self.0
            .states()
            .iter()
            .cloned()
            .map(PyDensityMatrix)
            .collect()
    }

    fn state(&self, index: usize) -> PyResult<PyDensityMatrix> {
        self.0
            .states()
            .get(index)
            .cloned()
            .map(PyDensityMatrix)
            .ok_or_else(|| PyValueError::new_err("index out of range"))
    }

    fn __len__(&self) -> usize {
        self.0.times().len()
    }

    /// Every bound, in a fixed order.
    #[pyo3(signature = (basis = None))]
    fn bounds(&self, basis: Option<Rows>) -> PyResult<Vec<PyBoundReport>> {
        let basis = basis_for(basis.as_ref(), self.0.dim())?;
        let reports = bounds::all_reports(&self.0, &basis).map_err(py_err)?;
        Ok(reports.into_iter().map(PyBoundReport).collect())
    }

    /// A single bound by name (`esl`, `isl`, `csl`, `erasure`, `action_s`, ...).
    #[pyo3(signature = (kind, basis = None))]
    fn bound(&self, kind: &str, basis: Option<Rows>) -> PyResult<PyBoundReport> {
        let kind = BoundKind::ALL
            .into_iter()
            .find(|k| k.name() == kind)
            .ok_or_else(|| PyValueError::new_err(format!("unknown bound `{kind}`")))?;
        let basis = basis_for(basis.as_ref(), self.0.dim())?;
        let profile = TrajectoryProfile::new(&self.0, &basis).map_err(py_err)?;
        Ok(PyBoundReport(profile.report_for(kind)))
    }
}

#[pyfunction]
#[pyo3(signature = (lindbladian, rho0, horizon, steps = 4096, clip = DEFAULT_CLIP))]
fn evolve(
    py: Python<'_>,
    lindbladian: &PyLindbladian,
    rho0: &PyDensityMatrix,
    horizon: f64,
    steps: usize,
    clip: f64,
) -> PyResult<PyTrajectory> {
    let (l, rho) = (&lindbladian.0, &rho0.0);
    let traj = py
        .detach(|| dynamics::evolve_with_clip(l, rho, horizon, steps, clip))
        .map_err(py_err)?;
    Ok(PyTrajectory(traj))
}

/// Instantaneous ratio of the entropy rate to its Cauchy-Schwarz bound.
#[pyfunction]
#[pyo3(signature = (lindbladian, rho, t = 0.0, clip = DEFAULT_CLIP))]
fn saturation_slack(
    lindbladian: &PyLindbladian,
    rho: &PyDensityMatrix,
    t: f64,
    clip: f64,
) -> PyResult<f64> {
    bounds::saturation_slack(&lindbladian.0, &rho.0, t, clip).map_err(py_err)
}

/// Rows `(T, bound, theta, regularized)` of a reference figure.
#[pyfunction]
#[pyo3(signature = (figure, steps = 4096, t_min = None))]
fn figure_data(
    py: Python<'_>,
    figure: &str,
    steps: usize,
    t_min: Option<f64>,
) -> PyResult<Vec<(f64, f64, f64, bool)>> {
    let figure: Figure = figure.parse().map_err(py_err)?;
    let rows = py
        .detach(|| figures::figure_data(figure, steps, t_min))
        .map_err(py_err)?;
    Ok(rows
        .into_iter()
        .map(|r| (r.horizon, r.bound, r.theta, r.regularized))
        .collect())
}

#[pymodule]
fn qsl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PyLindbladian>()?;
    m.add_class::<PyModelParams>()?;
    m.add_class::<PyBoundReport>()?;
    m.add_class::<PyTrajectory>()?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(saturation_slack, m)?)?;
    m.add_function(wrap_pyfunction!(figure_data, m)?)?;
    m.add("DEFAULT_CLIP", DEFAULT_CLIP)?;
    Ok(())
}
