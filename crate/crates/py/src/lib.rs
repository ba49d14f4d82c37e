//! Python bindings for `simplex_edge`.

use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

use simplex_edge::edge::{self, AngleSlice};
use simplex_edge::solver::{self, full_box, Method};
use simplex_edge::{metric, simplex, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::SingularMatrix { .. } => PyZeroDivisionError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn params(a: u32, b: u32) -> PyResult<simplex::SimplexParams> {
    simplex::normalize_params(a, b).map_err(to_py)
}

fn matrix(rows: Vec<Vec<f64>>) -> PyResult<metric::SymMatrix4> {
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        return Err(PyValueError::new_err("expected a 4x4 nested list"));
    }
    let e: [[f64; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| rows[i][j]));
    metric::SymMatrix4::new(e).map_err(to_py)
}

fn rows(m: &metric::SymMatrix4) -> Vec<Vec<f64>> {
    m.entries().iter().map(|r| r.to_vec()).collect()
}

#[pyclass(name = "SimplexParams", frozen, skip_from_py_object)]
struct PySimplexParams(simplex::SimplexParams);

#[pymethods]
impl PySimplexParams {
    /// Normalized so that b >= a.
    #[new]
    fn new(a: u32, b: u32) -> PyResult<Self> {
        params(a, b).map(Self)
    }

    #[getter]
    fn a(&self) -> u32 {
        self.0.a()
    }

    #[getter]
    fn b(&self) -> u32 {
        self.0.b()
    }

    #[getter]
    fn swapped(&self) -> bool {
        self.0.swapped()
    }

    fn classify(&self) -> PyResult<String> {
        simplex::classify_realization(&self.0)
            .map(|c| c.as_str().to_string())
            .map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("SimplexParams(a={}, b={}, swapped={})", self.0.a(), self.0.b(), self.0.swapped())
    }
}

#[pyclass(name = "DihedralAngles", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyDihedralAngles(simplex::DihedralAngles);

#[pymethods]
impl PyDihedralAngles {
    #[new]
    fn new(alpha1: f64, alpha2: f64, beta1: f64, beta2: f64) -> Self {
        Self(simplex::DihedralAngles::new(alpha1, alpha2, beta1, beta2))
    }

    /// Completes (alpha1, beta1) from the angle-sum constraints.
    #[staticmethod]
    fn from_reduced(alpha1: f64, beta1: f64, a: u32, b: u32) -> PyResult<Self> {
        Ok(Self(simplex::DihedralAngles::from_reduced(alpha1, beta1, &params(a, b)?)))
    }

    #[getter]
    fn alpha1(&self) -> f64 {
        self.0.alpha1
    }

    #[getter]
    fn alpha2(&self) -> f64 {
        self.0.alpha2
    }

    #[getter]
    fn beta1(&self) -> f64 {
        self.0.beta1
    }

    #[getter]
    fn beta2(&self) -> f64 {
        self.0.beta2
    }

    fn coxeter_schlafli(&self) -> Vec<Vec<f64>> {
        rows(&simplex::build_coxeter_schlafli(&self.0))
    }

    fn __repr__(&self) -> String {
        let d = self.0;
        format!(
            "DihedralAngles(alpha1={}, alpha2={}, beta1={}, beta2={})",
            d.alpha1, d.alpha2, d.beta1, d.beta2
        )
    }
}

#[pyclass(name = "SolverConfig", skip_from_py_object)]
#[derive(Clone)]
struct PySolverConfig(solver::SolverConfig);

#[pymethods]
impl PySolverConfig {
    #[new]
    #[pyo3(signature = (tolerance=1e-11, angle_tolerance=1e-12, max_iterations=200_000, k1=None, k2=None, method="auto", oracle_resolution=200))]
    fn new(
        tolerance: f64,
        angle_tolerance: f64,
        max_iterations: usize,
        k1: Option<f64>,
        k2: Option<f64>,
        method: &str,
        oracle_resolution: usize,
    ) -> PyResult<Self> {
        let method = match method {
            "fixed" => Method::FixedPoint,
            "newton" => Method::Newton,
            "oracle" => Method::GridOracle,
            "auto" => Method::Auto,
            other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
        };
        let cfg = solver::SolverConfig {
            tolerance,
            angle_tolerance,
            max_iterations,
            k1,
            k2,
            method,
            oracle_resolution,
            ..solver::SolverConfig::default()
        };
        cfg.validate().map_err(to_py)?;
        Ok(Self(cfg))
    }

    #[getter]
    fn tolerance(&self) -> f64 {
        self.0.tolerance
    }

    #[getter]
    fn max_iterations(&self) -> usize {
        self.0.max_iterations
    }
}

#[pyclass(name = "SolveReport", frozen, skip_from_py_object)]
struct PySolveReport(solver::SolveReport);

#[pymethods]
impl PySolveReport {
    #[getter]
    fn status(&self) -> &'static str {
        self.0.status.as_str()
    }

    #[getter]
    fn realization_class(&self) -> &'static str {
        self.0.class.as_str()
    }

    #[getter]
    fn a(&self) -> u32 {
        self.0.params.a()
    }

    #[getter]
    fn b(&self) -> u32 {
        self.0.params.b()
    }

    #[getter]
    fn angles(&self) -> Option<PyDihedralAngles> {
        self.0.angles.map(PyDihedralAngles)
    }

    #[getter]
    fn residual_f1(&self) -> f64 {
        self.0.residual_f1
    }

    #[getter]
    fn residual_f2(&self) -> f64 {
        self.0.residual_f2
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.0.iterations
    }

    #[getter]
    fn contraction_norm_estimate(&self) -> f64 {
        self.0.contraction_norm_estimate
    }

    #[getter]
    fn is_proper(&self) -> Option<bool> {
        self.0.properness.map(|p| p.is_proper())
    }

    #[getter]
    fn det_b(&self) -> Option<f64> {
        self.0.verification.as_ref().map(|v| v.det_b)
    }

    #[getter]
    fn signature(&self) -> Option<(usize, usize, usize)> {
        self.0
            .verification
            .as_ref()
            .map(|v| (v.signature.positive, v.signature.negative, v.signature.zero))
    }

    /// (d01, d02, d03, d13)
    #[getter]
    fn edge_lengths(&self) -> Option<(f64, f64, f64, f64)> {
        self.0
            .verification
            .as_ref()
            .and_then(|v| v.edge_lengths)
            .map(|e| (e.d01, e.d02, e.d03, e.d13))
    }

    #[getter]
    fn improper_roots(&self) -> Vec<(f64, f64)> {
        self.0.improper_roots.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "SolveReport(a={}, b={}, status={}, angles={:?})",
            self.0.params.a(),
            self.0.params.b(),
            self.0.status.as_str(),
            self.0.angles.map(|a| (a.alpha1, a.beta1))
        )
    }
}

#[pyfunction]
fn normalize_params(a: u32, b: u32) -> PyResult<PySimplexParams> {
    params(a, b).map(PySimplexParams)
}

#[pyfunction]
fn classify_realization(a: u32, b: u32) -> PyResult<String> {
    simplex::classify_realization(&params(a, b)?)
        .map(|c| c.as_str().to_string())
        .map_err(to_py)
}

/// None when no bound was found below `b_limit` (default 4a).
#[pyfunction]
#[pyo3(signature = (a, b_limit=None))]
fn compute_bmax(a: u32, b_limit: Option<u32>) -> PyResult<Option<u32>> {
    edge::compute_bmax(a, b_limit.unwrap_or(4 * a))
        .map(|v| v.value())
        .map_err(to_py)
}

/// (lhs, rhs, strict)
#[pyfunction]
fn realizability_inequality(a: u32, b: u32) -> PyResult<(f64, f64, bool)> {
    let i = edge::realizability_inequality(&params(a, b)?).map_err(to_py)?;
    Ok((i.lhs, i.rhs, i.strict))
}

fn slice(a: u32, b: u32, alpha1: f64, beta1: f64) -> PyResult<AngleSlice> {
    AngleSlice::new(alpha1, beta1, params(a, b)?).map_err(to_py)
}

#[pyfunction]
fn f1(a: u32, b: u32, alpha1: f64, beta1: f64) -> PyResult<f64> {
    Ok(edge::f1(&slice(a, b, alpha1, beta1)?))
}

#[pyfunction]
fn f2(a: u32, b: u32, alpha1: f64, beta1: f64) -> PyResult<f64> {
    Ok(edge::f2(&slice(a, b, alpha1, beta1)?))
}

#[pyfunction]
fn d1(a: u32, b: u32, alpha1: f64, beta1: f64) -> PyResult<f64> {
    Ok(edge::d1(&slice(a, b, alpha1, beta1)?))
}

#[pyfunction]
fn d2(a: u32, b: u32, alpha1: f64, beta1: f64) -> PyResult<f64> {
    Ok(edge::d2(&slice(a, b, alpha1, beta1)?))
}

#[pyfunction]
#[pyo3(signature = (a, b, config=None))]
fn solve(py: Python<'_>, a: u32, b: u32, config: Option<PyRef<'_, PySolverConfig>>) -> PyResult<PySolveReport> {
    let p = params(a, b)?;
    let cfg = config.map(|c| c.0).unwrap_or_default();
    py.detach(|| solver::solve(&p, &cfg)).map(PySolveReport).map_err(to_py)
}

/// Root candidates (alpha1, beta1, residual) in the search box, or in the
/// whole angle box with `full=True`.
#[pyfunction]
#[pyo3(signature = (a, b, resolution=200, full=false))]
fn grid_oracle(py: Python<'_>, a: u32, b: u32, resolution: usize, full: bool) -> PyResult<Vec<(f64, f64, f64)>> {
    let p = params(a, b)?;
    let domain = if full { full_box(&p) } else { solver::domain_for(&p).map_err(to_py)? };
    let cands = py
        .detach(|| solver::grid_oracle(&p, &domain, resolution))
        .map_err(to_py)?;
    Ok(cands.into_iter().map(|c| (c.alpha1, c.beta1, c.residual)).collect())
}

#[pyfunction]
fn build_coxeter_schlafli(alpha1: f64, beta1: f64, a: u32, b: u32) -> PyResult<Vec<Vec<f64>>> {
    let ang = simplex::DihedralAngles::from_reduced(alpha1, beta1, &params(a, b)?);
    Ok(rows(&simplex::build_coxeter_schlafli(&ang)))
}

#[pyfunction]
fn determinant(m: Vec<Vec<f64>>) -> PyResult<f64> {
    Ok(metric::determinant(&matrix(m)?))
}

#[pyfunction]
fn inverse(m: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
    metric::inverse(&matrix(m)?).map(|i| rows(&i)).map_err(to_py)
}

/// (positive, negative, zero) eigenvalue counts.
#[pyfunction]
fn signature(m: Vec<Vec<f64>>) -> PyResult<(usize, usize, usize)> {
    let s = metric::signature(&matrix(m)?);
    Ok((s.positive, s.negative, s.zero))
}

#[pymodule]
#[pyo3(name = "simplex_edge")]
fn simplex_edge_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySimplexParams>()?;
    m.add_class::<PyDihedralAngles>()?;
    m.add_class::<PySolverConfig>()?;
    m.add_class::<PySolveReport>()?;
    m.add_function(wrap_pyfunction!(normalize_params, m)?)?;
    m.add_function(wrap_pyfunction!(classify_realization, m)?)?;
    m.add_function(wrap_pyfunction!(compute_bmax, m)?)?;
    m.add_function(wrap_pyfunction!(realizability_inequality, m)?)?;
    m.add_function(wrap_pyfunction!(f1, m)?)?;
    m.add_function(wrap_pyfunction!(f2, m)?)?;
    m.add_function(wrap_pyfunction!(d1, m)?)?;
    m.add_function(wrap_pyfunction!(d2, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(grid_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(build_coxeter_schlafli, m)?)?;
    m.add_function(wrap_pyfunction!(determinant, m)?)?;
    m.add_function(wrap_pyfunction!(inverse, m)?)?;
    m.add_function(wrap_pyfunction!(signature, m)?)?;
    Ok(())
}
