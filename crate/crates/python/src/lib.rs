use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use wsumci::coverage::SweepConfig;
use wsumci::{mixture, Error, IntervalRequest, Method, QuadratureConfig, Sidedness, SolverConfig};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidModel(_) | Error::InvalidRequest(_) | Error::NotASupportPoint { .. } => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// Two binomial samples and the weight of the first stratum.
#[pyclass(frozen, name = "Model")]
struct PyModel {
    inner: wsumci::Model,
}

#[pymethods]
impl PyModel {
    #[new]
    fn new(n1: u32, n2: u32, w1: f64) -> PyResult<Self> {
        let inner = wsumci::Model::new(n1, n2, w1).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n1(&self) -> u32 {
        self.inner.user_design().0
    }

    #[getter]
    fn n2(&self) -> u32 {
        self.inner.user_design().1
    }

    #[getter]
    fn w1(&self) -> f64 {
        self.inner.user_design().2
    }

    fn estimate(&self, k1: u32, k2: u32) -> f64 {
        self.inner.estimate(k1, k2)
    }

    /// Sorted distinct values the estimator can take.
    fn support(&self) -> Vec<f64> {
        self.inner.grid().values().to_vec()
    }

    /// Grid points just below and above `u`.
    fn neighbors(&self, u: f64) -> PyResult<(f64, f64)> {
        self.inner.grid().neighbors(u).map_err(to_py)
    }

    fn one_sided_threshold(&self) -> f64 {
        self.inner.one_sided_threshold()
    }

    /// P(estimate <= u) averaged over the parameters with the given vartheta.
    fn cdf(&self, u: f64, vartheta: f64) -> PyResult<f64> {
        mixture::cdf(&self.inner, u, vartheta, &QuadratureConfig::default()).map_err(to_py)
    }

    fn pmf(&self, u: f64, vartheta: f64) -> PyResult<f64> {
        mixture::pmf(&self.inner, u, vartheta, &QuadratureConfig::default()).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        let (n1, n2, w1) = self.inner.user_design();
        format!("Model(n1={n1}, n2={n2}, w1={w1})")
    }
}

#[pyclass(frozen, name = "Interval")]
struct PyInterval {
    #[pyo3(get)]
    lower: f64,
    #[pyo3(get)]
    upper: f64,
    #[pyo3(get)]
    gamma1: f64,
    #[pyo3(get)]
    length: f64,
    #[pyo3(get)]
    sides: &'static str,
    #[pyo3(get)]
    method: &'static str,
    #[pyo3(get)]
    reflected: bool,
    #[pyo3(get)]
    y: Option<f64>,
}

#[pymethods]
impl PyInterval {
    fn contains(&self, vartheta: f64) -> bool {
        self.lower < vartheta && vartheta < self.upper
    }

    fn __repr__(&self) -> String {
        format!(
            "Interval(lower={}, upper={}, method={}, sides={})",
            self.lower, self.upper, self.method, self.sides
        )
    }
}

impl From<wsumci::Interval> for PyInterval {
    fn from(iv: wsumci::Interval) -> Self {
        Self {
            lower: iv.lower,
            upper: iv.upper,
            gamma1: iv.gamma1,
            length: iv.length,
            sides: iv.sides.as_str(),
            method: iv.method.as_str(),
            reflected: iv.reflected,
            y: iv.y,
        }
    }
}

fn parse_method(method: &str) -> PyResult<Method> {
    method.parse().map_err(to_py)
}

/// Confidence interval for the observed counts.
///
/// `method` is "standard", "shortest" or "randomized". The randomized interval
/// needs `y` or a `seed` to draw it from; the standard one uses `y` if given.
#[pyfunction]
#[pyo3(signature = (model, k1, k2, gamma = 0.95, method = "randomized", y = None, seed = None))]
fn interval(
    py: Python<'_>,
    model: &PyModel,
    k1: u32,
    k2: u32,
    gamma: f64,
    method: &str,
    y: Option<f64>,
    seed: Option<u64>,
) -> PyResult<PyInterval> {
    let mut req = IntervalRequest::new(model.inner.clone(), k1, k2, gamma, parse_method(method)?);
    req.y = y;
    req.seed = seed;
    let iv = py
        .detach(|| wsumci::compute_interval(&req, &SolverConfig::default()))
        .map_err(to_py)?;
    Ok(iv.into())
}

#[pyfunction]
#[pyo3(signature = (model, k1, k2, gamma = 0.95, y = None))]
fn standard_ci(
    py: Python<'_>,
    model: &PyModel,
    k1: u32,
    k2: u32,
    gamma: f64,
    y: Option<f64>,
) -> PyResult<PyInterval> {
    interval(py, model, k1, k2, gamma, "standard", y, None)
}

#[pyfunction]
#[pyo3(signature = (model, k1, k2, gamma = 0.95))]
fn shortest_ci(py: Python<'_>, model: &PyModel, k1: u32, k2: u32, gamma: f64) -> PyResult<PyInterval> {
    interval(py, model, k1, k2, gamma, "shortest", None, None)
}

#[pyfunction]
#[pyo3(signature = (model, k1, k2, gamma = 0.95, y = None, seed = None))]
fn randomized_ci(
    py: Python<'_>,
    model: &PyModel,
    k1: u32,
    k2: u32,
    gamma: f64,
    y: Option<f64>,
    seed: Option<u64>,
) -> PyResult<PyInterval> {
    interval(py, model, k1, k2, gamma, "randomized", y, seed)
}

/// "one_sided" if the shortest interval at `u` starts at 0 (or ends at 1).
#[pyfunction]
fn classify_sidedness(model: &PyModel, u: f64) -> &'static str {
    match wsumci::classify_sidedness(&model.inner, u) {
        Sidedness::OneSided => "one_sided",
        Sidedness::TwoSided => "two_sided",
    }
}

/// Coverage and expected length on the grid i / (grid + 1).
///
/// Returns a list of (vartheta, coverage, expected_length) tuples.
#[pyfunction]
#[pyo3(signature = (model, method = "shortest", gamma = 0.95, grid = 99, y_nodes = 64))]
fn coverage(
    py: Python<'_>,
    model: &PyModel,
    method: &str,
    gamma: f64,
    grid: usize,
    y_nodes: usize,
) -> PyResult<Vec<(f64, f64, f64)>> {
    let cfg = SweepConfig {
        grid_points: grid,
        y_nodes,
        method: parse_method(method)?,
        gamma,
        ..SweepConfig::default()
    };
    let pts = py.detach(|| wsumci::sweep(&model.inner, &cfg)).map_err(to_py)?;
    Ok(pts
        .into_iter()
        .map(|p| (p.vartheta, p.coverage, p.expected_length))
        .collect())
}

#[pymodule]
fn pywsumci(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_class::<PyInterval>()?;
    m.add_function(wrap_pyfunction!(interval, m)?)?;
    m.add_function(wrap_pyfunction!(standard_ci, m)?)?;
    m.add_function(wrap_pyfunction!(shortest_ci, m)?)?;
    m.add_function(wrap_pyfunction!(randomized_ci, m)?)?;
    m.add_function(wrap_pyfunction!(classify_sidedness, m)?)?;
    m.add_function(wrap_pyfunction!(coverage, m)?)?;
    Ok(())
}
