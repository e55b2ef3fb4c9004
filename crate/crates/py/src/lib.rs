//! Python module `qmark`. Rationals cross the boundary as
//! `fractions.Fraction`, big reals as full-precision decimal strings.

use pyo3::exceptions::{PyArithmeticError, PyIOError, PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qmark::farey;
use qmark::measure::{discrete_moments, empirical_measure, sup_distance};
use qmark::moments::{self, MomentVector, SystemVariant};
use qmark::numerics::{format_real, parse_real, BigReal, PrecisionContext, Rational};
use qmark::qfunc;
use qmark::recurrence::{self, RecurrenceCoefficients};

fn to_py(err: qmark::Error) -> PyErr {
    let msg = err.to_string();
    if err.is_numeric() {
        PyArithmeticError::new_err(msg)
    } else if matches!(err, qmark::Error::Io(_)) {
        PyIOError::new_err(msg)
    } else {
        PyValueError::new_err(msg)
    }
}

fn ctx(digits: u32) -> PyResult<PrecisionContext> {
    PrecisionContext::new(digits).map_err(to_py)
}

/// Accepts a `Fraction`, an `int` or a `"p/q"` string.
fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = obj.str()?.to_string();
    text.trim().parse().map_err(|e| PyValueError::new_err(format!("{text:?} is not a rational: {e}")))
}

fn fraction(py: Python<'_>, r: &Rational) -> PyResult<PyObject> {
    let cls = py.import_bound("fractions")?.getattr("Fraction")?;
    Ok(cls.call1((r.to_string(),))?.unbind())
}

fn strings(values: &[BigReal]) -> Vec<String> {
    values.iter().map(format_real).collect()
}

fn variant(name: &str) -> PyResult<SystemVariant> {
    name.parse().map_err(to_py)
}

/// Points of the Stern-Brocot level `n` as fractions.
#[pyfunction]
fn minkowski_sequence(py: Python<'_>, n: u32) -> PyResult<Vec<PyObject>> {
    let seq = farey::minkowski_sequence(n).map_err(to_py)?;
    seq.points().iter().map(|p| fraction(py, p)).collect()
}

#[pyfunction]
fn continued_fraction(x: &Bound<'_, PyAny>) -> PyResult<Vec<u64>> {
    farey::continued_fraction(&rational(x)?).map_err(to_py)
}

/// Exact `q(x)` for rational `x`.
#[pyfunction]
fn q(py: Python<'_>, x: &Bound<'_, PyAny>) -> PyResult<PyObject> {
    let v = qfunc::q_rational(&rational(x)?).map_err(to_py)?;
    fraction(py, v.value())
}

/// `q(x)` for a decimal string `x`, as a decimal string.
#[pyfunction]
#[pyo3(signature = (x, digits = 50))]
fn q_real(x: &str, digits: u32) -> PyResult<String> {
    let c = ctx(digits)?;
    let v = qfunc::q_real(&parse_real(x, &c).map_err(to_py)?, &c).map_err(to_py)?;
    Ok(format_real(&v))
}

#[pyfunction]
fn q_gap(py: Python<'_>, a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>) -> PyResult<PyObject> {
    let v = qfunc::q_gap(&rational(a)?, &rational(b)?).map_err(to_py)?;
    fraction(py, v.value())
}

/// `sup |q_N - q|` for the empirical distribution on level `n`.
#[pyfunction]
fn sup_error(py: Python<'_>, n: u32) -> PyResult<PyObject> {
    fraction(py, &sup_distance(n).map_err(to_py)?)
}

/// `cond_inf` of the truncated moment system.
#[pyfunction]
#[pyo3(signature = (variant = "A", k = 500, terms = 400, digits = 400))]
fn condition_number(variant: &str, k: usize, terms: usize, digits: u32) -> PyResult<String> {
    let v = self::variant(variant)?;
    let c = moments::system_condition(v, k, terms, &ctx(digits)?).map_err(to_py)?;
    Ok(format_real(&c))
}

/// Moments `m_0..m_K` with their provenance.
#[pyclass(name = "Moments", module = "qmark", frozen)]
struct PyMoments {
    inner: MomentVector,
}

#[pymethods]
impl PyMoments {
    /// Solves the truncated system of the given variant (`"A"` or `"B"`).
    #[staticmethod]
    #[pyo3(signature = (variant = "A", k = 500, terms = 400, digits = 400))]
    fn solve(variant: &str, k: usize, terms: usize, digits: u32) -> PyResult<Self> {
        let inner = moments::solve_moments(self::variant(variant)?, k, terms, &ctx(digits)?).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Exact moments of the uniform measure on level `n`, rounded once.
    #[staticmethod]
    #[pyo3(signature = (level, k_max, digits = 100))]
    fn discrete(level: u32, k_max: usize, digits: u32) -> PyResult<Self> {
        let mu = empirical_measure(level).map_err(to_py)?;
        Ok(Self { inner: discrete_moments(&mu, k_max, &ctx(digits)?) })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: MomentVector::read_json(text.as_bytes()).map_err(to_py)? })
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json_string().map_err(to_py)
    }

    fn values(&self) -> Vec<String> {
        strings(self.inner.values())
    }

    fn m1_error(&self) -> Option<String> {
        self.inner.m1_error().map(|e| format_real(&e))
    }

    #[getter]
    fn digits(&self) -> u32 {
        self.inner.provenance().digits
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __getitem__(&self, k: usize) -> PyResult<String> {
        self.inner.get(k).map(format_real).ok_or_else(|| PyIndexError::new_err(k))
    }

    fn __repr__(&self) -> String {
        let p = self.inner.provenance();
        format!("Moments(len={}, system_size={}, digits={})", self.inner.len(), p.system_size, p.digits)
    }
}

/// Recurrence coefficients `b_0..b_n`, `a_1^2..a_n^2`.
#[pyclass(name = "Coefficients", module = "qmark", frozen)]
struct PyCoefficients {
    inner: RecurrenceCoefficients,
}

#[pymethods]
impl PyCoefficients {
    /// Discretized Stieltjes procedure on level `n`.
    #[staticmethod]
    #[pyo3(signature = (level, n_max, digits = 100))]
    fn stieltjes(level: u32, n_max: usize, digits: u32) -> PyResult<Self> {
        let mu = empirical_measure(level).map_err(to_py)?;
        Ok(Self { inner: recurrence::stieltjes(&mu, n_max, &ctx(digits)?).map_err(to_py)? })
    }

    /// Chebyshev algorithm; needs `m_0..m_{2 n_max + 1}`.
    #[staticmethod]
    #[pyo3(signature = (moments, n_max, digits = 400))]
    fn chebyshev(moments: &PyMoments, n_max: usize, digits: u32) -> PyResult<Self> {
        Ok(Self { inner: recurrence::chebyshev(&moments.inner, n_max, &ctx(digits)?).map_err(to_py)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: RecurrenceCoefficients::read_json(text.as_bytes()).map_err(to_py)? })
    }

    #[getter]
    fn b(&self) -> Vec<String> {
        strings(self.inner.b())
    }

    #[getter]
    fn a2(&self) -> Vec<String> {
        strings(self.inner.a2())
    }

    #[getter]
    fn trusted_prefix(&self) -> usize {
        self.inner.trusted_prefix()
    }

    #[getter]
    fn method(&self) -> String {
        self.inner.provenance().method.to_string()
    }

    fn geometric_means(&self) -> Vec<String> {
        strings(&recurrence::geometric_means(&self.inner))
    }

    fn eval(&self, n: usize, x: &str) -> PyResult<String> {
        let c = ctx(self.inner.provenance().digits)?;
        let x = parse_real(x, &c).map_err(to_py)?;
        Ok(format_real(&recurrence::eval_monic(&self.inner, n, &x, &c).map_err(to_py)?))
    }

    fn zeros(&self, n: usize) -> PyResult<Vec<String>> {
        let c = ctx(self.inner.provenance().digits)?;
        Ok(strings(&recurrence::jacobi_zeros(&self.inner, n, &c).map_err(to_py)?))
    }

    /// Averages and extremes of `a_k^2` over the trusted range.
    fn nevai<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = recurrence::nevai_diagnostics(&self.inner).map_err(to_py)?;
        let d = PyDict::new_bound(py);
        d.set_item("count", r.count)?;
        d.set_item("mean_a2", format_real(&r.mean_a2))?;
        d.set_item("min_a2", format_real(&r.min_a2))?;
        d.set_item("max_a2", format_real(&r.max_a2))?;
        d.set_item("geometric_mean", format_real(&r.geometric_mean))?;
        d.set_item("max_b_deviation", format_real(&r.max_b_deviation))?;
        d.set_item("reference_a2", format_real(&r.reference_a2))?;
        d.set_item("reference_a", format_real(&r.reference_a))?;
        Ok(d)
    }

    fn to_csv(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        self.inner.write_csv(&mut buf).map_err(to_py)?;
        Ok(String::from_utf8(buf).expect("csv is utf-8"))
    }

    fn to_json(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        self.inner.write_json(&mut buf).map_err(to_py)?;
        Ok(String::from_utf8(buf).expect("json is utf-8"))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Coefficients(method={}, len={}, trusted_prefix={})",
            self.inner.provenance().method,
            self.inner.len(),
            self.inner.trusted_prefix()
        )
    }
}

#[pymodule]
#[pyo3(name = "qmark")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(minkowski_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(continued_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(q, m)?)?;
    m.add_function(wrap_pyfunction!(q_real, m)?)?;
    m.add_function(wrap_pyfunction!(q_gap, m)?)?;
    m.add_function(wrap_pyfunction!(sup_error, m)?)?;
    m.add_function(wrap_pyfunction!(condition_number, m)?)?;
    m.add_class::<PyMoments>()?;
    m.add_class::<PyCoefficients>()?;
    Ok(())
}
