//! Python bindings for `cvclone`.
//!
//! Output counts accept an `int`, the string `"inf"`, or `float("inf")`.
//! Coherent amplitudes are Python `complex` numbers.

use cvclone::cloner::{self, format_rational, ClonerSpec, CopyCount};
use cvclone::estimation::{self, MeasurementWeights, VarianceReport};
use cvclone::fock::{self, QuadratureGrid};
use cvclone::quadrature::{
    CoherentState, ComplexAmplitude, GaussianMixtureState, NoiseCovariance, SqueezedState,
};
use cvclone::verify::{self, BoundsConfig, FockConfig, McConfig, VerificationReport};
use cvclone::Error;
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyString;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Truncation { .. } | Error::Dimension { .. } => {
            PyArithmeticError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn copy_count(m: &Bound<'_, PyAny>) -> PyResult<CopyCount> {
    if let Ok(s) = m.cast::<PyString>() {
        return s.to_str()?.parse().map_err(PyValueError::new_err);
    }
    if let Ok(n) = m.extract::<u32>() {
        return Ok(CopyCount::Finite(n));
    }
    match m.extract::<f64>() {
        Ok(x) if x == f64::INFINITY => Ok(CopyCount::Unbounded),
        _ => Err(PyValueError::new_err(format!(
            "output count must be a non-negative int or \"inf\", got {m}"
        ))),
    }
}

fn count_to_py(py: Python<'_>, m: CopyCount) -> PyResult<Py<PyAny>> {
    Ok(match m {
        CopyCount::Finite(n) => n.into_pyobject(py)?.into_any().unbind(),
        CopyCount::Unbounded => f64::INFINITY.into_pyobject(py)?.into_any().unbind(),
    })
}

fn amplitude(alpha: Complex64) -> ComplexAmplitude {
    ComplexAmplitude::new(alpha.re, alpha.im)
}

/// An N→M symmetric Gaussian cloner and the noise it adds to each clone.
#[pyclass(name = "Cloner", module = "cvclone", frozen)]
struct PyCloner(ClonerSpec);

#[pymethods]
impl PyCloner {
    /// The optimal N→M cloner.
    #[staticmethod]
    fn opt(n: u32, m: &Bound<'_, PyAny>) -> PyResult<Self> {
        ClonerSpec::opt(n, copy_count(m)?)
            .map(Self)
            .map_err(to_py_err)
    }

    #[staticmethod]
    fn identity(n: u32) -> PyResult<Self> {
        ClonerSpec::identity(n).map(Self).map_err(to_py_err)
    }

    #[getter]
    fn n_in(&self) -> u32 {
        self.0.n_in
    }

    #[getter]
    fn m_out(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        count_to_py(py, self.0.m_out)
    }

    #[getter]
    fn var_x(&self) -> f64 {
        self.0.noise.var_x
    }

    #[getter]
    fn var_p(&self) -> f64 {
        self.0.noise.var_p
    }

    /// Exact noise variance as `"p/q"` (for squeezed cloners, the geometric
    /// mean of the two quadratures), or `None` if only floats are known.
    #[getter]
    fn exact_variance(&self) -> Option<String> {
        self.0.exact.map(|e| format_rational(e.variance))
    }

    /// Fidelity with a coherent input; isotropic cloners only.
    fn fidelity(&self) -> PyResult<f64> {
        cloner::fidelity_from_variance(self.0.noise)
            .map(|f| f.value())
            .map_err(to_py_err)
    }

    /// Whether `var_x · var_p` meets the N→M lower bound.
    fn respects_bound(&self) -> PyResult<bool> {
        self.0.respects_bound().map_err(to_py_err)
    }

    /// This cloner followed by `other`.
    fn then(&self, other: &PyCloner) -> PyResult<Self> {
        cloner::cascade(&self.0, &other.0)
            .map(Self)
            .map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Cloner(n_in={}, m_out={}, var_x={}, var_p={})",
            self.0.n_in, self.0.m_out, self.0.noise.var_x, self.0.noise.var_p
        )
    }
}

/// Sample statistics of simulated `x` and `p` outcomes.
#[pyclass(name = "VarianceReport", module = "cvclone", frozen, get_all)]
struct PyVarianceReport {
    mean_x: f64,
    mean_p: f64,
    var_x_hat: f64,
    var_p_hat: f64,
    stderr_x: f64,
    stderr_p: f64,
    stderr_mean_x: f64,
    stderr_mean_p: f64,
    samples: usize,
    seed: u64,
}

impl From<VarianceReport> for PyVarianceReport {
    fn from(r: VarianceReport) -> Self {
        Self {
            mean_x: r.mean_x,
            mean_p: r.mean_p,
            var_x_hat: r.var_x_hat,
            var_p_hat: r.var_p_hat,
            stderr_x: r.stderr_x,
            stderr_p: r.stderr_p,
            stderr_mean_x: r.stderr_mean_x,
            stderr_mean_p: r.stderr_mean_p,
            samples: r.samples,
            seed: r.seed,
        }
    }
}

#[pymethods]
impl PyVarianceReport {
    fn product(&self) -> f64 {
        self.var_x_hat * self.var_p_hat
    }

    fn __repr__(&self) -> String {
        format!(
            "VarianceReport(var_x_hat={}, var_p_hat={}, stderr_x={}, stderr_p={}, samples={}, seed={})",
            self.var_x_hat, self.var_p_hat, self.stderr_x, self.stderr_p, self.samples, self.seed
        )
    }
}

/// One named check: `(name, expected, observed, tolerance, passed)`.
type CheckRow = (String, f64, f64, f64, bool);

fn report_rows(report: VerificationReport) -> (bool, Vec<CheckRow>) {
    let rows = report
        .checks
        .into_iter()
        .map(|c| (c.name, c.expected, c.observed, c.tolerance, c.pass))
        .collect();
    (report.overall, rows)
}

#[pyfunction]
fn optimal_noise_variance(n: u32, m: &Bound<'_, PyAny>) -> PyResult<f64> {
    cloner::optimal_noise_variance(n, copy_count(m)?)
        .map(|c| c.var_x)
        .map_err(to_py_err)
}

#[pyfunction]
fn optimal_fidelity(n: u32, m: &Bound<'_, PyAny>) -> PyResult<f64> {
    cloner::optimal_fidelity(n, copy_count(m)?)
        .map(|f| f.value())
        .map_err(to_py_err)
}

/// `(variance, fidelity)` of the optimal N→M cloner as exact `"p/q"` strings.
#[pyfunction]
fn optimal_exact(n: u32, m: &Bound<'_, PyAny>) -> PyResult<(String, String)> {
    let m = copy_count(m)?;
    let v = cloner::optimal_variance_exact(n, m).map_err(to_py_err)?;
    let f = cloner::optimal_fidelity_exact(n, m).map_err(to_py_err)?;
    Ok((format_rational(v), format_rational(f)))
}

/// Fidelity of a coherent state blurred by Gaussian noise; `var_p` defaults
/// to `var_x`.
#[pyfunction]
#[pyo3(signature = (var_x, var_p=None))]
fn fidelity_from_variance(var_x: f64, var_p: Option<f64>) -> PyResult<f64> {
    let noise = NoiseCovariance::new(var_x, var_p.unwrap_or(var_x)).map_err(to_py_err)?;
    let mix = GaussianMixtureState::new(CoherentState::VACUUM, noise);
    cloner::mixture_fidelity(&mix)
        .map(|f| f.value())
        .map_err(to_py_err)
}

#[pyfunction]
fn cascade(first: &PyCloner, second: &PyCloner) -> PyResult<PyCloner> {
    first.then(second)
}

#[pyfunction]
fn squeezed_variant(n: u32, m: &Bound<'_, PyAny>, r: f64) -> PyResult<PyCloner> {
    cloner::squeezed_variant(n, copy_count(m)?, r)
        .map(PyCloner)
        .map_err(to_py_err)
}

#[pyfunction]
fn cloning_lower_bound(n: u32, m: &Bound<'_, PyAny>) -> PyResult<f64> {
    estimation::cloning_lower_bound(n, copy_count(m)?).map_err(to_py_err)
}

#[pyfunction]
fn symmetric_variance_bound(g_x: f64, g_p: f64) -> PyResult<f64> {
    let w = MeasurementWeights::new(g_x, g_p).map_err(to_py_err)?;
    estimation::symmetric_variance_bound(w).map_err(to_py_err)
}

#[pyfunction]
fn holevo_rhs(g_x: f64, g_p: f64, dx2: f64, dp2: f64) -> PyResult<f64> {
    let w = MeasurementWeights::new(g_x, g_p).map_err(to_py_err)?;
    estimation::holevo_rhs(w, dx2, dp2).map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (noise_var, samples, seed, alpha=Complex64::new(0.0, 0.0)))]
fn simulate_joint_measurement(
    py: Python<'_>,
    noise_var: f64,
    samples: usize,
    seed: u64,
    alpha: Complex64,
) -> PyResult<PyVarianceReport> {
    let center = CoherentState::new(amplitude(alpha));
    py.detach(|| estimation::simulate_joint_measurement(noise_var, center, samples, seed))
        .map(Into::into)
        .map_err(to_py_err)
}

#[pyfunction]
fn simulate_heterodyne_estimate(
    py: Python<'_>,
    alpha: Complex64,
    n_copies: u32,
    samples: usize,
    seed: u64,
) -> PyResult<PyVarianceReport> {
    py.detach(|| {
        estimation::simulate_heterodyne_estimate(amplitude(alpha), n_copies, samples, seed)
    })
    .map(Into::into)
    .map_err(to_py_err)
}

/// Fock-basis fidelity of the optimal N→M clone of `|α⟩` (or of the squeezed
/// state `|α, r⟩` under the matched squeezed cloner).
#[pyfunction]
#[pyo3(signature = (n, m, alpha=Complex64::new(0.0, 0.0), r=0.0, nodes=fock::DEFAULT_NODES, cutoff=None))]
fn oracle_fidelity(
    py: Python<'_>,
    n: u32,
    m: &Bound<'_, PyAny>,
    alpha: Complex64,
    r: f64,
    nodes: usize,
    cutoff: Option<usize>,
) -> PyResult<f64> {
    let m = copy_count(m)?;
    let config = FockConfig {
        nodes,
        cutoff,
        ..FockConfig::default()
    };
    py.detach(|| {
        let mix = if r == 0.0 {
            let noise = ClonerSpec::opt(n, m)?.noise;
            GaussianMixtureState::new(CoherentState::new(amplitude(alpha)), noise)
        } else {
            let noise = cloner::squeezed_variant(n, m, r)?.noise;
            GaussianMixtureState::new(SqueezedState::new(amplitude(alpha), r), noise)
        };
        verify::oracle_mixture_fidelity(&mix, &config)
    })
    .map_err(to_py_err)
}

/// `(mean_x, mean_p, var_x, var_p)` of a Gaussian mixture, computed from its
/// Fock-basis density matrix.
#[pyfunction]
#[pyo3(signature = (alpha, var_x, var_p, nodes=fock::DEFAULT_NODES))]
fn fock_moments(
    py: Python<'_>,
    alpha: Complex64,
    var_x: f64,
    var_p: f64,
    nodes: usize,
) -> PyResult<(f64, f64, f64, f64)> {
    py.detach(|| {
        let noise = NoiseCovariance::new(var_x, var_p)?;
        let mix = GaussianMixtureState::new(CoherentState::new(amplitude(alpha)), noise);
        let grid = QuadratureGrid::new(nodes)?;
        let rho = fock::mixture_density_matrix(
            &mix,
            fock::default_cutoff_for(&mix),
            &grid,
            fock::DEFAULT_TRUNCATION_TOLERANCE,
        )?;
        let q = fock::quadrature_moments(&rho);
        Ok((q.mean_x, q.mean_p, q.var_x, q.var_p))
    })
    .map_err(to_py_err)
}

/// Runs the Fock-oracle suite; returns `(passed, rows)`.
#[pyfunction]
#[pyo3(signature = (nodes=fock::DEFAULT_NODES, tolerance=None))]
fn verify_fock(
    py: Python<'_>,
    nodes: usize,
    tolerance: Option<f64>,
) -> PyResult<(bool, Vec<CheckRow>)> {
    let mut config = FockConfig {
        nodes,
        ..FockConfig::default()
    };
    if let Some(t) = tolerance {
        config = config.with_tolerance(t);
    }
    py.detach(|| verify::verify_fock(&config))
        .map(report_rows)
        .map_err(to_py_err)
}

/// Runs the Monte Carlo suite; `sigmas` is the allowed deviation in standard errors.
#[pyfunction]
#[pyo3(signature = (samples=1_000_000, seeds=vec![42, 7, 1001], sigmas=5.0))]
fn verify_mc(
    py: Python<'_>,
    samples: usize,
    seeds: Vec<u64>,
    sigmas: f64,
) -> PyResult<(bool, Vec<CheckRow>)> {
    let config = McConfig {
        samples,
        seeds,
        sigmas,
    };
    py.detach(|| verify::verify_mc(&config))
        .map(report_rows)
        .map_err(to_py_err)
}

#[pyfunction]
fn verify_bounds(py: Python<'_>) -> PyResult<(bool, Vec<CheckRow>)> {
    py.detach(|| verify::verify_bounds(&BoundsConfig::default()))
        .map(report_rows)
        .map_err(to_py_err)
}

/// Adds every class and function to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCloner>()?;
    m.add_class::<PyVarianceReport>()?;
    m.add_function(wrap_pyfunction!(optimal_noise_variance, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_exact, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity_from_variance, m)?)?;
    m.add_function(wrap_pyfunction!(cascade, m)?)?;
    m.add_function(wrap_pyfunction!(squeezed_variant, m)?)?;
    m.add_function(wrap_pyfunction!(cloning_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(symmetric_variance_bound, m)?)?;
    m.add_function(wrap_pyfunction!(holevo_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_joint_measurement, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_heterodyne_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(fock_moments, m)?)?;
    m.add_function(wrap_pyfunction!(verify_fock, m)?)?;
    m.add_function(wrap_pyfunction!(verify_mc, m)?)?;
    m.add_function(wrap_pyfunction!(verify_bounds, m)?)?;
    Ok(())
}

#[pymodule]
#[pyo3(name = "cvclone")]
fn cvclone_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
