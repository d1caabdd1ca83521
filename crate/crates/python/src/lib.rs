use hurwitz_means::asymptotics::{self, EstimateReport as CoreReport};
use hurwitz_means::error::Error;
use hurwitz_means::harness::{self, checks};
use hurwitz_means::hurwitz::{self as hz, CellCoords as CoreCell, StripPoint as CoreStrip};
use hurwitz_means::lattice;
use hurwitz_means::meansq;
use hurwitz_means::numerics::{self, NumericPolicy};
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    let msg = format!("{}: {e}", e.kind());
    match e {
        Error::Domain { .. } | Error::InvalidInput(_) => PyValueError::new_err(msg),
        _ => PyRuntimeError::new_err(msg),
    }
}

fn policy(tol: f64) -> PyResult<NumericPolicy> {
    let p = NumericPolicy::with_tolerance(tol);
    p.validate().map_err(to_py)?;
    Ok(p)
}

#[pyclass(name = "StripPoint", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct StripPoint(CoreStrip);

#[pymethods]
impl StripPoint {
    #[new]
    fn new(sigma: f64, t: f64) -> PyResult<Self> {
        CoreStrip::new(sigma, t).map(StripPoint).map_err(to_py)
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.0.sigma
    }

    #[getter]
    fn t(&self) -> f64 {
        self.0.t
    }

    #[getter]
    fn s(&self) -> Complex64 {
        self.0.s()
    }

    fn __repr__(&self) -> String {
        format!("StripPoint(sigma={}, t={})", self.0.sigma, self.0.t)
    }
}

#[pyclass(name = "CellCoords", frozen)]
struct CellCoords(CoreCell);

#[pymethods]
impl CellCoords {
    #[new]
    fn new(t: f64, x: u64) -> PyResult<Self> {
        CoreCell::new(t, x).map(CellCoords).map_err(to_py)
    }

    #[getter]
    fn x(&self) -> u64 {
        self.0.x
    }

    #[getter]
    fn y(&self) -> f64 {
        self.0.y
    }

    #[getter]
    fn nearest(&self) -> i64 {
        self.0.nearest
    }

    #[getter]
    fn dist(&self) -> f64 {
        self.0.dist
    }

    #[getter]
    fn offset(&self) -> f64 {
        self.0.offset
    }

    fn in_exceptional_set(&self, eta: f64) -> bool {
        self.0.in_exceptional_set(eta)
    }

    fn __repr__(&self) -> String {
        format!("CellCoords(x={}, y={}, dist={})", self.0.x, self.0.y, self.0.dist)
    }
}

#[pyclass(name = "EstimateReport", frozen, get_all)]
struct EstimateReport {
    value: Complex64,
    predicted_error_scale: f64,
    terms_used: usize,
    branch_notes: String,
    /// None when the estimator does not look at `A(t, eta)`.
    in_a: Option<bool>,
}

impl From<CoreReport> for EstimateReport {
    fn from(r: CoreReport) -> Self {
        EstimateReport {
            value: r.value,
            predicted_error_scale: r.predicted_error_scale,
            terms_used: r.terms_used,
            branch_notes: r.branch_notes,
            in_a: r.exceptional.map(|e| e.in_a),
        }
    }
}

#[pymethods]
impl EstimateReport {
    fn __repr__(&self) -> String {
        format!(
            "EstimateReport(value={}, predicted_error_scale={:e}, terms_used={})",
            self.value, self.predicted_error_scale, self.terms_used
        )
    }
}

#[pyclass(name = "SweepRow", frozen, get_all)]
struct SweepRow {
    sigma: f64,
    t: f64,
    x: u64,
    y: f64,
    dist_y: f64,
    in_a: bool,
    oracle: f64,
    estimate: f64,
    residual: f64,
    predicted_scale: f64,
    terms_used: usize,
    error_flag: String,
}

impl From<harness::SweepRow> for SweepRow {
    fn from(r: harness::SweepRow) -> Self {
        SweepRow {
            sigma: r.sigma,
            t: r.t,
            x: r.x,
            y: r.y,
            dist_y: r.dist_y,
            in_a: r.in_a,
            oracle: r.oracle,
            estimate: r.estimate,
            residual: r.residual,
            predicted_scale: r.predicted_scale,
            terms_used: r.terms_used,
            error_flag: r.error_flag,
        }
    }
}

#[pyclass(name = "CheckOutcome", frozen, get_all)]
struct CheckOutcome {
    id: String,
    passed: bool,
    summary: String,
    details: Vec<String>,
    seconds: f64,
}

#[pymethods]
impl CheckOutcome {
    fn __repr__(&self) -> String {
        format!("{} {} {}", self.id, if self.passed { "PASS" } else { "FAIL" }, self.summary)
    }
}

#[pyfunction]
#[pyo3(signature = (s, alpha, tol = 1e-10))]
fn hurwitz_zeta(s: Complex64, alpha: f64, tol: f64) -> PyResult<Complex64> {
    hz::hurwitz_zeta(s, alpha, &policy(tol)?).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (s, alpha, x, tol = 1e-10))]
fn modified_hurwitz_zeta(s: Complex64, alpha: f64, x: u64, tol: f64) -> PyResult<Complex64> {
    hz::modified_hurwitz_zeta(s, alpha, x, &policy(tol)?).map_err(to_py)
}

#[pyfunction]
fn kernel_k(s: Complex64) -> PyResult<Complex64> {
    hz::kernel_K(s).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (eps, tol = 1e-10))]
fn fresnel_psi(eps: f64, tol: f64) -> PyResult<Complex64> {
    numerics::fresnel_psi(eps, &policy(tol)?).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (sp, x, tol = 1e-10))]
fn integral_ix(sp: StripPoint, x: u64, tol: f64) -> PyResult<f64> {
    Ok(meansq::integral_Ix(sp.0, x, &policy(tol)?).map_err(to_py)?.value.re)
}

#[pyfunction]
#[pyo3(signature = (u, v, x, tol = 1e-10))]
fn integral_jx(u: Complex64, v: Complex64, x: u64, tol: f64) -> PyResult<Complex64> {
    Ok(meansq::integral_Jx(u, v, x, &policy(tol)?).map_err(to_py)?.value)
}

#[pyfunction]
#[pyo3(signature = (sp, tol = 1e-10))]
fn large_interval_mean(py: Python<'_>, sp: StripPoint, tol: f64) -> PyResult<f64> {
    let p = policy(tol)?;
    let q = py.detach(|| meansq::large_interval_mean(sp.0, &p)).map_err(to_py)?;
    Ok(q.value.re)
}

#[pyfunction]
#[pyo3(signature = (sp, x, modes, tol = 1e-10))]
fn fourier_representation_ix(sp: StripPoint, x: u64, modes: u64, tol: f64) -> PyResult<f64> {
    meansq::fourier_representation_Ix(sp.0, x, modes, &policy(tol)?).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (u, v, x, n = 2, tol = 1e-10))]
fn theorem1_jx(u: Complex64, v: Complex64, x: u64, n: u32, tol: f64) -> PyResult<EstimateReport> {
    asymptotics::theorem1_Jx(u, v, x, n, &policy(tol)?).map(Into::into).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (u, v, x, tol = 1e-10))]
fn corollary1_jx(u: Complex64, v: Complex64, x: u64, tol: f64) -> PyResult<EstimateReport> {
    asymptotics::corollary1_Jx(u, v, x, &policy(tol)?).map(Into::into).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (sp, x, n = 2, tol = 1e-10))]
fn corollary2_ix(sp: StripPoint, x: u64, n: u32, tol: f64) -> PyResult<EstimateReport> {
    asymptotics::corollary2_Ix(sp.0, x, n, &policy(tol)?).map(Into::into).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (t, x, tol = 1e-10))]
fn corollary3_ix(t: f64, x: u64, tol: f64) -> PyResult<EstimateReport> {
    asymptotics::corollary3_Ix(t, x, &policy(tol)?).map(Into::into).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (sp, x, eta = 0.25, correction_factor = 0.25, tol = 1e-10))]
fn theorem2_ix(sp: StripPoint, x: u64, eta: f64, correction_factor: f64, tol: f64) -> PyResult<EstimateReport> {
    asymptotics::theorem2_Ix(sp.0, x, eta, correction_factor, &policy(tol)?)
        .map(Into::into)
        .map_err(to_py)
}

#[pyfunction]
fn theorem3_mean(sigma: f64, t: f64) -> PyResult<EstimateReport> {
    asymptotics::theorem3_mean(sigma, t).map(Into::into).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (t, a, tol = 1e-10))]
fn script_e(t: f64, a: f64, tol: f64) -> PyResult<Complex64> {
    asymptotics::script_E(t, a, &policy(tol)?).map_err(to_py)
}

#[pyfunction]
fn enumerate_a(t: f64, eta: f64) -> PyResult<Vec<u64>> {
    Ok(lattice::enumerate_A(t, eta).map_err(to_py)?.members)
}

#[pyfunction]
fn count_a_estimate(t: f64, eta: f64) -> PyResult<f64> {
    lattice::count_A_estimate(t, eta).map_err(to_py)
}

#[pyfunction]
fn saffari_density(delta: f64) -> PyResult<f64> {
    lattice::saffari_density(delta).map_err(to_py)
}

#[pyfunction]
fn count_frac_below(n: u64, delta: f64) -> u64 {
    lattice::count_frac_below(n, delta)
}

#[pyfunction]
fn hyperbola_double_sum(n: u64, sigma: f64) -> PyResult<f64> {
    lattice::hyperbola_double_sum(n, sigma).map_err(to_py)
}

/// `x_rule` is `"all"`, `"prop:<c>"` or a comma list of cells.
#[pyfunction]
#[pyo3(signature = (estimator, sigma, t_grid, x_rule, eta = 0.25, n_order = 2, correction_factor = 0.25, tol = 1e-10))]
#[allow(clippy::too_many_arguments)]
fn run_sweep(
    py: Python<'_>,
    estimator: &str,
    sigma: Vec<f64>,
    t_grid: Vec<f64>,
    x_rule: &str,
    eta: f64,
    n_order: u32,
    correction_factor: f64,
    tol: f64,
) -> PyResult<Vec<SweepRow>> {
    let mut spec = harness::SweepSpec::new(
        estimator.parse().map_err(to_py)?,
        sigma,
        t_grid,
        x_rule.parse().map_err(to_py)?,
    );
    spec.eta = eta;
    spec.n_order = n_order;
    spec.correction_factor = correction_factor;
    spec.policy = policy(tol)?;
    let rows = py.detach(|| harness::run_sweep(&spec)).map_err(to_py)?;
    Ok(rows.into_iter().map(Into::into).collect())
}

/// Runs one suite (`identities`, `estimators`, `lattice`, `all`).
#[pyfunction]
#[pyo3(signature = (suite = "all", envelope = 20.0))]
fn verify(py: Python<'_>, suite: &str, envelope: f64) -> PyResult<Vec<CheckOutcome>> {
    let suite: harness::Suite = suite.parse().map_err(to_py)?;
    let cfg = checks::CheckSettings { envelope, ..Default::default() };
    let out = py.detach(|| harness::run_suite(suite, &cfg));
    Ok(out
        .into_iter()
        .map(|o| CheckOutcome {
            id: o.id.to_string(),
            passed: o.pass,
            summary: o.summary,
            details: o.details,
            seconds: o.seconds,
        })
        .collect())
}

#[pymodule]
#[pyo3(name = "hurwitz_means")]
fn bindings(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<StripPoint>()?;
    m.add_class::<CellCoords>()?;
    m.add_class::<EstimateReport>()?;
    m.add_class::<SweepRow>()?;
    m.add_class::<CheckOutcome>()?;
    m.add_function(wrap_pyfunction!(hurwitz_zeta, m)?)?;
    m.add_function(wrap_pyfunction!(modified_hurwitz_zeta, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_k, m)?)?;
    m.add_function(wrap_pyfunction!(fresnel_psi, m)?)?;
    m.add_function(wrap_pyfunction!(integral_ix, m)?)?;
    m.add_function(wrap_pyfunction!(integral_jx, m)?)?;
    m.add_function(wrap_pyfunction!(large_interval_mean, m)?)?;
    m.add_function(wrap_pyfunction!(fourier_representation_ix, m)?)?;
    m.add_function(wrap_pyfunction!(theorem1_jx, m)?)?;
    m.add_function(wrap_pyfunction!(corollary1_jx, m)?)?;
    m.add_function(wrap_pyfunction!(corollary2_ix, m)?)?;
    m.add_function(wrap_pyfunction!(corollary3_ix, m)?)?;
    m.add_function(wrap_pyfunction!(theorem2_ix, m)?)?;
    m.add_function(wrap_pyfunction!(theorem3_mean, m)?)?;
    m.add_function(wrap_pyfunction!(script_e, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_a, m)?)?;
    m.add_function(wrap_pyfunction!(count_a_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(saffari_density, m)?)?;
    m.add_function(wrap_pyfunction!(count_frac_below, m)?)?;
    m.add_function(wrap_pyfunction!(hyperbola_double_sum, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
