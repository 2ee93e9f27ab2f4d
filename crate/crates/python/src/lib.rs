//! Python bindings: analytic functions, criterion checks, the Loewner
//! chain with its quasiconformal extension, and the injectivity oracles.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use schlicht_core::chain::{coefficient_a1, ChainContext};
use schlicht_core::config::RunConfig;
use schlicht_core::criteria::{check_criterion, CheckOptions};
use schlicht_core::error::Error;
use schlicht_core::func::{AnalyticFunction, ClassTag};
use schlicht_core::grid::{Clustering, DiskGrid};
use schlicht_core::oracle;
use schlicht_core::params::{rhs_bounds, CriterionParams, Mode};
use schlicht_core::qc::{self, AnnulusSpec};
use schlicht_core::run;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn grid(nr: usize, ntheta: usize, rmax: f64, uniform: bool) -> PyResult<DiskGrid> {
    let clustering = if uniform {
        Clustering::Uniform
    } else {
        Clustering::ChebyshevTowardBoundary
    };
    DiskGrid::new(nr, ntheta, rmax, clustering).map_err(err)
}

fn params(
    alpha: Complex64,
    beta: Complex64,
    a: Complex64,
    b: Complex64,
    k: f64,
    quasiconformal: bool,
) -> CriterionParams {
    CriterionParams {
        alpha,
        beta,
        a,
        b,
        k,
        mode: if quasiconformal {
            Mode::Quasiconformal
        } else {
            Mode::Univalence
        },
    }
}

/// An analytic function on a disk containing the closed unit disk.
#[pyclass(module = "schlicht", skip_from_py_object)]
#[derive(Clone)]
struct Function {
    inner: AnalyticFunction,
}

#[pymethods]
impl Function {
    /// Catalog constructor: identity, koebe, constant_one, z_exp_cz,
    /// z_over_one_minus_cz, polynomial.
    #[staticmethod]
    #[pyo3(signature = (name, *params))]
    fn preset(name: &str, params: Vec<Complex64>) -> PyResult<Self> {
        Ok(Function {
            inner: AnalyticFunction::preset(name, &params).map_err(err)?,
        })
    }

    /// Exact polynomial from its coefficients (class tag inferred).
    #[staticmethod]
    fn polynomial(coeffs: Vec<Complex64>) -> PyResult<Self> {
        Ok(Function {
            inner: AnalyticFunction::preset("polynomial", &coeffs).map_err(err)?,
        })
    }

    /// Coefficient list with an explicit class tag:
    /// "classA" | "unitConstantTerm" | "general".
    #[staticmethod]
    fn from_coefficients(coeffs: Vec<Complex64>, class_tag: &str) -> PyResult<Self> {
        let tag = match class_tag {
            "classA" => ClassTag::ClassA,
            "unitConstantTerm" => ClassTag::UnitConstantTerm,
            "general" => ClassTag::General,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown class tag '{}'",
                    other
                )))
            }
        };
        Ok(Function {
            inner: AnalyticFunction::from_coefficients(coeffs, tag).map_err(err)?,
        })
    }

    fn __call__(&self, z: Complex64) -> PyResult<Complex64> {
        self.inner.eval(z).map_err(err)
    }

    /// (f(z), f'(z), f''(z)) from the exact representation.
    fn jet(&self, z: Complex64) -> PyResult<(Complex64, Complex64, Complex64)> {
        let j = self.inner.eval_jet(z).map_err(err)?;
        Ok((j.value, j.d1, j.d2))
    }

    /// f(z)/z with the removable singularity at the origin filled in.
    fn ratio_over_z(&self, z: Complex64) -> PyResult<Complex64> {
        self.inner.ratio_over_z(z).map_err(err)
    }

    fn derivative(&self) -> PyResult<Self> {
        Ok(Function {
            inner: self.inner.derivative().map_err(err)?,
        })
    }

    fn f_over_z(&self) -> PyResult<Self> {
        Ok(Function {
            inner: self.inner.quotient_by_z().map_err(err)?,
        })
    }

    fn coefficients(&self, n_max: usize) -> Vec<Complex64> {
        self.inner.coefficients(n_max)
    }

    #[getter]
    fn radius(&self) -> f64 {
        self.inner.radius()
    }

    #[getter]
    fn class_tag(&self) -> &'static str {
        self.inner.class_tag().name()
    }

    fn __repr__(&self) -> String {
        format!("Function({})", self.inner.label())
    }
}

/// Outcome of a grid criterion check.
#[pyclass(module = "schlicht")]
struct CheckResult {
    #[pyo3(get)]
    verdict: String,
    #[pyo3(get)]
    criterion: String,
    #[pyo3(get)]
    r1: Option<f64>,
    #[pyo3(get)]
    r2: Option<f64>,
    #[pyo3(get)]
    worst_margin1: Option<f64>,
    #[pyo3(get)]
    worst_point1: Option<Complex64>,
    #[pyo3(get)]
    worst_margin2: Option<f64>,
    #[pyo3(get)]
    worst_point2: Option<Complex64>,
    #[pyo3(get)]
    witness: Option<String>,
}

#[pymethods]
impl CheckResult {
    fn __repr__(&self) -> String {
        format!("CheckResult({}: {})", self.criterion, self.verdict)
    }
}

/// Run a preset criterion over a polar grid.
#[pyfunction]
#[pyo3(signature = (f, preset, g=None, alpha=Complex64::new(1.0, 0.0),
    beta=Complex64::new(0.0, 0.0), a=Complex64::new(1.0, 0.0),
    b=Complex64::new(1.0, 0.0), k=0.25, nr=128, ntheta=256, rmax=0.999,
    tol=1e-9, refine=0))]
#[allow(clippy::too_many_arguments)]
fn check(
    f: &Function,
    preset: &str,
    g: Option<&Function>,
    alpha: Complex64,
    beta: Complex64,
    a: Complex64,
    b: Complex64,
    k: f64,
    nr: usize,
    ntheta: usize,
    rmax: f64,
    tol: f64,
    refine: usize,
) -> PyResult<CheckResult> {
    let user = params(alpha, beta, a, b, k, false);
    let grid = grid(nr, ntheta, rmax, false)?;
    let opts = CheckOptions {
        tol,
        refine_rounds: refine,
        rhs_scale: 1.0,
    };
    let rep =
        check_criterion(&f.inner, g.map(|g| &g.inner), preset, &user, &grid, &opts).map_err(err)?;
    Ok(CheckResult {
        verdict: rep.verdict.name().into(),
        criterion: rep.criterion_id.clone(),
        r1: rep.bounds.map(|b| b.r1),
        r2: rep.bounds.map(|b| b.r2),
        worst_margin1: rep.field1.as_ref().map(|f| f.worst_margin),
        worst_point1: rep.field1.as_ref().map(|f| f.worst_point),
        worst_margin2: rep.field2.as_ref().map(|f| f.worst_margin),
        worst_point2: rep.field2.as_ref().map(|f| f.worst_point),
        witness: rep.witness.map(|w| w.to_string()),
    })
}

/// Names of the violated parameter constraints (empty = valid).
#[pyfunction]
#[pyo3(signature = (alpha, beta, a, b, k=0.0, quasiconformal=false))]
fn validate_params(
    alpha: Complex64,
    beta: Complex64,
    a: Complex64,
    b: Complex64,
    k: f64,
    quasiconformal: bool,
) -> Vec<String> {
    params(alpha, beta, a, b, k, quasiconformal)
        .violations()
        .iter()
        .map(|v| v.name().to_string())
        .collect()
}

/// (r1, r2, c): the two RHS bounds and the center shift.
#[pyfunction]
#[pyo3(signature = (a, b, k=0.0, quasiconformal=false))]
fn bounds(a: Complex64, b: Complex64, k: f64, quasiconformal: bool) -> (f64, f64, Complex64) {
    let p = params(
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        a,
        b,
        k,
        quasiconformal,
    );
    let b = rhs_bounds(&p);
    (b.r1, b.r2, b.c)
}

/// The Loewner chain for (f, g, alpha, beta, A, B) and its extension.
#[pyclass(module = "schlicht")]
struct Chain {
    ctx: ChainContext,
}

#[pymethods]
impl Chain {
    #[new]
    #[pyo3(signature = (f, g, alpha=Complex64::new(1.0, 0.0),
        beta=Complex64::new(0.0, 0.0), a=Complex64::new(1.0, 0.0),
        b=Complex64::new(1.0, 0.0), k=0.0))]
    fn new(
        f: &Function,
        g: &Function,
        alpha: Complex64,
        beta: Complex64,
        a: Complex64,
        b: Complex64,
        k: f64,
    ) -> PyResult<Self> {
        let p = params(alpha, beta, a, b, k, k > 0.0);
        let ctx = ChainContext::new(f.inner.clone(), g.inner.clone(), p, None).map_err(err)?;
        Ok(Chain { ctx })
    }

    fn phi2(&self, z: Complex64, t: f64) -> PyResult<Complex64> {
        self.ctx.phi2(z, t).map_err(err)
    }

    fn phi3(&self, z: Complex64, t: f64) -> PyResult<Complex64> {
        self.ctx.phi3(z, t).map_err(err)
    }

    /// L(z, t).
    fn value(&self, z: Complex64, t: f64) -> PyResult<Complex64> {
        self.ctx.chain_value(z, t).map_err(err)
    }

    fn a1(&self, t: f64) -> PyResult<Complex64> {
        coefficient_a1(self.ctx.params(), t).map_err(err)
    }

    fn phi(&self, z: Complex64, t: f64) -> PyResult<Complex64> {
        self.ctx.transition_phi(z, t).map_err(err)
    }

    /// (w(z,t), p(z,t)).
    fn transfer(&self, z: Complex64, t: f64) -> PyResult<(Complex64, Complex64)> {
        self.ctx.transfer_w(z, t).map_err(err)
    }

    /// The piecewise extension F(z).
    fn extend(&self, z: Complex64) -> PyResult<Complex64> {
        qc::extend_point(&self.ctx, z).map_err(err)
    }

    /// Central-difference dilatation estimate mu(z) off the seam.
    #[pyo3(signature = (z, h=1e-4))]
    fn beltrami(&self, z: Complex64, h: f64) -> PyResult<Complex64> {
        qc::beltrami_at(&self.ctx, z, h).map_err(err)
    }

    /// (sup |mu|, worst point, degenerate count, unreliable) on an annulus.
    #[pyo3(signature = (r_in=1.05, r_out=3.0, nr=64, ntheta=128, h=1e-4))]
    fn dilatation(
        &self,
        r_in: f64,
        r_out: f64,
        nr: usize,
        ntheta: usize,
        h: f64,
    ) -> PyResult<(f64, Complex64, usize, bool)> {
        let annulus = AnnulusSpec::new(r_in, r_out, nr, ntheta).map_err(err)?;
        let est = qc::dilatation_report(&self.ctx, &annulus, h, None).map_err(err)?;
        Ok((
            est.sup_abs_mu,
            est.worst_point,
            est.n_degenerate,
            est.unreliable,
        ))
    }

    /// Max jump of F across the seam circle.
    #[pyo3(signature = (ntheta=256, eps=1e-6))]
    fn seam_gap(&self, ntheta: usize, eps: f64) -> PyResult<f64> {
        qc::seam_continuity(&self.ctx, ntheta, eps)
            .map(|(max, _)| max)
            .map_err(err)
    }
}

/// Oracle outcome.
#[pyclass(module = "schlicht")]
struct OracleResult {
    #[pyo3(get)]
    method: String,
    #[pyo3(get)]
    verdict: String,
    #[pyo3(get)]
    witness_pair: Option<(Complex64, Complex64)>,
    #[pyo3(get)]
    witness_point: Option<Complex64>,
    #[pyo3(get)]
    witness_target: Option<Complex64>,
    #[pyo3(get)]
    witness_count: Option<i64>,
    #[pyo3(get)]
    samples_used: usize,
}

#[pymethods]
impl OracleResult {
    fn __repr__(&self) -> String {
        format!("OracleResult({}: {})", self.method, self.verdict)
    }
}

fn oracle_result(rep: oracle::OracleReport) -> OracleResult {
    let mut out = OracleResult {
        method: rep.method.name().into(),
        verdict: rep.verdict.name().into(),
        witness_pair: None,
        witness_point: None,
        witness_target: None,
        witness_count: None,
        samples_used: rep.samples_used,
    };
    match rep.witness {
        Some(oracle::Witness::Collision(z1, z2)) => out.witness_pair = Some((z1, z2)),
        Some(oracle::Witness::PreimageCount { target, count }) => {
            out.witness_target = Some(target);
            out.witness_count = Some(count);
        }
        Some(oracle::Witness::CriticalPoint(z)) => out.witness_point = Some(z),
        None => {}
    }
    out
}

/// Quadratic collision scan over a polar grid (at most 10^4 points).
#[pyfunction]
#[pyo3(signature = (f, nr=64, ntheta=128, rmax=0.95, uniform=true, tol=1e-9))]
fn pairwise_injectivity(
    f: &Function,
    nr: usize,
    ntheta: usize,
    rmax: f64,
    uniform: bool,
    tol: f64,
) -> PyResult<OracleResult> {
    let g = grid(nr, ntheta, rmax, uniform)?;
    oracle::pairwise_injectivity(&f.inner, &g, tol)
        .map(oracle_result)
        .map_err(err)
}

/// Preimage count of `target` in |z| < r, or None when inconclusive.
#[pyfunction]
#[pyo3(signature = (f, target, r=0.95, n=1024))]
fn argument_principle_count(
    f: &Function,
    target: Complex64,
    r: f64,
    n: usize,
) -> PyResult<Option<i64>> {
    oracle::argument_principle_count(&f.inner, target, r, n).map_err(err)
}

/// Critical-point scan with interior zero certificates.
#[pyfunction]
#[pyo3(signature = (f, nr=96, ntheta=96, rmax=0.999, screen_tol=0.1))]
fn local_univalence(
    f: &Function,
    nr: usize,
    ntheta: usize,
    rmax: f64,
    screen_tol: f64,
) -> PyResult<OracleResult> {
    let g = grid(nr, ntheta, rmax, false)?;
    oracle::local_univalence(&f.inner, &g, screen_tol)
        .map(oracle_result)
        .map_err(err)
}

/// Run the full pipeline from config text (same flat key = value format
/// as the CLI's --config files). Returns (exit_status, report_json)
/// without writing any files.
#[pyfunction]
fn run_from_config(text: &str) -> PyResult<(i32, String)> {
    let mut cfg = RunConfig::default();
    cfg.apply_file_text(text, "<config>").map_err(err)?;
    let out = run::run(&cfg).map_err(err)?;
    Ok((out.exit_status, out.report_text))
}

#[pyfunction]
fn preset_ids() -> Vec<&'static str> {
    schlicht_core::criteria::PRESET_IDS.to_vec()
}

#[pymodule]
fn schlicht(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Function>()?;
    m.add_class::<CheckResult>()?;
    m.add_class::<Chain>()?;
    m.add_class::<OracleResult>()?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(validate_params, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(pairwise_injectivity, m)?)?;
    m.add_function(wrap_pyfunction!(argument_principle_count, m)?)?;
    m.add_function(wrap_pyfunction!(local_univalence, m)?)?;
    m.add_function(wrap_pyfunction!(run_from_config, m)?)?;
    m.add_function(wrap_pyfunction!(preset_ids, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
