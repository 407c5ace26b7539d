//! Python bindings. Rationals cross the boundary as strings such as `"3/2"`;
//! inputs may also be `int` or `fractions.Fraction`.

use gasproof::conjecture::MeshParams;
use gasproof::driver::{self, LasVerdict, ParamRange, PipelineResult, ProveOptions, WebbookReport};
use gasproof::poly::rational::{fmt_rational, parse_rational};
use gasproof::poly::{parse_poly, MultiPoly};
use gasproof::positivity::{self, ProofCertificate, ProverOptions, Verdict, DEFAULT_DEPTH};
use gasproof::recurrence::{self, Equilibrium, RecurrenceSpec};
use gasproof::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(gasproof, UnsupportedError, PyValueError, "Input outside the supported class.");

fn unsupported(e: impl std::fmt::Display) -> PyErr {
    UnsupportedError::new_err(e.to_string())
}

fn rational(v: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    let text = v.str()?;
    parse_rational(&text.to_cow()?).map_err(unsupported)
}

fn rationals(v: &[Bound<'_, PyAny>]) -> PyResult<Vec<BigRational>> {
    v.iter().map(rational).collect()
}

fn strings(v: &[BigRational]) -> Vec<String> {
    v.iter().map(fmt_rational).collect()
}

fn prover(depth: u32, max_nodes: Option<usize>) -> ProverOptions {
    let d = ProverOptions::default();
    ProverOptions {
        depth_limit: depth,
        max_nodes: max_nodes.unwrap_or(d.max_nodes),
        ..d
    }
}

/// Sparse polynomial with exact rational coefficients.
#[pyclass(name = "Poly", module = "gasproof", frozen)]
pub struct PyPoly(MultiPoly);

#[pymethods]
impl PyPoly {
    #[new]
    #[pyo3(signature = (text, nvars=None))]
    fn new(text: &str, nvars: Option<usize>) -> PyResult<Self> {
        parse_poly(text, nvars).map(PyPoly).map_err(unsupported)
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.0.nvars()
    }

    #[getter]
    fn total_degree(&self) -> u32 {
        self.0.total_degree()
    }

    fn evaluate(&self, point: Vec<Bound<'_, PyAny>>) -> PyResult<String> {
        let x = rationals(&point)?;
        self.0.evaluate(&x).map(|v| fmt_rational(&v)).map_err(unsupported)
    }

    fn digest(&self) -> String {
        self.0.digest()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}')", self.0)
    }
}

#[pyclass(name = "Equilibrium", module = "gasproof", frozen)]
pub struct PyEquilibrium(Equilibrium);

#[pymethods]
impl PyEquilibrium {
    #[getter]
    fn value(&self) -> String {
        fmt_rational(&self.0.value)
    }

    #[getter]
    fn vector(&self) -> Vec<String> {
        strings(&self.0.vector)
    }

    /// `"closed"` or `"open"`.
    #[getter]
    fn domain(&self) -> String {
        format!("{:?}", self.0.domain).to_lowercase()
    }

    fn __repr__(&self) -> String {
        format!("Equilibrium({}, {})", self.value(), self.domain())
    }
}

#[pyclass(name = "LasVerdict", module = "gasproof", frozen)]
pub struct PyLasVerdict(LasVerdict);

#[pymethods]
impl PyLasVerdict {
    /// `"las"`, `"unstable"` or `"inconclusive"`.
    #[getter]
    fn outcome(&self) -> String {
        format!("{:?}", self.0.outcome).to_lowercase()
    }

    #[getter]
    fn partials(&self) -> Vec<String> {
        strings(&self.0.partials)
    }

    #[getter]
    fn charpoly(&self) -> String {
        self.0.charpoly.to_string()
    }

    #[getter]
    fn table(&self) -> Vec<String> {
        self.0.table.iter().map(|p| p.to_string()).collect()
    }
}

/// Rational recurrence `x_{n+1} = R(x_n, ..., x_{n-k})`.
#[pyclass(name = "Recurrence", module = "gasproof", frozen)]
pub struct PyRecurrence(RecurrenceSpec);

#[pymethods]
impl PyRecurrence {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        recurrence::parse_rde(text).map(PyRecurrence).map_err(unsupported)
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter]
    fn domain(&self) -> String {
        format!("{:?}", self.0.domain()).to_lowercase()
    }

    fn equilibrium(&self) -> PyResult<PyEquilibrium> {
        recurrence::find_equilibrium(&self.0).map(PyEquilibrium).map_err(unsupported)
    }

    fn contraction_poly(&self, k: u32) -> PyResult<PyPoly> {
        let eq = recurrence::find_equilibrium(&self.0).map_err(unsupported)?;
        recurrence::build_contraction_poly(&self.0, &eq, k).map(PyPoly).map_err(unsupported)
    }

    fn las_check(&self) -> PyResult<PyLasVerdict> {
        let eq = recurrence::find_equilibrium(&self.0).map_err(unsupported)?;
        Ok(PyLasVerdict(driver::las_check(&self.0, &eq)))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(name = "Certificate", module = "gasproof", frozen)]
pub struct PyCertificate(ProofCertificate);

#[pymethods]
impl PyCertificate {
    /// `"proven"`, `"disproven"`, `"not_strict"` or `"fail"`.
    #[getter]
    fn verdict(&self) -> &'static str {
        match self.0.verdict {
            Verdict::Proven => "proven",
            Verdict::Disproven { .. } => "disproven",
            Verdict::NotStrict { .. } => "not_strict",
            Verdict::Fail { .. } => "fail",
        }
    }

    #[getter]
    fn witness(&self) -> Option<Vec<String>> {
        match &self.0.verdict {
            Verdict::Disproven { witness, .. } | Verdict::NotStrict { witness, .. } => Some(strings(witness)),
            _ => None,
        }
    }

    #[getter]
    fn reason(&self) -> Option<String> {
        match &self.0.verdict {
            Verdict::NotStrict { reason, .. } | Verdict::Fail { reason } => Some(reason.clone()),
            _ => None,
        }
    }

    #[getter]
    fn nodes(&self) -> usize {
        self.0.tree.len()
    }

    #[getter]
    fn max_depth(&self) -> u32 {
        self.0.max_depth()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        ProofCertificate::from_json(text).map(PyCertificate).map_err(unsupported)
    }

    /// Re-checks every node; raises `ValueError` on the first mismatch.
    fn replay(&self, py: Python<'_>) -> PyResult<()> {
        py.detach(|| self.0.replay()).map_err(|e| PyValueError::new_err(e.to_string()))
    }
}

#[pyclass(name = "PipelineResult", module = "gasproof", frozen)]
pub struct PyPipelineResult(PipelineResult);

#[pymethods]
impl PyPipelineResult {
    /// `"true"`, `"false"` or `"FAIL"`.
    #[getter]
    fn verdict(&self) -> String {
        self.0.verdict.to_string()
    }

    #[getter]
    fn exit_code(&self) -> i32 {
        self.0.verdict.exit_code()
    }

    #[getter]
    fn k(&self) -> Option<u32> {
        self.0.k
    }

    #[getter]
    fn reason(&self) -> Option<String> {
        self.0.reason.clone()
    }

    #[getter]
    fn equilibrium(&self) -> PyEquilibrium {
        PyEquilibrium(self.0.equilibrium.clone())
    }

    #[getter]
    fn las(&self) -> Option<PyLasVerdict> {
        self.0.las.clone().map(PyLasVerdict)
    }

    #[getter]
    fn certificate(&self) -> Option<PyCertificate> {
        self.0.certificate.clone().map(PyCertificate)
    }

    /// `(K, outcome)` for each exponent tried.
    #[getter]
    fn attempts(&self) -> Vec<(u32, String)> {
        self.0.attempts.iter().map(|a| (a.k, a.outcome.clone())).collect()
    }

    /// `(zero_vars, verdict)` for each boundary face checked.
    #[getter]
    fn faces(&self) -> Vec<(Vec<usize>, String)> {
        self.0.faces.iter().map(|f| (f.zero_vars.clone(), f.verdict.to_string())).collect()
    }

    fn __repr__(&self) -> String {
        format!("PipelineResult(verdict={}, k={:?})", self.0.verdict, self.0.k)
    }
}

#[pyclass(name = "WebbookReport", module = "gasproof", frozen)]
pub struct PyWebbookReport(WebbookReport);

#[pymethods]
impl PyWebbookReport {
    #[getter]
    fn skipped(&self) -> usize {
        self.0.skipped.len()
    }

    /// One dict per sample: `params`, `equilibrium`, `k`, `verdict`, `reason`.
    fn rows<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.0
            .rows
            .iter()
            .map(|r| {
                let d = PyDict::new(py);
                let params = PyDict::new(py);
                for (name, v) in &r.params {
                    params.set_item(name, fmt_rational(v))?;
                }
                d.set_item("params", params)?;
                d.set_item("equilibrium", r.equilibrium.as_ref().map(fmt_rational))?;
                d.set_item("k", r.k)?;
                d.set_item("verdict", &r.verdict)?;
                d.set_item("reason", &r.reason)?;
                Ok(d)
            })
            .collect()
    }

    fn table(&self) -> String {
        self.0.to_table()
    }
}

/// Decides strict positivity of `poly` on the orthant split at `xbar`.
#[pyfunction]
#[pyo3(signature = (poly, xbar, depth=DEFAULT_DEPTH, max_nodes=None))]
fn prove_nonneg(
    py: Python<'_>,
    poly: &PyPoly,
    xbar: &Bound<'_, PyAny>,
    depth: u32,
    max_nodes: Option<usize>,
) -> PyResult<PyCertificate> {
    let xbar = rational(xbar)?;
    let opts = prover(depth, max_nodes);
    let p = &poly.0;
    Ok(PyCertificate(py.detach(|| positivity::prove_nonneg_with(p, &xbar, &opts))))
}

/// Checks one contraction exponent.
#[pyfunction]
#[pyo3(signature = (rde, k, depth=DEFAULT_DEPTH))]
fn prove_k(py: Python<'_>, rde: &str, k: u32, depth: u32) -> PyResult<PyPipelineResult> {
    let spec = recurrence::parse_rde(rde).map_err(unsupported)?;
    let opts = prover(depth, None);
    py.detach(|| driver::prove_k(&spec, k, &opts))
        .map(PyPipelineResult)
        .map_err(unsupported)
}

/// Searches for a contraction exponent up to `max_k` and proves it.
#[pyfunction]
#[pyo3(signature = (rde, max_k=10, depth=DEFAULT_DEPTH, prove_each_k=false, eps="1/10", mesh_n=100, restarts=200, seed=0))]
#[allow(clippy::too_many_arguments)]
fn prove(
    py: Python<'_>,
    rde: &str,
    max_k: u32,
    depth: u32,
    prove_each_k: bool,
    eps: &str,
    mesh_n: u32,
    restarts: usize,
    seed: u64,
) -> PyResult<PyPipelineResult> {
    let spec = recurrence::parse_rde(rde).map_err(unsupported)?;
    let opts = ProveOptions {
        max_k,
        mesh: MeshParams {
            eps: parse_rational(eps).map_err(unsupported)?,
            n: mesh_n,
            restarts,
            max_k,
            seed,
        },
        prover: prover(depth, None),
        prove_each_k,
    };
    py.detach(|| driver::prove(&spec, &opts))
        .map(PyPipelineResult)
        .map_err(unsupported)
}

/// Runs `prove` on `count` seeded samples of a parametrized template.
/// `ranges` entries read `NAME=LO..HI`.
#[pyfunction]
#[pyo3(signature = (template, ranges, count, seed, max_k=10, depth=DEFAULT_DEPTH))]
fn webbook(
    py: Python<'_>,
    template: &str,
    ranges: Vec<String>,
    count: usize,
    seed: u64,
    max_k: u32,
    depth: u32,
) -> PyResult<PyWebbookReport> {
    let ranges = ranges
        .iter()
        .map(|r| ParamRange::parse(r))
        .collect::<Result<Vec<_>, _>>()
        .map_err(unsupported)?;
    let d = ProveOptions::default();
    let opts = ProveOptions {
        max_k,
        mesh: MeshParams { max_k, ..d.mesh },
        prover: prover(depth, None),
        ..d
    };
    py.detach(|| driver::webbook(template, &ranges, count, seed, &opts))
        .map(PyWebbookReport)
        .map_err(unsupported)
}

#[pymodule(name = "gasproof")]
fn gasproof_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

/// Adds every class and function to `m`; lets tests build the module
/// without importing the shared library.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("UnsupportedError", m.py().get_type::<UnsupportedError>())?;
    m.add_class::<PyPoly>()?;
    m.add_class::<PyEquilibrium>()?;
    m.add_class::<PyLasVerdict>()?;
    m.add_class::<PyRecurrence>()?;
    m.add_class::<PyCertificate>()?;
    m.add_class::<PyPipelineResult>()?;
    m.add_class::<PyWebbookReport>()?;
    m.add_function(wrap_pyfunction!(prove_nonneg, m)?)?;
    m.add_function(wrap_pyfunction!(prove_k, m)?)?;
    m.add_function(wrap_pyfunction!(prove, m)?)?;
    m.add_function(wrap_pyfunction!(webbook, m)?)?;
    Ok(())
}
