//! Python bindings: a `Graph` class plus module functions for enumeration,
//! counting, the Miura map and the verifiers. Structured results come back
//! as plain dicts and lists in the same shape as the CLI's JSON.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use miura_core::io::{parse_graph, parse_numbering, write_graph, Numbering, NumberingFile};
use miura_core::numbering::{exponent_of, radii_of};
use miura_core::search::{self, EnumerationQuery};
use miura_core::verify::{self as checks, TheoremReport};
use miura_core::{builders, miura as core_miura, ExponentVector, Kind, MarkedSemiGraph, Prime};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn prime(p: u32) -> PyResult<Prime> {
    Prime::new(p).map_err(value_error)
}

fn kind(name: &str) -> PyResult<Kind> {
    match name {
        "strict" => Ok(Kind::Strict),
        "balanced" => Ok(Kind::Balanced),
        other => Err(PyValueError::new_err(format!(
            "kind must be 'strict' or 'balanced', not {other:?}"
        ))),
    }
}

fn query(p: u32, kind_name: &str, constraint: Option<Vec<i64>>) -> PyResult<EnumerationQuery> {
    let p = prime(p)?;
    let mut q = EnumerationQuery::new(p, kind(kind_name)?);
    if let Some(c) = constraint {
        q = q.with_constraint(ExponentVector::from_integers(p, &c));
    }
    Ok(q)
}

/// A marked trivalent semi-graph.
#[pyclass(name = "Graph", frozen)]
struct PyGraph {
    inner: MarkedSemiGraph,
    name: String,
}

#[pymethods]
impl PyGraph {
    /// Parses the graph JSON format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = parse_graph(text).map_err(value_error)?;
        Ok(PyGraph {
            inner,
            name: "graph".into(),
        })
    }

    /// A built-in graph such as `tripod`, `theta` or `cycle:3`.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        let inner = builders::by_name(name)
            .ok_or_else(|| PyValueError::new_err(format!("unknown graph {name:?}")))?;
        Ok(PyGraph {
            inner,
            name: name.to_string(),
        })
    }

    fn to_json(&self) -> String {
        write_graph(&self.inner)
    }

    fn validate(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.validate())
    }

    /// `(g, r)`; raises for invalid graphs.
    fn graph_type(&self) -> PyResult<(u32, u32)> {
        let t = self.inner.graph_type().map_err(value_error)?;
        Ok((t.g, t.r))
    }

    fn betti(&self) -> usize {
        self.inner.betti()
    }

    #[getter]
    fn vertices(&self) -> Vec<String> {
        self.inner.graph().vertices().to_vec()
    }

    #[getter]
    fn edges(&self) -> Vec<String> {
        self.inner
            .graph()
            .edges()
            .iter()
            .map(|e| e.id.clone())
            .collect()
    }

    #[getter]
    fn marking(&self) -> Vec<String> {
        let g = self.inner.graph();
        self.inner
            .marking()
            .iter()
            .map(|b| g.edges()[b.edge].id.clone())
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph({:?}, {} vertices, {} edges)",
            self.name,
            self.inner.graph().vertices().len(),
            self.inner.graph().edges().len()
        )
    }
}

#[pyfunction]
fn corpus() -> Vec<String> {
    builders::corpus()
        .into_iter()
        .map(|(name, _)| name)
        .collect()
}

#[pyfunction]
fn inv(p: u32, m: u32) -> PyResult<u32> {
    miura_core::numbering::inv(prime(p)?, m).map_err(value_error)
}

#[pyfunction]
fn mu_value(p: u32, m: u32) -> PyResult<u32> {
    core_miura::mu_value(prime(p)?, m).map_err(value_error)
}

/// Every numbering as a dict, with its exponent (strict) or radii (balanced).
#[pyfunction]
#[pyo3(signature = (graph, p, kind, constraint=None, limit=None))]
fn enumerate(
    py: Python<'_>,
    graph: &PyGraph,
    p: u32,
    kind: &str,
    constraint: Option<Vec<i64>>,
    limit: Option<usize>,
) -> PyResult<Py<PyAny>> {
    let mut q = query(p, kind, constraint)?;
    if let Some(n) = limit {
        q = q.with_limit(n);
    }
    let m = &graph.inner;
    let records: Vec<NumberingFile> = search::enumerate(m, &q)
        .map_err(value_error)?
        .iter()
        .map(|n| {
            let mut file = NumberingFile::from_numbering(m, n);
            match n {
                Numbering::Strict(a) => file.exponent = Some(exponent_of(m, a)),
                Numbering::Balanced(a) => file.radii = Some(radii_of(m, a)),
            }
            file
        })
        .collect();
    to_py(py, &records)
}

/// A census report dict. `method` is `backtracking` or `contraction`.
#[pyfunction]
#[pyo3(signature = (graph, p, kind, constraint=None, by_exponent=false, method="backtracking"))]
fn count(
    py: Python<'_>,
    graph: &PyGraph,
    p: u32,
    kind: &str,
    constraint: Option<Vec<i64>>,
    by_exponent: bool,
    method: &str,
) -> PyResult<Py<PyAny>> {
    let q = query(p, kind, constraint)?.counting();
    let report = match method {
        "backtracking" => search::count(&graph.inner, &q, by_exponent),
        "contraction" => search::count_by_contraction(&graph.inner, &q, by_exponent),
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    }
    .map_err(value_error)?;
    to_py(py, &report)
}

/// Applies the Miura map to a strict numbering given as a JSON string.
#[pyfunction]
#[pyo3(name = "miura_transform")]
fn apply_miura(py: Python<'_>, graph: &PyGraph, numbering: &str) -> PyResult<Py<PyAny>> {
    let m = &graph.inner;
    let file = parse_numbering(numbering).map_err(value_error)?;
    let Numbering::Strict(a) = file.to_numbering(m).map_err(value_error)? else {
        return Err(PyValueError::new_err(
            "the Miura map takes a strict numbering",
        ));
    };
    let image = core_miura::miura_transform(m, &a).map_err(value_error)?;
    let mut out = NumberingFile::from_edges(m, &image.numbering);
    out.radii = Some(image.radii);
    to_py(py, &out)
}

#[pyfunction]
fn check_pp004(py: Python<'_>, p: u32) -> PyResult<Py<PyAny>> {
    to_py(py, &core_miura::check_pp004(prime(p)?))
}

/// Runs one verifier: `pp004`, `p048`, `structure`, `miura` or `figure`.
#[pyfunction]
#[pyo3(signature = (subject, p=11, graph=None))]
fn verify(py: Python<'_>, subject: &str, p: u32, graph: Option<&PyGraph>) -> PyResult<Py<PyAny>> {
    let p = prime(p)?;
    let on_graph = |check: fn(&MarkedSemiGraph, Prime) -> miura_core::Result<TheoremReport>| -> PyResult<TheoremReport> {
        let g = graph.ok_or_else(|| PyValueError::new_err(format!("`{subject}` needs a graph")))?;
        Ok(check(&g.inner, p).map_err(value_error)?.on_graph(g.name.clone()))
    };
    let report = match subject {
        "pp004" => checks::verify_pp004(p),
        "figure" => checks::verify_figure(),
        "p048" => on_graph(checks::verify_p048)?,
        "structure" => on_graph(checks::verify_p048_structure)?,
        "miura" => on_graph(checks::verify_miura)?,
        other => return Err(PyValueError::new_err(format!("unknown verifier {other:?}"))),
    };
    to_py(py, &report)
}

#[pymodule]
fn miura(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(corpus, m)?)?;
    m.add_function(wrap_pyfunction!(inv, m)?)?;
    m.add_function(wrap_pyfunction!(mu_value, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(apply_miura, m)?)?;
    m.add_function(wrap_pyfunction!(check_pp004, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
