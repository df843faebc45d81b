//! Python bindings. Exact values come back as `fractions.Fraction` and `int`.

use outfn_euler::asymptotics::{theorem_a_ratio, theorem_b_remainder, DEFAULT_PRECISION};
use outfn_euler::chi::{chi_table as build_table, route_consistency, Route};
use outfn_euler::error::Error;
use outfn_euler::graphs::{self, canonical_form, Character, EnumConfig};
use outfn_euler::verify::{self, Suite, VerifyConfig};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use std::fmt::Display;
use std::str::FromStr;

fn err(e: Error) -> PyErr {
    if e.is_resource_or_usage() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn fraction<'py>(py: Python<'py>, q: impl Display) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.to_string(),))
}

fn int<'py>(py: Python<'py>, z: impl Display) -> PyResult<Bound<'py, PyAny>> {
    py.import("builtins")?.getattr("int")?.call1((z.to_string(),))
}

fn route(name: &str) -> PyResult<Route> {
    match name {
        "lambert" => Ok(Route::Lambert),
        "implicit" => Ok(Route::Implicit),
        "laplace-lie" | "laplace_lie" => Ok(Route::LaplaceLie),
        _ => Err(PyValueError::new_err(format!("unknown route {name:?}"))),
    }
}

fn character(name: &str) -> PyResult<Character> {
    Character::from_str(name).map_err(err)
}

/// A graph in the half-edge model.
#[pyclass(name = "Graph", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: graphs::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(vertex_count: usize, vertex_of: Vec<usize>, involution: Vec<usize>) -> PyResult<Self> {
        Ok(PyGraph { inner: graphs::Graph::new(vertex_count, vertex_of, involution).map_err(err)? })
    }

    #[staticmethod]
    fn from_edges(vertex_count: usize, leaves: Vec<usize>, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGraph { inner: graphs::Graph::from_edges(vertex_count, &leaves, &edges).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: graphs::Graph::from_json(text).map_err(err)? })
    }

    #[staticmethod]
    fn rose(loops: usize) -> Self {
        PyGraph { inner: graphs::Graph::rose(loops) }
    }

    #[staticmethod]
    fn theta(edges: usize) -> Self {
        PyGraph { inner: graphs::Graph::theta(edges) }
    }

    #[staticmethod]
    fn star(leaves: usize) -> Self {
        PyGraph { inner: graphs::Graph::star(leaves) }
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn leaf_count(&self) -> usize {
        self.inner.leaf_count()
    }

    #[getter]
    fn loop_order(&self) -> i64 {
        self.inner.loop_order()
    }

    fn is_admissible(&self) -> bool {
        self.inner.is_admissible()
    }

    fn is_core(&self) -> bool {
        self.inner.is_core()
    }

    /// Order of the automorphism group.
    fn automorphisms<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        int(py, canonical_form(&self.inner).automorphisms)
    }

    /// Value of `tau`, `sigma`, `xi` or `unit`.
    fn character<'py>(&self, py: Python<'py>, name: &str) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, character(name)?.eval(&self.inner))
    }

    fn isomorphic(&self, other: &PyGraph) -> bool {
        canonical_form(&self.inner).key == canonical_form(&other.inner).key
    }

    fn __repr__(&self) -> String {
        format!("Graph({})", self.inner.to_json())
    }
}

type Row<'py> = (usize, Bound<'py, PyAny>, Bound<'py, PyAny>);

/// `[(n, ch_n, Ch_n)]` for `1 <= n <= max_n`.
#[pyfunction]
#[pyo3(signature = (max_n, route = "lambert"))]
fn chi_table<'py>(py: Python<'py>, max_n: usize, route: &str) -> PyResult<Vec<Row<'py>>> {
    let r = self::route(route)?;
    let t = py.detach(|| build_table(r, max_n)).map_err(err)?;
    (1..=max_n).map(|n| Ok((n, fraction(py, t.ch(n))?, fraction(py, t.ch_hat(n))?))).collect()
}

/// `chi(Out(F_n)) = ch_{n-1}`.
#[pyfunction]
fn euler_characteristic<'py>(py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
    if n < 2 {
        return Err(PyValueError::new_err("n must be at least 2"));
    }
    let t = py.detach(|| build_table(Route::Lambert, n - 1)).map_err(err)?;
    fraction(py, t.ch(n - 1))
}

#[pyfunction]
fn routes_agree(py: Python<'_>, max_n: usize) -> PyResult<bool> {
    Ok(py.detach(|| route_consistency(max_n)).map_err(err)?.agree)
}

/// Admissible classes with `(graph, |Aut|)`.
#[pyfunction]
#[pyo3(signature = (loop_order, leaves = 0, connected = true))]
fn enumerate<'py>(py: Python<'py>, loop_order: i64, leaves: usize, connected: bool) -> PyResult<Vec<(PyGraph, Bound<'py, PyAny>)>> {
    let classes = py
        .detach(|| graphs::enumerate_graphs(loop_order, leaves, connected, true, &EnumConfig::default()))
        .map_err(err)?;
    classes.into_iter().map(|c| Ok((PyGraph { inner: c.graph }, int(py, c.automorphisms)?))).collect()
}

/// `sum chi(G)/|Aut G|` over admissible classes of the given loop order.
#[pyfunction]
#[pyo3(signature = (loop_order, leaves = 0, character = "tau", connected = true))]
fn character_sum<'py>(py: Python<'py>, loop_order: i64, leaves: usize, character: &str, connected: bool) -> PyResult<Bound<'py, PyAny>> {
    let chi = self::character(character)?;
    let v = py
        .detach(|| graphs::character_sum(loop_order, leaves, &chi, connected, &EnumConfig::default()))
        .map_err(err)?;
    fraction(py, v)
}

/// JSON report of a verification suite.
#[pyfunction]
#[pyo3(signature = (suite = "all", depth = None, precision = DEFAULT_PRECISION))]
fn run_verify(py: Python<'_>, suite: &str, depth: Option<usize>, precision: u32) -> PyResult<String> {
    let s = Suite::from_str(suite).map_err(err)?;
    let cfg = VerifyConfig { depth, precision, enumeration: EnumConfig::default() };
    Ok(py.detach(|| verify::run(s, &cfg)).to_json())
}

#[pyfunction]
#[pyo3(signature = (n_list, precision = DEFAULT_PRECISION))]
fn theorem_a(py: Python<'_>, n_list: Vec<u64>, precision: u32) -> PyResult<Vec<(u64, f64)>> {
    let max = n_list.iter().copied().max().unwrap_or(2).max(2);
    let rows = py
        .detach(|| build_table(Route::Lambert, (max - 1) as usize).and_then(|t| theorem_a_ratio(&n_list, &t.ch, precision)))
        .map_err(err)?;
    Ok(rows.into_iter().map(|(n, v)| (n, v.to_f64())).collect())
}

#[pyfunction]
#[pyo3(signature = (n, terms, precision = DEFAULT_PRECISION))]
fn theorem_b(py: Python<'_>, n: u64, terms: usize, precision: u32) -> PyResult<f64> {
    let v = py
        .detach(|| build_table(Route::Lambert, terms.max(1)).and_then(|t| theorem_b_remainder(n, terms, &t.ch_hat, precision)))
        .map_err(err)?;
    Ok(v.value.to_f64())
}

#[pymodule]
fn outfn_euler_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(chi_table, m)?)?;
    m.add_function(wrap_pyfunction!(euler_characteristic, m)?)?;
    m.add_function(wrap_pyfunction!(routes_agree, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(character_sum, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_a, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_b, m)?)?;
    Ok(())
}
