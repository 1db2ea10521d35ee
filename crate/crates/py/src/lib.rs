//! Python bindings: the batch `run` entry point plus a direct `sigma`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use inertia_core::algebra::{Field, PlanePoint};
use inertia_core::cli::{run_config, JobConfig};
use inertia_core::curve::CubicCurve;
use inertia_core::maps;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Runs a command on a JSON job configuration; returns `(exit_code, report_json)`.
#[pyfunction]
fn run(command: &str, config: &str) -> PyResult<(i32, String)> {
    let cfg: JobConfig = serde_json::from_str(config).map_err(value_error)?;
    let (code, report) = run_config(command, &cfg);
    Ok((code, serde_json::to_string(&report).map_err(value_error)?))
}

/// The three components of the cubic involution at `point`, as strings.
#[pyfunction]
#[pyo3(signature = (curve, point, field = "Q"))]
fn sigma(curve: &str, point: [String; 3], field: &str) -> PyResult<Vec<String>> {
    let field = Field::parse_spec(field).map_err(value_error)?;
    let c = CubicCurve::parse(field, curve).map_err(value_error)?;
    let p = PlanePoint::parse(field, &point).map_err(value_error)?;
    let s = maps::sigma(&c, &p).map_err(value_error)?;
    Ok(s.components().iter().map(|f| f.to_string()).collect())
}

#[pymodule]
fn inertia(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(sigma, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
