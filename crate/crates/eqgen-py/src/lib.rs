//! Python bindings: question generation, the truth-table oracle and the law
//! table, exposed as plain functions over strings.
//!
//! Build with `cargo build -p eqgen-py`, then import the produced cdylib as
//! `eqgen_py` (see python/smoke_test.py for a loader).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use eqgen::config::RunConfig;
use eqgen::logic::{self, Syntax};
use eqgen::question::generate_record;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// MD5 digest of the UTF-8 bytes of `info`, as 32 lowercase hex characters.
#[pyfunction]
fn md5_hex(info: &str) -> String {
    eqgen::seed::md5_hex(info.as_bytes())
}

/// True iff the two expressions agree on every truth assignment.
///
/// Accepts both the Unicode spelling (¬ ∧ ∨ ⊃ ↔) and the ASCII spelling
/// (! & | -> <->).
#[pyfunction]
fn equivalent(lhs: &str, rhs: &str) -> PyResult<bool> {
    let lhs = logic::parse(lhs).map_err(value_error)?;
    let rhs = logic::parse(rhs).map_err(value_error)?;
    logic::equivalent(&lhs, &rhs).map_err(value_error)
}

/// Parses an expression and re-renders it with minimal parentheses in the
/// requested syntax: "unicode", "ascii" or "latex".
#[pyfunction]
#[pyo3(signature = (text, syntax = "unicode"))]
fn canonical(text: &str, syntax: &str) -> PyResult<String> {
    let prop = logic::parse(text).map_err(value_error)?;
    let syntax = match syntax {
        "unicode" => Syntax::Unicode,
        "ascii" => Syntax::Ascii,
        "latex" => Syntax::Latex,
        other => return Err(value_error(format!("unknown syntax `{other}`"))),
    };
    Ok(logic::render(&prop, syntax))
}

/// Generates the question record for one student key and returns it as a
/// JSON string (the same record format the qgen CLI emits).
///
/// `config_text` takes the flat `key = value` config-file format; `salt`
/// overrides any salt configured there.
#[pyfunction]
#[pyo3(signature = (key, salt = None, config_text = None))]
fn generate_question(key: &str, salt: Option<&str>, config_text: Option<&str>) -> PyResult<String> {
    let mut config = match config_text {
        Some(text) => RunConfig::parse(text).map_err(value_error)?,
        None => RunConfig::default(),
    };
    if let Some(salt) = salt {
        config.salt = Some(salt.to_string());
    }
    let record = generate_record(key, &config).map_err(value_error)?;
    Ok(record.to_json())
}

/// The law table as (id, name, category, schema) tuples.
#[pyfunction]
fn law_table() -> Vec<(usize, String, String, String)> {
    eqgen::laws::law_table()
        .iter()
        .map(|rule| {
            (
                rule.id,
                rule.name().to_string(),
                rule.category().to_string(),
                rule.schema(Syntax::Unicode),
            )
        })
        .collect()
}

#[pymodule]
fn eqgen_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(md5_hex, m)?)?;
    m.add_function(wrap_pyfunction!(equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(canonical, m)?)?;
    m.add_function(wrap_pyfunction!(generate_question, m)?)?;
    m.add_function(wrap_pyfunction!(law_table, m)?)?;
    Ok(())
}
