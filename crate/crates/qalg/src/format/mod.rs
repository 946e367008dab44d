//! Plain-text file formats read and written by the command line.
//!
//! Every format is line oriented, ignores blank lines and treats `#` as the
//! start of a comment. Floats are written in Rust's shortest round-trip
//! form, so `parse(write(x)) == x` holds bit for bit.

mod circuit;
mod fermion;
mod graph;
mod grid;
mod pauli;
mod table;

pub use circuit::{parse_circuit, write_circuit};
pub use fermion::{parse_fermion_hamiltonian, write_fermion_hamiltonian};
pub use graph::{parse_graph, write_graph};
pub use grid::{parse_grid, write_grid};
pub use pauli::{parse_pauli_sum, write_pauli_sum};
pub use table::{parse_truth_table, write_truth_table};

use thiserror::Error;

/// A parse or write failure; `line` is 1-based, 0 when no line applies.
#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        FormatError { line, message: message.into() }
    }
}

pub type FormatResult<T> = std::result::Result<T, FormatError>;

/// Non-empty lines with comments stripped, paired with 1-based numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

pub(crate) fn parse_float(line: usize, tok: &str) -> FormatResult<f64> {
    let v: f64 = tok.parse().map_err(|_| FormatError::new(line, format!("bad number {tok:?}")))?;
    if !v.is_finite() {
        return Err(FormatError::new(line, format!("non-finite number {tok:?}")));
    }
    Ok(v)
}

pub(crate) fn parse_index(line: usize, tok: &str) -> FormatResult<usize> {
    tok.parse().map_err(|_| FormatError::new(line, format!("bad index {tok:?}")))
}

pub(crate) fn core_err(line: usize, e: qalg_core::Error) -> FormatError {
    FormatError::new(line, e.to_string())
}
