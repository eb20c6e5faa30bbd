//! Instance and solution file formats.

mod col;
mod dimacs;
mod facts;
mod solution;

pub use col::parse_col_dat;
pub use dimacs::{parse_dimacs_cnf, write_dimacs_cnf, write_reconfig_graph, write_var_map};
pub use facts::{parse_facts, write_facts};
pub use solution::{parse_solution, write_solution, ParsedSolution};

use reconf_core::model::ModelError;
use thiserror::Error;

/// A diagnostic from one of the readers. `line` is 1-based; 0 means the
/// problem is not tied to a single line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn model(line: usize, err: ModelError) -> Self {
        ParseError::new(line, err.to_string())
    }
}

/// Splits on `\n`, dropping a trailing `\r`, and numbers lines from 1.
pub(crate) fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
}
