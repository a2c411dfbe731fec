//! File formats and command-line driver for [`subduce_core`].
//!
//! Norms, surjections, solver settings and chart families are read from JSON;
//! results are written as JSON or CSV.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod figure;
pub mod format;

use std::fmt;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: malformed JSON at line {line}, column {column}: {message}")]
    Json { path: String, line: usize, column: usize, message: String },
    #[error(transparent)]
    Core(#[from] subduce_core::Error),
    #[error("writing output: {0}")]
    Output(String),
}

impl Error {
    fn output(e: impl fmt::Display) -> Self {
        Error::Output(e.to_string())
    }
}

/// Parses JSON text, reporting syntax and schema errors by line and column.
pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| {
        let message = e.to_string();
        let message = match message.rfind(" at line ") {
            Some(cut) => message[..cut].to_string(),
            None => message,
        };
        Error::Json { path: origin.to_string(), line: e.line(), column: e.column(), message }
    })
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: shown.clone(), source })?;
    parse_json(&text, &shown)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Error> {
    let mut s = serde_json::to_string_pretty(value).map_err(Error::output)?;
    s.push('\n');
    Ok(s)
}
