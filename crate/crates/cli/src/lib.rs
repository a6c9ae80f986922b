//! File formats and command implementations for the `maxreg` binary.
//!
//! Automata are stored as JSON (see [`format`]), word corpora as text files
//! with one word spec per line, and automata can be exported to Graphviz.

pub mod commands;
pub mod corpus;
pub mod dot;
pub mod format;

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },

    #[error("{0}")]
    Format(String),

    #[error(transparent)]
    Core(#[from] maxreg_core::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn write_file(path: &std::path::Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
