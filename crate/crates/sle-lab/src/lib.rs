//! Monte Carlo experiments, file formats and the command-line driver built on
//! [`sle_core`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod density;
pub mod experiments;
pub mod output;
pub mod report;
pub mod runner;

/// Errors surfaced by the lab.
#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error(transparent)]
    Core(#[from] sle_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Yaml(#[from] serde_yaml::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl LabError {
    pub fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        LabError::Invalid {
            field: field.into(),
            message: message.into(),
        }
    }
}
