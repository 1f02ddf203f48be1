// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error(
        "truncation leakage at t = {time_us:.4} us: {population:.3e} of the population \
         occupies the top {levels} cavity levels"
    )]
    TruncationLeakage {
        time_us: f64,
        population: f64,
        levels: usize,
    },

    #[error("numerical failure in {stage}: {message}")]
    Numerical { stage: String, message: String },

    #[error("configuration invalid: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn numerical(stage: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Numerical {
            stage: stage.into(),
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
