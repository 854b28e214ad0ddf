// Copyright 2026 The tpsense Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced by the simulation, analysis and I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown mode `{0}`")]
    UnknownMode(String),

    #[error("duplicate mode `{0}` in register")]
    DuplicateMode(String),

    #[error("a two-mode operation needs two distinct modes, got `{0}` twice")]
    SameMode(String),

    #[error("gate is not unitary: ‖U†U − I‖₂ = {deviation:e} exceeds {tolerance:e}")]
    NonUnitary { deviation: f64, tolerance: f64 },

    #[error("matrix is not symplectic: max |SΩSᵀ − Ω| = {deviation:e}")]
    NonSymplectic { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("Fock truncation too tight: population {population:e} at the n_max = {n_max} layer exceeds {limit:e}")]
    Truncation { population: f64, n_max: usize, limit: f64 },

    #[error("data span only {fringes:.3} fringes; at least {required} are needed")]
    TooFewFringes { fringes: f64, required: f64 },

    #[error("data undersampled: {points_per_period:.2} points per fitted period, need {required}")]
    Undersampled { points_per_period: f64, required: f64 },

    #[error("fringe fit did not converge: {0}")]
    FitDidNotConverge(String),

    #[error("phase uncertainty diverges: {0}")]
    DivergentUncertainty(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
