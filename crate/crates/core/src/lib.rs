// Copyright 2026 The tpsense Authors
// SPDX-License-Identifier: Apache-2.0

//! Simulation of two-photon phase sensing read out with single-photon
//! detection: photon-pair sources in a truncated Fock space and as Gaussian
//! states, lossy propagation, detector and lock-in models, and fringe
//! analysis.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod detection;
pub mod error;
pub mod experiment;
pub mod fock;
pub mod gaussian;
pub mod io;
pub mod lockin;
pub mod optics;

pub use error::{Error, Result};
