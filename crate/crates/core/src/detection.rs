// Copyright 2026 The tpsense Authors
// SPDX-License-Identifier: Apache-2.0

//! Detector models: intensity, threshold single-photon detection with dark
//! counts, photon-number parity and two-detector coincidences.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::fock::{FockState, MixedState, ModeLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorKind {
    Intensity,
    ThresholdSpd,
    Parity,
    Coincidence,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorSpec {
    pub kind: DetectorKind,
    pub quantum_efficiency: f64,
    pub dark_counts_per_s: f64,
    pub gate_window_s: f64,
}

impl DetectorSpec {
    /// Ideal photodiode-like intensity readout.
    pub fn intensity() -> Self {
        Self {
            kind: DetectorKind::Intensity,
            quantum_efficiency: 1.0,
            dark_counts_per_s: 0.0,
            gate_window_s: 1.0,
        }
    }

    /// InGaAs SPD used for the single-photon fringes: 15 % efficiency, 360 dark counts/s.
    pub fn ingaas_spd(gate_window_s: f64) -> Self {
        Self {
            kind: DetectorKind::ThresholdSpd,
            quantum_efficiency: 0.15,
            dark_counts_per_s: 360.0,
            gate_window_s,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.quantum_efficiency) {
            return Err(invalid(
                "quantum_efficiency",
                format!("{} outside [0, 1]", self.quantum_efficiency),
            ));
        }
        if !(self.dark_counts_per_s >= 0.0 && self.dark_counts_per_s.is_finite()) {
            return Err(invalid("dark_counts_per_s", "must be a finite value ≥ 0"));
        }
        if !(self.gate_window_s > 0.0 && self.gate_window_s.is_finite()) {
            return Err(invalid("gate_window_s", "must be > 0"));
        }
        Ok(())
    }

    /// Probability of at least one dark count in the gate window.
    pub fn dark_probability(&self) -> f64 {
        -(-self.dark_counts_per_s * self.gate_window_s).exp_m1()
    }
}

/// Photon-number distribution of one mode.
fn number_distribution(rho: &MixedState, mode: &ModeLabel) -> Result<Vec<f64>> {
    let reg = rho.register();
    let m = reg.index_of(mode)?;
    let mut dist = vec![0.0; reg.local_dim()];
    for (i, p) in rho.populations().into_iter().enumerate() {
        dist[reg.occupation(i, m)] += p;
    }
    Ok(dist)
}

/// Mean photon number in `mode`, the quantity a linear intensity detector
/// measures (arbitrary units).
pub fn intensity(rho: &MixedState, mode: &ModeLabel) -> Result<f64> {
    Ok(rho.expectation_number(mode)?.max(0.0))
}

/// Click probability of a threshold detector:
/// `1 − (1 − p_dark) ⟨(1 − η)^n⟩`.
pub fn click_probability(rho: &MixedState, mode: &ModeLabel, spec: &DetectorSpec) -> Result<f64> {
    spec.validate()?;
    let no_photon_click: f64 = number_distribution(rho, mode)?
        .iter()
        .enumerate()
        .map(|(n, p)| p * (1.0 - spec.quantum_efficiency).powi(n as i32))
        .sum();
    Ok((1.0 - (1.0 - spec.dark_probability()) * no_photon_click).clamp(0.0, 1.0))
}

/// Click probability with the mean dark-count contribution removed.
pub fn dark_subtracted_click_probability(rho: &MixedState, mode: &ModeLabel, spec: &DetectorSpec) -> Result<f64> {
    Ok(click_probability(rho, mode, spec)? - spec.dark_probability())
}

/// `Tr[ρ (−1)^n]` for one mode.
pub fn parity_expectation(rho: &MixedState, mode: &ModeLabel) -> Result<f64> {
    Ok(number_distribution(rho, mode)?
        .iter()
        .enumerate()
        .map(|(n, p)| if n % 2 == 0 { *p } else { -*p })
        .sum())
}

/// Probability that both threshold detectors click in the same window.
pub fn coincidence_probability(
    rho: &MixedState,
    mode_a: &ModeLabel,
    mode_b: &ModeLabel,
    specs: (&DetectorSpec, &DetectorSpec),
) -> Result<f64> {
    let (sa, sb) = specs;
    sa.validate()?;
    sb.validate()?;
    let reg = rho.register();
    let (ma, mb) = (reg.index_of(mode_a)?, reg.index_of(mode_b)?);
    if ma == mb {
        return Err(crate::Error::SameMode(mode_a.to_string()));
    }
    let (qa, qb) = (1.0 - sa.quantum_efficiency, 1.0 - sb.quantum_efficiency);
    let (da, db) = (1.0 - sa.dark_probability(), 1.0 - sb.dark_probability());
    let (mut none_a, mut none_b, mut none_ab) = (0.0, 0.0, 0.0);
    for (i, p) in rho.populations().into_iter().enumerate() {
        let fa = qa.powi(reg.occupation(i, ma) as i32);
        let fb = qb.powi(reg.occupation(i, mb) as i32);
        none_a += p * fa;
        none_b += p * fb;
        none_ab += p * fa * fb;
    }
    let p = 1.0 - da * none_a - db * none_b + da * db * none_ab;
    Ok(p.clamp(0.0, 1.0))
}

/// Coincidence rate per second for gated detection.
pub fn coincidence_rate(
    rho: &MixedState,
    mode_a: &ModeLabel,
    mode_b: &ModeLabel,
    specs: (&DetectorSpec, &DetectorSpec),
) -> Result<f64> {
    let window = specs.0.gate_window_s.max(specs.1.gate_window_s);
    Ok(coincidence_probability(rho, mode_a, mode_b, specs)? / window)
}
