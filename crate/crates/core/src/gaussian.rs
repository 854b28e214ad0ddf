// Copyright 2026 The tpsense Authors
// SPDX-License-Identifier: Apache-2.0

//! Covariance-matrix simulation of the same source chain at arbitrary gain.
//!
//! Conventions: ħ = 1, quadratures ordered `(x₁, p₁, x₂, p₂, …)` with
//! `a = (x + ip)/√2`, so the vacuum covariance is `I/2` and the uncertainty
//! relation reads `V + iΩ/2 ⪰ 0` with `Ω = ⊕ [[0, 1], [−1, 0]]`.
//! Symplectic maps act in the Heisenberg sense: `r → S r`, `V → S V Sᵀ`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::detection::DetectorKind;
use crate::error::{invalid, Error, Result};
use crate::experiment::{DatasetMeta, ExperimentConfig, FringeDataset, SetupModes, XUnit};
use crate::fock::ModeLabel;

pub const SYMPLECTIC_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct GaussianState {
    modes: Vec<ModeLabel>,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

/// Symplectic form for `n_modes` modes.
pub fn omega(n_modes: usize) -> DMatrix<f64> {
    let mut o = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        o[(2 * k, 2 * k + 1)] = 1.0;
        o[(2 * k + 1, 2 * k)] = -1.0;
    }
    o
}

fn rotation(phi: f64) -> DMatrix<f64> {
    let (s, c) = phi.sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
}

/// Phase shift `a → a e^{iφ}`.
pub fn phase_rotation(phi: f64) -> DMatrix<f64> {
    rotation(phi)
}

/// Two-mode squeezer `exp[r (e^{iψ} a†b† − h.c.)]`.
pub fn two_mode_squeezing(r: f64, pump_phase: f64) -> DMatrix<f64> {
    let (ch, sh) = (r.cosh(), r.sinh());
    let (s, c) = pump_phase.sin_cos();
    let m = [[c, s], [s, -c]];
    DMatrix::from_fn(4, 4, |i, j| {
        let (bi, bj) = (i / 2, j / 2);
        if bi == bj {
            if i == j {
                ch
            } else {
                0.0
            }
        } else {
            sh * m[i % 2][j % 2]
        }
    })
}

/// Beam splitter with the same convention as the Fock engine:
/// `a → a cos θ − e^{−iϕ} b sin θ`, `b → b cos θ + e^{iϕ} a sin θ`.
pub fn beam_splitter(mixing_angle: f64, phase: f64) -> DMatrix<f64> {
    let (s, c) = mixing_angle.sin_cos();
    let rot = rotation(phase);
    let mut m = DMatrix::zeros(4, 4);
    for i in 0..2 {
        m[(i, i)] = c;
        m[(i + 2, i + 2)] = c;
        for j in 0..2 {
            m[(i, j + 2)] = -s * rot[(j, i)];
            m[(i + 2, j)] = s * rot[(i, j)];
        }
    }
    m
}

/// Max-norm deviation of `S Ω Sᵀ` from `Ω`.
pub fn symplectic_deviation(s: &DMatrix<f64>) -> f64 {
    let n = s.nrows() / 2;
    let o = omega(n);
    (s * &o * s.transpose() - o).amax()
}

impl GaussianState {
    pub fn vacuum(modes: Vec<ModeLabel>) -> Result<Self> {
        if modes.is_empty() {
            return Err(invalid("modes", "at least one mode is required"));
        }
        for (i, l) in modes.iter().enumerate() {
            if modes[..i].contains(l) {
                return Err(Error::DuplicateMode(l.to_string()));
            }
        }
        let n = 2 * modes.len();
        Ok(Self {
            modes,
            mean: DVector::zeros(n),
            cov: DMatrix::identity(n, n) * 0.5,
        })
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn index_of(&self, mode: &ModeLabel) -> Result<usize> {
        self.modes
            .iter()
            .position(|l| l == mode)
            .ok_or_else(|| Error::UnknownMode(mode.to_string()))
    }

    /// Apply a `2k × 2k` symplectic matrix to the `k` target modes.
    pub fn apply_symplectic(&self, s: &DMatrix<f64>, targets: &[ModeLabel]) -> Result<Self> {
        let k = targets.len();
        if s.nrows() != 2 * k || s.ncols() != 2 * k {
            return Err(Error::DimensionMismatch {
                expected: 2 * k,
                actual: s.nrows(),
            });
        }
        let deviation = symplectic_deviation(s);
        if !(deviation <= SYMPLECTIC_TOLERANCE) {
            return Err(Error::NonSymplectic { deviation });
        }
        let idx = targets.iter().map(|t| self.index_of(t)).collect::<Result<Vec<_>>>()?;
        for (i, m) in idx.iter().enumerate() {
            if idx[..i].contains(m) {
                return Err(Error::SameMode(targets[i].to_string()));
            }
        }
        let n = self.cov.nrows();
        let mut full = DMatrix::identity(n, n);
        for (bi, &mi) in idx.iter().enumerate() {
            for (bj, &mj) in idx.iter().enumerate() {
                for u in 0..2 {
                    for v in 0..2 {
                        full[(2 * mi + u, 2 * mj + v)] = s[(2 * bi + u, 2 * bj + v)];
                    }
                }
            }
        }
        Ok(Self {
            modes: self.modes.clone(),
            mean: &full * &self.mean,
            cov: &full * &self.cov * full.transpose(),
        })
    }

    /// Pure loss: `V → X V Xᵀ + (1−η)/2 I` on the mode, `X = √η`.
    pub fn loss(&self, mode: &ModeLabel, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(invalid("eta", format!("power transmission {eta} outside [0, 1]")));
        }
        let m = self.index_of(mode)?;
        let n = self.cov.nrows();
        let mut x = DMatrix::identity(n, n);
        x[(2 * m, 2 * m)] = eta.sqrt();
        x[(2 * m + 1, 2 * m + 1)] = eta.sqrt();
        let mut cov = &x * &self.cov * &x;
        cov[(2 * m, 2 * m)] += 0.5 * (1.0 - eta);
        cov[(2 * m + 1, 2 * m + 1)] += 0.5 * (1.0 - eta);
        Ok(Self {
            modes: self.modes.clone(),
            mean: &x * &self.mean,
            cov,
        })
    }

    /// First and second moments after averaging over a wrapped-Cauchy random
    /// phase on `mode` with `E[e^{iθ}] = coherence` (the Fock engine's
    /// dephasing). The mixture is not Gaussian; the returned state carries
    /// its exact first and second moments, which is all intensity needs.
    pub fn dephase(&self, mode: &ModeLabel, coherence: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&coherence) {
            return Err(invalid("overlap", format!("{coherence} outside [0, 1]")));
        }
        let m = self.index_of(mode)?;
        let n = self.cov.nrows();
        let mut raw = &self.cov + &self.mean * self.mean.transpose();
        let own = [2 * m, 2 * m + 1];
        for i in 0..n {
            for j in 0..n {
                let (ii, jj) = (own.contains(&i), own.contains(&j));
                if ii != jj {
                    raw[(i, j)] *= coherence;
                }
            }
        }
        let (a, b) = (2 * m, 2 * m + 1);
        let iso = 0.5 * (raw[(a, a)] + raw[(b, b)]);
        let k2 = coherence * coherence;
        raw[(a, a)] = iso + k2 * (raw[(a, a)] - iso);
        raw[(b, b)] = iso + k2 * (raw[(b, b)] - iso);
        raw[(a, b)] *= k2;
        raw[(b, a)] *= k2;
        let mut mean = self.mean.clone();
        mean[a] *= coherence;
        mean[b] *= coherence;
        let cov = raw - &mean * mean.transpose();
        Ok(Self {
            modes: self.modes.clone(),
            mean,
            cov,
        })
    }

    /// Reduced state on `keep`: delete the other modes' rows and columns.
    pub fn partial_trace(&self, keep: &[ModeLabel]) -> Result<Self> {
        if keep.is_empty() {
            return Err(invalid("keep", "at least one mode must be kept"));
        }
        for k in keep {
            self.index_of(k)?;
        }
        let kept: Vec<usize> = (0..self.modes.len())
            .filter(|&m| keep.contains(&self.modes[m]))
            .collect();
        let rows: Vec<usize> = kept.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let cov = DMatrix::from_fn(rows.len(), rows.len(), |i, j| self.cov[(rows[i], rows[j])]);
        let mean = DVector::from_fn(rows.len(), |i, _| self.mean[rows[i]]);
        Ok(Self {
            modes: kept.iter().map(|&m| self.modes[m].clone()).collect(),
            mean,
            cov,
        })
    }

    /// `⟨n⟩ = (V_xx + V_pp + x̄² + p̄² − 1)/2`.
    pub fn mean_photon_number(&self, mode: &ModeLabel) -> Result<f64> {
        let m = self.index_of(mode)?;
        let (a, b) = (2 * m, 2 * m + 1);
        Ok(0.5 * (self.cov[(a, a)] + self.cov[(b, b)] + self.mean[a].powi(2) + self.mean[b].powi(2) - 1.0))
    }

    /// Smallest eigenvalue of `V + iΩ/2`; non-negative for physical states.
    pub fn uncertainty_margin(&self) -> f64 {
        let n = self.modes.len();
        let o = omega(n);
        let m = DMatrix::from_fn(2 * n, 2 * n, |i, j| Complex64::new(self.cov[(i, j)], 0.5 * o[(i, j)]));
        m.symmetric_eigenvalues()
            .iter()
            .fold(f64::INFINITY, |acc, &v| acc.min(v))
    }

    pub fn is_physical(&self) -> bool {
        let sym = (&self.cov - self.cov.transpose()).amax();
        sym <= 1e-10 && self.uncertainty_margin() >= -1e-8
    }
}

/// The two-source setup in the covariance formalism; no photon-number
/// cutoff, so any squeezing strength is allowed.
pub struct GaussianPipeline {
    config: ExperimentConfig,
    modes: SetupModes,
}

impl GaussianPipeline {
    pub fn new(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        if config.detector.kind != DetectorKind::Intensity {
            return Err(Error::Config(
                "the Gaussian engine supports intensity detection only".into(),
            ));
        }
        Ok(Self {
            config: config.clone(),
            modes: SetupModes::new(config.lambda_t_nm, config.lambda_aux_nm),
        })
    }

    /// Reduced target-mode state before the diagonal-basis projection.
    pub fn target_state(&self, phi_t: f64, phi_aux: f64, overlap: f64) -> Result<GaussianState> {
        let m = &self.modes;
        let c = &self.config;
        let g = GaussianState::vacuum(vec![m.h_t.clone(), m.v_t.clone(), m.v_aux.clone()])?
            .apply_symplectic(&two_mode_squeezing(c.r1, 0.0), &[m.h_t.clone(), m.v_aux.clone()])?
            .apply_symplectic(&phase_rotation(phi_t), std::slice::from_ref(&m.h_t))?
            .apply_symplectic(&phase_rotation(phi_aux), std::slice::from_ref(&m.v_aux))?
            .loss(&m.h_t, c.eta_t)?
            .loss(&m.v_aux, c.eta_aux)?
            .apply_symplectic(
                &two_mode_squeezing(c.r2, c.pump_relative_phase),
                &[m.v_t.clone(), m.v_aux.clone()],
            )?;
        g.partial_trace(&m.target())?.dephase(&m.h_t, overlap)
    }

    /// Mean photon numbers `(D₊, D₋)` behind the diagonal-basis projection.
    pub fn ports(&self, phi_t: f64, phi_aux: f64, overlap: f64) -> Result<(f64, f64)> {
        let m = &self.modes;
        let rot = beam_splitter(-2.0 * self.config.projection_angle(), 0.0);
        let out = self
            .target_state(phi_t, phi_aux, overlap)?
            .apply_symplectic(&rot, &m.target())?;
        let qe = self.config.detector.quantum_efficiency;
        Ok((
            qe * out.mean_photon_number(&m.h_t)?.max(0.0),
            qe * out.mean_photon_number(&m.v_t)?.max(0.0),
        ))
    }

    pub fn ports_at_tilt(&self, tilt_deg: f64) -> Result<(f64, f64)> {
        let plate = self.config.plate.at(tilt_deg);
        self.ports(
            plate.phase(self.config.lambda_t_nm),
            plate.phase(self.config.lambda_aux_nm),
            self.config.overlap_at(tilt_deg),
        )
    }

    pub fn ports_at_classical_phase(&self, x: f64) -> Result<(f64, f64)> {
        let c = &self.config;
        self.ports(
            x * c.lambda_classical_nm / c.lambda_t_nm,
            x * c.lambda_classical_nm / c.lambda_aux_nm,
            c.overlap,
        )
    }
}

/// Dominant spectral bins of the quantum and classical fringes over a
/// uniform classical-phase grid.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DoublingReport {
    pub r: f64,
    pub quantum_bin: usize,
    pub classical_bin: usize,
    /// Whether the quantum bin is within one bin of twice the classical one.
    pub doubled: bool,
}

/// Compare fringe frequencies of the Gaussian engine and the classical
/// reference on `points` samples spanning `cycles` classical fringes.
pub fn fft_doubling(config: &ExperimentConfig, cycles: usize, points: usize) -> Result<DoublingReport> {
    if cycles < 1 || points < 4 * cycles {
        return Err(invalid("points", "need at least four samples per classical fringe"));
    }
    let pipeline = GaussianPipeline::new(config)?;
    let step = 2.0 * std::f64::consts::PI * cycles as f64 / points as f64;
    let xs: Vec<f64> = (0..points).map(|i| step * i as f64).collect();
    let quantum = xs
        .par_iter()
        .map(|&x| pipeline.ports_at_classical_phase(x).map(|p| p.0))
        .collect::<Result<Vec<_>>>()?;
    let classical: Vec<f64> = xs.iter().map(|&x| 0.5 * (1.0 + x.cos())).collect();
    let quantum_bin = crate::analysis::dominant_fft_bin(&quantum);
    let classical_bin = crate::analysis::dominant_fft_bin(&classical);
    Ok(DoublingReport {
        r: config.r1,
        quantum_bin,
        classical_bin,
        doubled: quantum_bin.abs_diff(2 * classical_bin) <= 1,
    })
}

/// Tilt sweep of the two-source setup in the Gaussian engine.
pub fn run_gaussian_sweep(config: &ExperimentConfig) -> Result<FringeDataset> {
    let pipeline = GaussianPipeline::new(config)?;
    let tilts = config.tilts()?;
    let ports = tilts
        .par_iter()
        .map(|&t| pipeline.ports_at_tilt(t))
        .collect::<Result<Vec<_>>>()?;
    let (i_plus, i_minus) = ports.into_iter().unzip();
    FringeDataset::new(
        tilts,
        i_plus,
        i_minus,
        DatasetMeta {
            experiment: "gaussian".into(),
            x_unit: XUnit::TiltDeg,
            signal_unit: "photons".into(),
            phase_map: Some(config.classical_phase_map()),
        },
    )
}
