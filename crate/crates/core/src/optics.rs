// Copyright 2026 The tpsense Authors
// SPDX-License-Identifier: Apache-2.0

//! Optical elements acting on truncated Fock states.
//!
//! Unitary elements are built as [`Gate`]s (so unitarity is checked on
//! construction) and act on pure or mixed states alike. Loss and dephasing
//! are channels and always return a [`MixedState`].

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::fock::{annihilation, check_truncation, FockState, Gate, MixedState, ModeLabel, QuantumState, C64};

fn kron_two_mode(n_max: usize) -> (DMatrix<C64>, DMatrix<C64>) {
    // local index n_a + d n_b: mode a is the least significant factor
    let d = n_max + 1;
    let a = annihilation(n_max);
    let id = DMatrix::<C64>::identity(d, d);
    (id.kronecker(&a), a.kronecker(&id))
}

/// `diag(e^{i n φ})` on one mode.
pub fn phase_gate(n_max: usize, phi: f64) -> Result<Gate> {
    let d = n_max + 1;
    let m = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            C64::from_polar(1.0, phi * i as f64)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Gate::one_mode(m, n_max)
}

/// `exp[θ (e^{iϕ} b†a − e^{−iϕ} a†b)]`, which maps `a† → a† cos θ + e^{iϕ} b† sin θ`.
pub fn beam_splitter_gate(n_max: usize, mixing_angle: f64, phase: f64) -> Result<Gate> {
    let (a, b) = kron_two_mode(n_max);
    let e = C64::from_polar(1.0, phase);
    let generator = (b.adjoint() * &a * e - a.adjoint() * &b * e.conj()) * C64::new(mixing_angle, 0.0);
    Gate::two_mode(generator.exp(), n_max)
}

/// `exp[r (e^{iψ} a†b† − e^{−iψ} ab)]`.
pub fn squeezer_gate(n_max: usize, r: f64, pump_phase: f64) -> Result<Gate> {
    let (a, b) = kron_two_mode(n_max);
    let e = C64::from_polar(1.0, pump_phase);
    let generator = (a.adjoint() * b.adjoint() * e - &a * &b * e.conj()) * C64::new(r, 0.0);
    Gate::two_mode(generator.exp(), n_max)
}

/// Phase `e^{i n φ}` on Fock layer `n` of `mode`.
pub fn phase_shifter<S: FockState>(state: &S, mode: &ModeLabel, phi: f64) -> Result<S> {
    let gate = phase_gate(state.register().n_max(), phi)?;
    state.apply_one_mode_gate(mode, &gate)
}

pub fn beam_splitter<S: FockState>(
    state: &S,
    mode_a: &ModeLabel,
    mode_b: &ModeLabel,
    mixing_angle: f64,
    phase: f64,
) -> Result<S> {
    let gate = beam_splitter_gate(state.register().n_max(), mixing_angle, phase)?;
    state.apply_two_mode_gate(mode_a, mode_b, &gate)
}

/// Half-wave-plate style rotation between the H and V modes at one
/// wavelength and path.
///
/// After rotating by `angle` the H output carries the linear polarization
/// at `2·angle` and the V output its orthogonal partner. An angle of 22.5°
/// therefore routes the diagonal projection `(H+V)/√2` to the H output.
pub fn polarization_rotator<S: FockState>(state: &S, wavelength_nm: f64, path: &str, angle_rad: f64) -> Result<S> {
    let h = ModeLabel::h(wavelength_nm, path);
    let v = ModeLabel::v(wavelength_nm, path);
    beam_splitter(state, &h, &v, -2.0 * angle_rad, 0.0)
}

/// Two-mode squeezer (SPDC source) between two distinct modes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqueezerSpec {
    pub squeeze_param_r: f64,
    pub pump_phase_rad: f64,
    pub mode_a: ModeLabel,
    pub mode_b: ModeLabel,
}

impl SqueezerSpec {
    /// Pair-generation probability `tanh² r`.
    pub fn pair_probability(&self) -> f64 {
        self.squeeze_param_r.tanh().powi(2)
    }

    pub fn gate(&self, n_max: usize) -> Result<Gate> {
        if !(self.squeeze_param_r >= 0.0 && self.squeeze_param_r.is_finite()) {
            return Err(invalid(
                "squeeze_param_r",
                format!("{} is not ≥ 0", self.squeeze_param_r),
            ));
        }
        if self.mode_a == self.mode_b {
            return Err(crate::Error::SameMode(self.mode_a.to_string()));
        }
        squeezer_gate(n_max, self.squeeze_param_r, self.pump_phase_rad)
    }
}

pub fn two_mode_squeezer<S: FockState>(state: &S, spec: &SqueezerSpec) -> Result<S> {
    let gate = spec.gate(state.register().n_max())?;
    let out = state.apply_two_mode_gate(&spec.mode_a, &spec.mode_b, &gate)?;
    check_truncation(&out, "two_mode_squeezer");
    Ok(out)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Kraus operators of a pure-loss channel with power transmission `eta`:
/// `K_k = Σ_n √(C(n,k) η^{n−k} (1−η)^k) |n−k⟩⟨n|`.
pub fn loss_kraus(n_max: usize, eta: f64) -> Result<Vec<DMatrix<C64>>> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(invalid("eta", format!("power transmission {eta} outside [0, 1]")));
    }
    let d = n_max + 1;
    Ok((0..d)
        .map(|k| {
            DMatrix::from_fn(d, d, |i, n| {
                if n >= k && i == n - k {
                    let w = binomial(n, k) * eta.powi((n - k) as i32) * (1.0 - eta).powi(k as i32);
                    C64::new(w.sqrt(), 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        })
        .collect())
}

/// Photon loss on `mode`. Pure states are promoted to density matrices.
pub fn loss_channel(state: impl Into<QuantumState>, mode: &ModeLabel, eta: f64) -> Result<MixedState> {
    let rho = state.into().into_mixed();
    let kraus = loss_kraus(rho.register().n_max(), eta)?;
    rho.apply_kraus(mode, &kraus)
}

/// Random-phase dephasing of `mode`: `ρ_{nm} → κ^{|n−m|} ρ_{nm}`.
///
/// This is the average over a wrapped-Cauchy distributed phase with
/// `E[e^{iθ}] = κ`, so it is completely positive for `κ ∈ [0, 1]`. It scales
/// every first-order coherence between this mode and the others by `κ`,
/// which is how imperfect mode overlap between the two pair sources enters.
pub fn dephase(state: impl Into<QuantumState>, mode: &ModeLabel, coherence: f64) -> Result<MixedState> {
    if !(0.0..=1.0).contains(&coherence) {
        return Err(invalid("overlap", format!("{coherence} outside [0, 1]")));
    }
    let rho = state.into().into_mixed();
    let reg = rho.register().clone();
    let m = reg.index_of(mode)?;
    Ok(rho.scale_elements(|i, j| {
        let dn = reg.occupation(i, m).abs_diff(reg.occupation(j, m));
        if dn == 0 {
            1.0
        } else {
            coherence.powi(dn as i32)
        }
    }))
}

/// Plane-parallel glass plate used as the phase object.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlassPlate {
    pub thickness_mm: f64,
    pub refractive_index: f64,
    pub tilt_deg: f64,
}

impl GlassPlate {
    pub fn new(thickness_mm: f64, refractive_index: f64, tilt_deg: f64) -> Result<Self> {
        let plate = Self {
            thickness_mm,
            refractive_index,
            tilt_deg,
        };
        plate.validate()?;
        Ok(plate)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.thickness_mm > 0.0 && self.thickness_mm.is_finite()) {
            return Err(invalid("thickness_mm", format!("{} is not > 0", self.thickness_mm)));
        }
        if !(self.refractive_index > 1.0 && self.refractive_index.is_finite()) {
            return Err(invalid(
                "refractive_index",
                format!("{} is not > 1", self.refractive_index),
            ));
        }
        if !(self.tilt_deg.abs() < 45.0) {
            return Err(invalid("tilt_deg", format!("|{}| must be below 45°", self.tilt_deg)));
        }
        Ok(())
    }

    pub fn with_tilt(self, tilt_deg: f64) -> Self {
        Self { tilt_deg, ..self }
    }

    /// Dimensionless path factor `√(n² − sin²θ) − cos θ + 1`; equals `n` at
    /// normal incidence and grows with `|θ|`.
    pub fn path_factor(&self) -> f64 {
        let theta = self.tilt_deg.to_radians();
        let n = self.refractive_index;
        (n * n - theta.sin().powi(2)).sqrt() - theta.cos() + 1.0
    }

    /// Single-photon phase in radians at `wavelength_nm`.
    pub fn phase(&self, wavelength_nm: f64) -> f64 {
        let d_nm = self.thickness_mm * 1e6;
        2.0 * PI * d_nm / wavelength_nm * self.path_factor()
    }
}

/// Single-photon phase `φ(θ, λ) = (2π d/λ)(√(n² − sin²θ) − cos θ + 1)` of a
/// tilted plate. At normal incidence this is `2π n d/λ`.
pub fn glass_plate_phase(plate: &GlassPlate, wavelength_nm: f64) -> Result<f64> {
    plate.validate()?;
    if !(wavelength_nm > 0.0) {
        return Err(invalid("wavelength_nm", format!("{wavelength_nm} is not > 0")));
    }
    Ok(plate.phase(wavelength_nm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{ModeRegister, PureState};

    fn pair_register(n_max: usize) -> ModeRegister {
        ModeRegister::new(vec![ModeLabel::h(1.0, "a"), ModeLabel::h(1.0, "b")], n_max).unwrap()
    }

    #[test]
    fn phase_shifter_zero_and_inverse() {
        let r = pair_register(3);
        let a = &r.labels()[0];
        let psi = PureState::superpose(&[
            (C64::new(1.0, 0.0), &PureState::fock(&r, &[2, 1]).unwrap()),
            (C64::new(0.0, 1.0), &PureState::fock(&r, &[1, 0]).unwrap()),
        ])
        .unwrap();
        let same = phase_shifter(&psi, a, 0.0).unwrap();
        assert!((same.amplitudes() - psi.amplitudes()).camax() < 1e-15);
        let back = phase_shifter(&phase_shifter(&psi, a, 0.9).unwrap(), a, -0.9).unwrap();
        assert!((back.amplitudes() - psi.amplitudes()).camax() < 1e-12);
        let two = phase_shifter(&psi, a, 0.3).unwrap();
        let amp = two.amplitude(&[2, 1]).unwrap() / psi.amplitude(&[2, 1]).unwrap();
        assert!((amp - C64::from_polar(1.0, 0.6)).norm() < 1e-12);
    }

    #[test]
    fn beam_splitter_zero_mixing_is_identity() {
        let r = pair_register(3);
        let psi = PureState::fock(&r, &[1, 2]).unwrap();
        let out = beam_splitter(&psi, &r.labels()[0], &r.labels()[1], 0.0, 0.4).unwrap();
        assert!((out.amplitudes() - psi.amplitudes()).camax() < 1e-15);
    }

    #[test]
    fn balanced_splitter_halves_single_photon() {
        let r = pair_register(3);
        let (a, b) = (&r.labels()[0], &r.labels()[1]);
        let psi = PureState::fock(&r, &[1, 0]).unwrap();
        let out = beam_splitter(&psi, a, b, PI / 4.0, PI / 2.0).unwrap();
        assert!((out.expectation_number(a).unwrap() - 0.5).abs() < 1e-12);
        assert!((out.expectation_number(b).unwrap() - 0.5).abs() < 1e-12);
        // closed form: |1,0⟩ → (|1,0⟩ + i|0,1⟩)/√2
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amplitude(&[1, 0]).unwrap() - C64::new(s, 0.0)).norm() < 1e-12);
        assert!((out.amplitude(&[0, 1]).unwrap() - C64::new(0.0, s)).norm() < 1e-12);
    }

    #[test]
    fn hong_ou_mandel_dip() {
        // closed form: (a†cos θ + b† sin θ)(b†cos θ − a† sin θ)|0⟩ at θ = π/4
        // = (b†² − a†²)/2 |0⟩, so |1,1⟩ vanishes and |2,0⟩, |0,2⟩ carry ∓1/√2
        let r = pair_register(3);
        let (a, b) = (&r.labels()[0], &r.labels()[1]);
        let psi = PureState::fock(&r, &[1, 1]).unwrap();
        let out = beam_splitter(&psi, a, b, PI / 4.0, 0.0).unwrap();
        assert!(out.amplitude(&[1, 1]).unwrap().norm() < 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amplitude(&[2, 0]).unwrap() - C64::new(-s, 0.0)).norm() < 1e-12);
        assert!((out.amplitude(&[0, 2]).unwrap() - C64::new(s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rotator_routes_diagonal_to_h_port() {
        let r = ModeRegister::new(vec![ModeLabel::h(1563.0, "t"), ModeLabel::v(1563.0, "t")], 2).unwrap();
        let diag = PureState::superpose(&[
            (C64::new(1.0, 0.0), &PureState::fock(&r, &[1, 0]).unwrap()),
            (C64::new(1.0, 0.0), &PureState::fock(&r, &[0, 1]).unwrap()),
        ])
        .unwrap();
        let out = polarization_rotator(&diag, 1563.0, "t", 22.5_f64.to_radians()).unwrap();
        assert!((out.expectation_number(&r.labels()[0]).unwrap() - 1.0).abs() < 1e-12);
        assert!(out.expectation_number(&r.labels()[1]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn squeezer_zero_is_identity_and_rejects_same_mode() {
        let r = pair_register(3);
        let spec = SqueezerSpec {
            squeeze_param_r: 0.0,
            pump_phase_rad: 0.3,
            mode_a: r.labels()[0].clone(),
            mode_b: r.labels()[1].clone(),
        };
        let psi = PureState::fock(&r, &[0, 1]).unwrap();
        let out = two_mode_squeezer(&psi, &spec).unwrap();
        assert!((out.amplitudes() - psi.amplitudes()).camax() < 1e-15);
        let same = SqueezerSpec {
            mode_b: r.labels()[0].clone(),
            ..spec
        };
        assert!(two_mode_squeezer(&psi, &same).is_err());
    }

    #[test]
    fn squeezed_vacuum_pair_ratio_matches_schmidt_form() {
        // |TMSV⟩ = sech r Σ (e^{iψ} tanh r)^n |n,n⟩
        let r = pair_register(6);
        let (rr, psi_p) = (0.1, 0.7);
        let spec = SqueezerSpec {
            squeeze_param_r: rr,
            pump_phase_rad: psi_p,
            mode_a: r.labels()[0].clone(),
            mode_b: r.labels()[1].clone(),
        };
        let out = two_mode_squeezer(&PureState::vacuum(&r), &spec).unwrap();
        let c0 = out.amplitude(&[0, 0]).unwrap();
        let c1 = out.amplitude(&[1, 1]).unwrap();
        let c2 = out.amplitude(&[2, 2]).unwrap();
        assert!((c1.norm_sqr() / c0.norm_sqr() - rr.tanh().powi(2)).abs() < 1e-9);
        assert!((c1 / c0 - C64::from_polar(rr.tanh(), psi_p)).norm() < 1e-9);
        assert!((c2 / c0 - C64::from_polar(rr.tanh().powi(2), 2.0 * psi_p)).norm() < 1e-9);
        assert!((c0.norm() - 1.0 / rr.cosh()).abs() < 1e-9);
        assert!((out.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn stimulated_emission_enhances_pair_amplitude() {
        // a†b†|0,1⟩ = √2 |1,2⟩ versus a†b†|0,0⟩ = |1,1⟩
        let r = pair_register(6);
        let spec = SqueezerSpec {
            squeeze_param_r: 0.1,
            pump_phase_rad: 0.0,
            mode_a: r.labels()[0].clone(),
            mode_b: r.labels()[1].clone(),
        };
        let spont = two_mode_squeezer(&PureState::vacuum(&r), &spec).unwrap();
        let stim = two_mode_squeezer(&PureState::fock(&r, &[0, 1]).unwrap(), &spec).unwrap();
        let ratio_spont = spont.amplitude(&[1, 1]).unwrap() / spont.amplitude(&[0, 0]).unwrap();
        let ratio_stim = stim.amplitude(&[1, 2]).unwrap() / stim.amplitude(&[0, 1]).unwrap();
        assert!(((ratio_stim / ratio_spont).re - 2f64.sqrt()).abs() < 1e-9);
        assert!((ratio_stim / ratio_spont).im.abs() < 1e-9);
    }

    #[test]
    fn loss_channel_edge_cases() {
        let r = ModeRegister::new(vec![ModeLabel::h(1.0, "a")], 3).unwrap();
        let a = &r.labels()[0];
        let one = PureState::fock(&r, &[1]).unwrap();
        let same = loss_channel(one.clone(), a, 1.0).unwrap();
        assert!((same.rho() - one.to_density().rho()).camax() < 1e-15);
        let gone = loss_channel(PureState::fock(&r, &[3]).unwrap(), a, 0.0).unwrap();
        assert!((gone.rho()[(0, 0)].re - 1.0).abs() < 1e-15);
        let half = loss_channel(one, a, 0.5).unwrap();
        assert!((half.rho()[(0, 0)].re - 0.5).abs() < 1e-12);
        assert!((half.rho()[(1, 1)].re - 0.5).abs() < 1e-12);
        assert!(half.rho()[(0, 1)].norm() < 1e-15);
        assert!(loss_channel(PureState::vacuum(&r), a, 1.2).is_err());
        assert!(loss_channel(PureState::vacuum(&r), a, -0.1).is_err());
    }

    #[test]
    fn loss_kraus_is_complete() {
        for &eta in &[0.0, 0.3, 0.77, 1.0] {
            let ks = loss_kraus(4, eta).unwrap();
            let sum = ks
                .iter()
                .fold(DMatrix::<C64>::zeros(5, 5), |acc, k| acc + k.adjoint() * k);
            assert!((sum - DMatrix::<C64>::identity(5, 5)).camax() < 1e-12);
        }
    }

    #[test]
    fn dephasing_scales_first_order_coherence() {
        let r = pair_register(2);
        let psi = PureState::superpose(&[
            (C64::new(1.0, 0.0), &PureState::fock(&r, &[1, 0]).unwrap()),
            (C64::new(1.0, 0.0), &PureState::fock(&r, &[0, 1]).unwrap()),
        ])
        .unwrap();
        let out = dephase(psi.clone(), &r.labels()[0], 0.6).unwrap();
        let (i, j) = (r.basis_index(&[1, 0]).unwrap(), r.basis_index(&[0, 1]).unwrap());
        assert!((out.rho()[(i, j)].re - 0.3).abs() < 1e-15);
        assert!((out.trace() - 1.0).abs() < 1e-15);
        out.validate().unwrap();
        assert!(dephase(psi, &r.labels()[0], 1.5).is_err());
    }

    #[test]
    fn plate_phase_at_normal_incidence() {
        let plate = GlassPlate::new(1.0, 1.444, 0.0).unwrap();
        let phi = glass_plate_phase(&plate, 1563.0).unwrap();
        assert!((phi - 2.0 * PI * 1.444e6 / 1563.0).abs() < 1e-9);
        let two = phi + glass_plate_phase(&plate, 1557.0).unwrap();
        let approx = 4.0 * PI * 1.444e6 / 1563.0;
        assert!(((two - approx) / approx).abs() < 4e-3);
    }

    #[test]
    fn plate_phase_is_even_and_grows_with_tilt() {
        let plate = GlassPlate::new(1.0, 1.444, 0.0).unwrap();
        let at = |t: f64| plate.with_tilt(t).phase(1563.0);
        assert!((at(5.0) - at(-5.0)).abs() < 1e-12);
        let mut last = at(0.0);
        for i in 1..=400 {
            let now = at(i as f64 * 0.1);
            assert!(now > last);
            last = now;
        }
        assert!(GlassPlate::new(1.0, 1.444, 45.0).is_err());
        assert!(GlassPlate::new(1.0, 0.9, 0.0).is_err());
    }
}
