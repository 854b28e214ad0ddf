// Copyright 2026 The tpsense Authors
// SPDX-License-Identifier: Apache-2.0

//! Independent brute-force reference for the two-source setup.
//!
//! Five modes `(H_t, V_t, V_aux, E_t, E_aux)` at a shared cutoff, stored as
//! one flat amplitude vector. Loss is a beam splitter into an environment
//! mode instead of Kraus operators, and every unitary is applied through a
//! Taylor series of its generator on the vector. Nothing here calls into
//! the library's simulation code.

#![allow(dead_code)]

use num_complex::Complex64 as C;

pub const H: usize = 0;
pub const V: usize = 1;
pub const AUX: usize = 2;
pub const ENV_H: usize = 3;
pub const ENV_AUX: usize = 4;
const MODES: usize = 5;

#[derive(Clone, Copy, Debug)]
pub struct OracleParams {
    pub n_max: usize,
    pub r1: f64,
    pub r2: f64,
    pub pump_relative_phase: f64,
    pub eta_t: f64,
    pub eta_aux: f64,
    pub overlap: f64,
}

impl Default for OracleParams {
    fn default() -> Self {
        Self {
            n_max: 3,
            r1: 0.05,
            r2: 0.05,
            pump_relative_phase: 0.0,
            eta_t: 1.0,
            eta_aux: 1.0,
            overlap: 1.0,
        }
    }
}

struct Space {
    d: usize,
}

impl Space {
    fn dim(&self) -> usize {
        self.d.pow(MODES as u32)
    }

    fn occ(&self, idx: usize, mode: usize) -> usize {
        (idx / self.d.pow(mode as u32)) % self.d
    }

    fn stride(&self, mode: usize) -> usize {
        self.d.pow(mode as u32)
    }

    fn lower(&self, psi: &[C], mode: usize) -> Vec<C> {
        let mut out = vec![C::new(0.0, 0.0); psi.len()];
        let s = self.stride(mode);
        for (i, a) in psi.iter().enumerate() {
            let n = self.occ(i, mode);
            if n > 0 {
                out[i - s] += a * (n as f64).sqrt();
            }
        }
        out
    }

    fn raise(&self, psi: &[C], mode: usize) -> Vec<C> {
        let mut out = vec![C::new(0.0, 0.0); psi.len()];
        let s = self.stride(mode);
        for (i, a) in psi.iter().enumerate() {
            let n = self.occ(i, mode);
            if n + 1 < self.d {
                out[i + s] += a * ((n + 1) as f64).sqrt();
            }
        }
        out
    }

    fn phase(&self, psi: &mut [C], mode: usize, phi: f64) {
        for (i, a) in psi.iter_mut().enumerate() {
            *a *= C::from_polar(1.0, phi * self.occ(i, mode) as f64);
        }
    }

    /// `exp(G) ψ` by Taylor series, `G` anti-Hermitian.
    fn exp_apply(&self, psi: &[C], g: impl Fn(&[C]) -> Vec<C>) -> Vec<C> {
        let mut out = psi.to_vec();
        let mut term = psi.to_vec();
        for k in 1..200 {
            term = g(&term).into_iter().map(|v| v / k as f64).collect();
            let norm: f64 = term.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            for (o, t) in out.iter_mut().zip(&term) {
                *o += t;
            }
            if norm < 1e-20 {
                break;
            }
        }
        out
    }

    /// `exp[r (e^{iψ} a†b† − e^{−iψ} ab)]`.
    fn squeeze(&self, psi: &[C], a: usize, b: usize, r: f64, pump: f64) -> Vec<C> {
        let e = C::from_polar(r, pump);
        self.exp_apply(psi, |v| {
            let up = self.raise(&self.raise(v, b), a);
            let down = self.lower(&self.lower(v, b), a);
            up.iter().zip(&down).map(|(u, d)| e * u - e.conj() * d).collect()
        })
    }

    /// Beam splitter into an empty environment mode with `cos² θ = η`.
    fn lose(&self, psi: &[C], mode: usize, env: usize, eta: f64) -> Vec<C> {
        let theta = eta.sqrt().acos();
        self.exp_apply(psi, |v| {
            let fwd = self.raise(&self.lower(v, mode), env);
            let back = self.raise(&self.lower(v, env), mode);
            fwd.iter().zip(&back).map(|(f, b)| (f - b) * theta).collect()
        })
    }

    fn expect_hop(&self, psi: &[C], from: usize, to: usize) -> C {
        let moved = self.raise(&self.lower(psi, from), to);
        psi.iter().zip(&moved).map(|(p, m)| p.conj() * m).sum()
    }
}

/// Target-mode moments `(⟨n_H⟩, ⟨n_V⟩, ⟨a_H† a_V⟩)` after both sources,
/// with the overlap applied to the coherence.
pub fn target_moments(p: &OracleParams, phi_t: f64, phi_aux: f64) -> (f64, f64, C) {
    let sp = Space { d: p.n_max + 1 };
    let mut psi = vec![C::new(0.0, 0.0); sp.dim()];
    psi[0] = C::new(1.0, 0.0);
    let mut psi = sp.squeeze(&psi, H, AUX, p.r1, 0.0);
    sp.phase(&mut psi, H, phi_t);
    sp.phase(&mut psi, AUX, phi_aux);
    let psi = sp.lose(&psi, H, ENV_H, p.eta_t);
    let psi = sp.lose(&psi, AUX, ENV_AUX, p.eta_aux);
    let psi = sp.squeeze(&psi, V, AUX, p.r2, p.pump_relative_phase);
    let n_h = sp.expect_hop(&psi, H, H).re;
    let n_v = sp.expect_hop(&psi, V, V).re;
    // ⟨a_H† a_V⟩ = ⟨ψ| a_H† a_V |ψ⟩: move a photon from V to H.
    let coh = sp.expect_hop(&psi, V, H) * p.overlap;
    (n_h, n_v, coh)
}

/// Fringe visibility of either diagonal port.
pub fn visibility(p: &OracleParams) -> f64 {
    let (n_h, n_v, coh) = target_moments(p, 0.0, 0.0);
    2.0 * coh.norm() / (n_h + n_v)
}

/// Diagonal-port intensities `(I₊, I₋)`.
pub fn ports(p: &OracleParams, phi_t: f64, phi_aux: f64) -> (f64, f64) {
    let (n_h, n_v, coh) = target_moments(p, phi_t, phi_aux);
    let total = n_h + n_v;
    (0.5 * (total + 2.0 * coh.re), 0.5 * (total - 2.0 * coh.re))
}
