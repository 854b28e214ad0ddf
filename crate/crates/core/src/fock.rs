// Copyright 2026 The tpsense Authors
// SPDX-License-Identifier: Apache-2.0

//! Truncated multimode Fock space.
//!
//! Every mode shares one photon-number cutoff `n_max`, so the local dimension
//! is `d = n_max + 1` and the full space has `d^M` basis states. Basis states
//! are indexed little-endian in registration order: the occupation of mode
//! `m` is digit `m` of the index written in base `d`, so mode 0 is the least
//! significant digit. Local gate matrices follow the same rule: for a
//! two-mode gate on `(a, b)` the local index is `n_a + d * n_b`.
//!
//! States are values. Every operation returns a new state.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub type C64 = Complex64;

/// Largest acceptable population in the top Fock layer of any mode.
pub const TRUNCATION_LIMIT: f64 = 1e-6;

/// Spectral tolerance for accepting a matrix as unitary.
pub const UNITARY_TOLERANCE: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

/// A named optical mode: polarization, wavelength and spatial path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeLabel {
    pub polarization: Polarization,
    pub wavelength_nm: f64,
    pub path: String,
}

impl ModeLabel {
    pub fn new(polarization: Polarization, wavelength_nm: f64, path: impl Into<String>) -> Self {
        Self {
            polarization,
            wavelength_nm,
            path: path.into(),
        }
    }

    pub fn h(wavelength_nm: f64, path: impl Into<String>) -> Self {
        Self::new(Polarization::H, wavelength_nm, path)
    }

    pub fn v(wavelength_nm: f64, path: impl Into<String>) -> Self {
        Self::new(Polarization::V, wavelength_nm, path)
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@{}nm/{}", self.polarization, self.wavelength_nm, self.path)
    }
}

/// Ordered set of modes plus the shared photon cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeRegister {
    labels: Vec<ModeLabel>,
    n_max: usize,
}

impl ModeRegister {
    pub fn new(labels: Vec<ModeLabel>, n_max: usize) -> Result<Self> {
        if labels.is_empty() {
            return Err(invalid("labels", "register needs at least one mode"));
        }
        if n_max < 1 {
            return Err(invalid("n_max", "photon cutoff must be at least 1"));
        }
        for (i, label) in labels.iter().enumerate() {
            if !(label.wavelength_nm > 0.0 && label.wavelength_nm.is_finite()) {
                return Err(invalid("wavelength_nm", format!("mode {label} is not positive")));
            }
            if labels[..i].contains(label) {
                return Err(Error::DuplicateMode(label.to_string()));
            }
        }
        let d = n_max + 1;
        if (d as f64).powi(labels.len() as i32) > 1.0e5 {
            return Err(invalid(
                "n_max",
                format!("(n_max+1)^M = {d}^{} is too large for a dense simulation", labels.len()),
            ));
        }
        Ok(Self { labels, n_max })
    }

    pub fn labels(&self) -> &[ModeLabel] {
        &self.labels
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn mode_count(&self) -> usize {
        self.labels.len()
    }

    pub fn local_dim(&self) -> usize {
        self.n_max + 1
    }

    /// Tensor dimension `(n_max+1)^M`.
    pub fn dim(&self) -> usize {
        self.local_dim().pow(self.labels.len() as u32)
    }

    pub fn index_of(&self, label: &ModeLabel) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownMode(label.to_string()))
    }

    pub fn contains(&self, label: &ModeLabel) -> bool {
        self.labels.contains(label)
    }

    pub(crate) fn stride(&self, mode: usize) -> usize {
        self.local_dim().pow(mode as u32)
    }

    /// Occupation of `mode` in basis state `index`.
    pub fn occupation(&self, index: usize, mode: usize) -> usize {
        (index / self.stride(mode)) % self.local_dim()
    }

    /// Occupation numbers of every mode for basis state `index`.
    pub fn occupations(&self, index: usize) -> Vec<usize> {
        (0..self.mode_count()).map(|m| self.occupation(index, m)).collect()
    }

    /// Basis index of the given occupation numbers.
    pub fn basis_index(&self, occupations: &[usize]) -> Result<usize> {
        if occupations.len() != self.mode_count() {
            return Err(Error::DimensionMismatch {
                expected: self.mode_count(),
                actual: occupations.len(),
            });
        }
        let d = self.local_dim();
        let mut index = 0;
        for (m, &n) in occupations.iter().enumerate() {
            if n > self.n_max {
                return Err(invalid(
                    "occupations",
                    format!("{n} photons exceed the cutoff {}", self.n_max),
                ));
            }
            index += n * d.pow(m as u32);
        }
        Ok(index)
    }

    /// Register holding only `keep`, in this register's order.
    pub fn subregister(&self, keep: &[ModeLabel]) -> Result<(ModeRegister, Vec<usize>)> {
        if keep.is_empty() {
            return Err(invalid("keep", "at least one mode must be kept"));
        }
        for label in keep {
            self.index_of(label)?;
        }
        let kept: Vec<usize> = (0..self.mode_count())
            .filter(|&m| keep.contains(&self.labels[m]))
            .collect();
        let labels = kept.iter().map(|&m| self.labels[m].clone()).collect();
        Ok((ModeRegister::new(labels, self.n_max)?, kept))
    }

    fn is_top_layer(&self, index: usize) -> bool {
        (0..self.mode_count()).any(|m| self.occupation(index, m) == self.n_max)
    }
}

/// Truncated annihilation operator on one mode, `(n_max+1)²`.
pub fn annihilation(n_max: usize) -> DMatrix<C64> {
    let d = n_max + 1;
    DMatrix::from_fn(d, d, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

/// Spectral norm of `U†U − I`.
pub fn unitarity_deviation(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let product = m.adjoint() * m - DMatrix::<C64>::identity(n, n);
    product
        .symmetric_eigenvalues()
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// A validated unitary acting on one or two modes.
#[derive(Clone, Debug)]
pub struct Gate {
    matrix: DMatrix<C64>,
    arity: usize,
    local_dim: usize,
}

impl Gate {
    pub fn one_mode(matrix: DMatrix<C64>, n_max: usize) -> Result<Self> {
        Self::new(matrix, 1, n_max)
    }

    pub fn two_mode(matrix: DMatrix<C64>, n_max: usize) -> Result<Self> {
        Self::new(matrix, 2, n_max)
    }

    fn new(matrix: DMatrix<C64>, arity: usize, n_max: usize) -> Result<Self> {
        let d = n_max + 1;
        let expected = d.pow(arity as u32);
        if matrix.nrows() != expected || matrix.ncols() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: matrix.nrows().max(matrix.ncols()),
            });
        }
        let deviation = unitarity_deviation(&matrix);
        if !(deviation <= UNITARY_TOLERANCE) {
            return Err(Error::NonUnitary {
                deviation,
                tolerance: UNITARY_TOLERANCE,
            });
        }
        Ok(Self {
            matrix,
            arity,
            local_dim: d,
        })
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn n_max(&self) -> usize {
        self.local_dim - 1
    }
}

/// Index bookkeeping for applying a local operator on a subset of modes.
struct LocalLayout {
    bases: Vec<usize>,
    offsets: Vec<usize>,
}

impl LocalLayout {
    fn new(register: &ModeRegister, modes: &[usize]) -> Self {
        let d = register.local_dim();
        let local = d.pow(modes.len() as u32);
        let offsets = (0..local)
            .map(|l| {
                let mut rest = l;
                let mut off = 0;
                for &m in modes {
                    off += (rest % d) * register.stride(m);
                    rest /= d;
                }
                off
            })
            .collect();
        let bases = (0..register.dim())
            .filter(|&i| modes.iter().all(|&m| register.occupation(i, m) == 0))
            .collect();
        Self { bases, offsets }
    }

    fn apply(&self, op: &DMatrix<C64>, input: &[C64], output: &mut [C64]) {
        let local = self.offsets.len();
        let mut gathered = vec![ZERO; local];
        for &base in &self.bases {
            for (g, &off) in gathered.iter_mut().zip(&self.offsets) {
                *g = input[base + off];
            }
            for (row, &off) in self.offsets.iter().enumerate() {
                let mut acc = ZERO;
                for (col, g) in gathered.iter().enumerate() {
                    acc += op[(row, col)] * g;
                }
                output[base + off] = acc;
            }
        }
    }
}

fn mode_indices(register: &ModeRegister, modes: &[&ModeLabel]) -> Result<Vec<usize>> {
    let indices = modes.iter().map(|l| register.index_of(l)).collect::<Result<Vec<_>>>()?;
    if indices.len() == 2 && indices[0] == indices[1] {
        return Err(Error::SameMode(modes[0].to_string()));
    }
    Ok(indices)
}

fn check_gate(register: &ModeRegister, gate: &Gate, arity: usize) -> Result<()> {
    if gate.arity != arity {
        return Err(invalid(
            "gate",
            format!("expected a {arity}-mode gate, got a {}-mode gate", gate.arity),
        ));
    }
    if gate.local_dim != register.local_dim() {
        return Err(Error::DimensionMismatch {
            expected: register.local_dim(),
            actual: gate.local_dim,
        });
    }
    Ok(())
}

/// Operations shared by pure and mixed states.
pub trait FockState: Sized {
    fn register(&self) -> &ModeRegister;

    /// Apply an arbitrary local operator (not necessarily unitary) as `O ψ`
    /// or `O ρ O†`.
    #[doc(hidden)]
    fn apply_local(&self, modes: &[usize], op: &DMatrix<C64>) -> Self;

    fn apply_one_mode_gate(&self, mode: &ModeLabel, gate: &Gate) -> Result<Self> {
        check_gate(self.register(), gate, 1)?;
        let idx = mode_indices(self.register(), &[mode])?;
        Ok(self.apply_local(&idx, &gate.matrix))
    }

    fn apply_two_mode_gate(&self, mode_a: &ModeLabel, mode_b: &ModeLabel, gate: &Gate) -> Result<Self> {
        check_gate(self.register(), gate, 2)?;
        let idx = mode_indices(self.register(), &[mode_a, mode_b])?;
        Ok(self.apply_local(&idx, &gate.matrix))
    }

    fn expectation_number(&self, mode: &ModeLabel) -> Result<f64>;

    /// Population in basis states where any mode sits at `n_max`.
    fn top_layer_population(&self) -> f64;
}

/// Normalized amplitude vector over the truncated space.
#[derive(Clone, Debug)]
pub struct PureState {
    register: ModeRegister,
    amplitudes: DVector<C64>,
}

impl PureState {
    pub fn vacuum(register: &ModeRegister) -> Self {
        let mut amplitudes = DVector::from_element(register.dim(), ZERO);
        amplitudes[0] = ONE;
        Self {
            register: register.clone(),
            amplitudes,
        }
    }

    /// Number state with the given occupations.
    pub fn fock(register: &ModeRegister, occupations: &[usize]) -> Result<Self> {
        let index = register.basis_index(occupations)?;
        let mut amplitudes = DVector::from_element(register.dim(), ZERO);
        amplitudes[index] = ONE;
        Ok(Self {
            register: register.clone(),
            amplitudes,
        })
    }

    pub fn from_amplitudes(register: &ModeRegister, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != register.dim() {
            return Err(Error::DimensionMismatch {
                expected: register.dim(),
                actual: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("‖ψ‖ = {norm}, expected 1")));
        }
        Ok(Self {
            register: register.clone(),
            amplitudes,
        })
    }

    /// Normalized coherent sum `Σ c_i |ψ_i⟩` of states on one register.
    pub fn superpose(terms: &[(C64, &PureState)]) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(invalid("terms", "nothing to superpose"));
        };
        let register = first.register.clone();
        let mut sum = DVector::from_element(register.dim(), ZERO);
        for (c, state) in terms {
            if state.register != register {
                return Err(invalid("terms", "states live on different registers"));
            }
            sum += &state.amplitudes * *c;
        }
        let norm = sum.norm();
        if norm < 1e-300 {
            return Err(Error::InvalidState("superposition vanishes".into()));
        }
        Ok(Self {
            register,
            amplitudes: sum / C64::new(norm, 0.0),
        })
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, occupations: &[usize]) -> Result<C64> {
        Ok(self.amplitudes[self.register.basis_index(occupations)?])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Reduced state on `keep`, computed as `M M†` from the amplitudes
    /// arranged as a (kept × traced) matrix.
    pub fn partial_trace(&self, keep: &[ModeLabel]) -> Result<MixedState> {
        let (sub, kept) = self.register.subregister(keep)?;
        let traced: Vec<usize> = (0..self.register.mode_count()).filter(|m| !kept.contains(m)).collect();
        let d = self.register.local_dim();
        let mut m = DMatrix::from_element(sub.dim(), d.pow(traced.len() as u32), ZERO);
        for (i, amp) in self.amplitudes.iter().enumerate() {
            let index = |modes: &[usize]| -> usize {
                modes
                    .iter()
                    .enumerate()
                    .map(|(pos, &mode)| self.register.occupation(i, mode) * d.pow(pos as u32))
                    .sum()
            };
            m[(index(&kept), index(&traced))] = *amp;
        }
        let rho = &m * m.adjoint();
        Ok(MixedState { register: sub, rho })
    }

    pub fn to_density(&self) -> MixedState {
        MixedState {
            register: self.register.clone(),
            rho: &self.amplitudes * self.amplitudes.adjoint(),
        }
    }
}

impl FockState for PureState {
    fn register(&self) -> &ModeRegister {
        &self.register
    }

    fn apply_local(&self, modes: &[usize], op: &DMatrix<C64>) -> Self {
        let layout = LocalLayout::new(&self.register, modes);
        let mut out = DVector::from_element(self.amplitudes.len(), ZERO);
        layout.apply(op, self.amplitudes.as_slice(), out.as_mut_slice());
        Self {
            register: self.register.clone(),
            amplitudes: out,
        }
    }

    fn expectation_number(&self, mode: &ModeLabel) -> Result<f64> {
        let m = self.register.index_of(mode)?;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm_sqr() * self.register.occupation(i, m) as f64)
            .sum())
    }

    fn top_layer_population(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| self.register.is_top_layer(*i))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

/// Density matrix over the truncated space.
#[derive(Clone, Debug)]
pub struct MixedState {
    register: ModeRegister,
    rho: DMatrix<C64>,
}

impl MixedState {
    /// Wrap a matrix after checking it is Hermitian, unit trace and positive
    /// semidefinite.
    pub fn from_matrix(register: &ModeRegister, rho: DMatrix<C64>) -> Result<Self> {
        let state = Self {
            register: register.clone(),
            rho,
        };
        state.validate()?;
        Ok(state)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.register.dim();
        if self.rho.nrows() != d || self.rho.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: self.rho.nrows(),
            });
        }
        let herm = (&self.rho - self.rho.adjoint()).camax();
        if herm > 1e-10 {
            return Err(Error::InvalidState(format!("not Hermitian (max deviation {herm:e})")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("trace {tr} ≠ 1")));
        }
        let min = self.min_eigenvalue();
        if min < -1e-9 {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn rho(&self) -> &DMatrix<C64> {
        &self.rho
    }

    pub fn trace(&self) -> f64 {
        self.rho.diagonal().iter().map(|z| z.re).sum()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.rho.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.rho
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .fold(f64::INFINITY, |acc, &v| acc.min(v))
    }

    pub fn rank(&self, tolerance: f64) -> usize {
        self.rho
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .filter(|v| v.abs() > tolerance)
            .count()
    }

    /// Population of each basis state.
    pub fn populations(&self) -> Vec<f64> {
        self.rho.diagonal().iter().map(|z| z.re).collect()
    }

    /// Reduced state on `keep` (kept modes stay in register order).
    pub fn partial_trace(&self, keep: &[ModeLabel]) -> Result<MixedState> {
        let (sub, kept) = self.register.subregister(keep)?;
        if kept.len() == self.register.mode_count() {
            return Ok(self.clone());
        }
        let traced: Vec<usize> = (0..self.register.mode_count()).filter(|m| !kept.contains(m)).collect();
        let d = self.register.local_dim();
        let dim = self.register.dim();
        let split = |i: usize| -> (usize, usize) {
            let mut k = 0;
            let mut e = 0;
            for (pos, &m) in kept.iter().enumerate() {
                k += self.register.occupation(i, m) * d.pow(pos as u32);
            }
            for (pos, &m) in traced.iter().enumerate() {
                e += self.register.occupation(i, m) * d.pow(pos as u32);
            }
            (k, e)
        };
        let parts: Vec<(usize, usize)> = (0..dim).map(split).collect();
        let mut reduced = DMatrix::from_element(sub.dim(), sub.dim(), ZERO);
        // group basis indices by environment configuration
        let env_dim = d.pow(traced.len() as u32);
        let mut by_env: Vec<Vec<(usize, usize)>> = vec![Vec::new(); env_dim];
        for (i, &(k, e)) in parts.iter().enumerate() {
            by_env[e].push((i, k));
        }
        for group in &by_env {
            for &(j, kj) in group {
                for &(i, ki) in group {
                    reduced[(ki, kj)] += self.rho[(i, j)];
                }
            }
        }
        Ok(MixedState {
            register: sub,
            rho: reduced,
        })
    }

    /// Condition on a total photon number `n` in `modes` and renormalize.
    ///
    /// Models detection that rejects the vacuum (or any other photon-number
    /// sector) of the monitored modes.
    pub fn postselect_photon_number(&self, modes: &[ModeLabel], n: usize) -> Result<MixedState> {
        let idx = modes
            .iter()
            .map(|l| self.register.index_of(l))
            .collect::<Result<Vec<_>>>()?;
        let keep: Vec<bool> = (0..self.register.dim())
            .map(|i| idx.iter().map(|&m| self.register.occupation(i, m)).sum::<usize>() == n)
            .collect();
        let mut rho = self.rho.clone();
        for j in 0..rho.ncols() {
            for i in 0..rho.nrows() {
                if !(keep[i] && keep[j]) {
                    rho[(i, j)] = ZERO;
                }
            }
        }
        let p: f64 = rho.diagonal().iter().map(|z| z.re).sum();
        if p <= 1e-300 {
            return Err(Error::InvalidState(format!("no population with {n} photons")));
        }
        rho /= C64::new(p, 0.0);
        Ok(MixedState {
            register: self.register.clone(),
            rho,
        })
    }

    /// The same state in a register with a larger cutoff.
    ///
    /// Number-conserving gates act exactly on a state whose total photon
    /// number does not exceed the cutoff, so lifting to `n_max · modes`
    /// before such gates avoids truncating them.
    pub fn with_cutoff(&self, n_max: usize) -> Result<MixedState> {
        if n_max < self.register.n_max() {
            return Err(invalid(
                "n_max",
                format!("cannot lower the cutoff from {} to {n_max}", self.register.n_max()),
            ));
        }
        let register = ModeRegister::new(self.register.labels().to_vec(), n_max)?;
        let map = (0..self.register.dim())
            .map(|i| register.basis_index(&self.register.occupations(i)))
            .collect::<Result<Vec<_>>>()?;
        let mut rho = DMatrix::from_element(register.dim(), register.dim(), ZERO);
        for (j, &mj) in map.iter().enumerate() {
            for (i, &mi) in map.iter().enumerate() {
                rho[(mi, mj)] = self.rho[(i, j)];
            }
        }
        Ok(MixedState { register, rho })
    }

    /// Apply a channel given by single-mode Kraus operators on `mode`.
    pub fn apply_kraus(&self, mode: &ModeLabel, kraus: &[DMatrix<C64>]) -> Result<MixedState> {
        let m = self.register.index_of(mode)?;
        let d = self.register.local_dim();
        let mut out = DMatrix::from_element(self.rho.nrows(), self.rho.ncols(), ZERO);
        for k in kraus {
            if k.nrows() != d || k.ncols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: k.nrows(),
                });
            }
            out += self.apply_local(&[m], k).rho;
        }
        Ok(MixedState {
            register: self.register.clone(),
            rho: out,
        })
    }

    /// Multiply every matrix element by `f(i, j)` (diagonal-preserving maps
    /// such as dephasing).
    pub(crate) fn scale_elements(&self, f: impl Fn(usize, usize) -> f64) -> MixedState {
        let rho = DMatrix::from_fn(self.rho.nrows(), self.rho.ncols(), |i, j| self.rho[(i, j)] * f(i, j));
        MixedState {
            register: self.register.clone(),
            rho,
        }
    }
}

impl FockState for MixedState {
    fn register(&self) -> &ModeRegister {
        &self.register
    }

    fn apply_local(&self, modes: &[usize], op: &DMatrix<C64>) -> Self {
        let layout = LocalLayout::new(&self.register, modes);
        let n = self.rho.nrows();
        // O ρ, column by column
        let mut left = DMatrix::from_element(n, n, ZERO);
        for j in 0..n {
            layout.apply(op, self.rho.column(j).as_slice(), left.column_mut(j).as_mut_slice());
        }
        // (O (Oρ)†)† = O ρ O†
        let left_adj = left.adjoint();
        let mut both = DMatrix::from_element(n, n, ZERO);
        for j in 0..n {
            layout.apply(op, left_adj.column(j).as_slice(), both.column_mut(j).as_mut_slice());
        }
        Self {
            register: self.register.clone(),
            rho: both.adjoint(),
        }
    }

    fn expectation_number(&self, mode: &ModeLabel) -> Result<f64> {
        let m = self.register.index_of(mode)?;
        Ok(self
            .rho
            .diagonal()
            .iter()
            .enumerate()
            .map(|(i, z)| z.re * self.register.occupation(i, m) as f64)
            .sum())
    }

    fn top_layer_population(&self) -> f64 {
        self.rho
            .diagonal()
            .iter()
            .enumerate()
            .filter(|(i, _)| self.register.is_top_layer(*i))
            .map(|(_, z)| z.re)
            .sum()
    }
}

/// Either representation; pure states are promoted on the first channel.
#[derive(Clone, Debug)]
pub enum QuantumState {
    Pure(PureState),
    Mixed(MixedState),
}

impl QuantumState {
    pub fn to_mixed(&self) -> MixedState {
        match self {
            QuantumState::Pure(p) => p.to_density(),
            QuantumState::Mixed(m) => m.clone(),
        }
    }

    /// Reduced state on `keep`; pure states skip the full density matrix.
    pub fn partial_trace(&self, keep: &[ModeLabel]) -> Result<MixedState> {
        match self {
            QuantumState::Pure(p) => p.partial_trace(keep),
            QuantumState::Mixed(m) => m.partial_trace(keep),
        }
    }

    pub fn into_mixed(self) -> MixedState {
        match self {
            QuantumState::Pure(p) => p.to_density(),
            QuantumState::Mixed(m) => m,
        }
    }
}

impl From<PureState> for QuantumState {
    fn from(p: PureState) -> Self {
        QuantumState::Pure(p)
    }
}

impl From<MixedState> for QuantumState {
    fn from(m: MixedState) -> Self {
        QuantumState::Mixed(m)
    }
}

impl FockState for QuantumState {
    fn register(&self) -> &ModeRegister {
        match self {
            QuantumState::Pure(p) => p.register(),
            QuantumState::Mixed(m) => m.register(),
        }
    }

    fn apply_local(&self, modes: &[usize], op: &DMatrix<C64>) -> Self {
        match self {
            QuantumState::Pure(p) => QuantumState::Pure(p.apply_local(modes, op)),
            QuantumState::Mixed(m) => QuantumState::Mixed(m.apply_local(modes, op)),
        }
    }

    fn expectation_number(&self, mode: &ModeLabel) -> Result<f64> {
        match self {
            QuantumState::Pure(p) => p.expectation_number(mode),
            QuantumState::Mixed(m) => m.expectation_number(mode),
        }
    }

    fn top_layer_population(&self) -> f64 {
        match self {
            QuantumState::Pure(p) => p.top_layer_population(),
            QuantumState::Mixed(m) => m.top_layer_population(),
        }
    }
}

/// Emit a warning when the top Fock layer carries more than
/// [`TRUNCATION_LIMIT`]; returns the population.
pub fn check_truncation<S: FockState>(state: &S, context: &str) -> f64 {
    let pop = state.top_layer_population();
    if pop > TRUNCATION_LIMIT {
        log::warn!(
            "{context}: top Fock layer population {pop:e} exceeds {TRUNCATION_LIMIT:e} (n_max = {})",
            state.register().n_max()
        );
    }
    pop
}
