// Copyright 2026 The tpsense Authors
// SPDX-License-Identifier: Apache-2.0

//! The three experiments: the two-source induced-coherence setup, the
//! classical Mach-Zehnder reference and the abstract N-photon protocol.

use std::f64::consts::FRAC_PI_8;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detection::{click_probability, intensity, DetectorKind, DetectorSpec};
use crate::error::{invalid, Error, Result};
use crate::fock::{
    FockState, Gate, MixedState, ModeLabel, ModeRegister, PureState, QuantumState, C64, TRUNCATION_LIMIT,
};
use crate::lockin::LockinConfig;
use crate::optics::{
    beam_splitter, beam_splitter_gate, dephase, loss_channel, phase_gate, phase_shifter, polarization_rotator,
    squeezer_gate, GlassPlate,
};

pub const TARGET_PATH: &str = "t";
pub const AUX_PATH: &str = "aux";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlateSpec {
    pub thickness_mm: f64,
    pub refractive_index: f64,
}

impl PlateSpec {
    pub fn at(&self, tilt_deg: f64) -> GlassPlate {
        GlassPlate {
            thickness_mm: self.thickness_mm,
            refractive_index: self.refractive_index,
            tilt_deg,
        }
    }
}

/// Tilt grid, either an explicit list or `count` evenly spaced points.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tilt_deg: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

impl SweepSpec {
    pub fn range(start_deg: f64, stop_deg: f64, count: usize) -> Self {
        Self {
            tilt_deg: None,
            start_deg: Some(start_deg),
            stop_deg: Some(stop_deg),
            count: Some(count),
        }
    }

    pub fn list(tilt_deg: Vec<f64>) -> Self {
        Self {
            tilt_deg: Some(tilt_deg),
            ..Self::default()
        }
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        let pts = match (&self.tilt_deg, self.start_deg, self.stop_deg, self.count) {
            (Some(list), None, None, None) => list.clone(),
            (None, Some(a), Some(b), Some(n)) => linspace(a, b, n),
            (Some(_), ..) => {
                return Err(Error::Config(
                    "sweep: give either `tilt_deg` or `start_deg`/`stop_deg`/`count`, not both".into(),
                ))
            }
            (None, a, b, n) => {
                let missing = [
                    ("start_deg", a.is_none()),
                    ("stop_deg", b.is_none()),
                    ("count", n.is_none()),
                ]
                .iter()
                .filter(|(_, m)| *m)
                .map(|(f, _)| format!("`{f}`"))
                .collect::<Vec<_>>()
                .join(", ");
                return Err(Error::Config(format!("sweep: missing field {missing}")));
            }
        };
        if pts.is_empty() {
            return Err(invalid("sweep", "grid is empty"));
        }
        if pts.iter().any(|t| !t.is_finite()) {
            return Err(invalid("sweep", "grid contains non-finite values"));
        }
        let inc = pts.windows(2).all(|w| w[1] > w[0]);
        let dec = pts.windows(2).all(|w| w[1] < w[0]);
        if !(inc || dec) {
            return Err(invalid("sweep", "grid must be strictly monotone"));
        }
        Ok(pts)
    }
}

/// `count` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![start],
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            (0..count).map(|i| start + step * i as f64).collect()
        }
    }
}

/// Gaussian tilt dependence of the mode overlap, peaked at `center_deg`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverlapProfile {
    pub center_deg: f64,
    pub width_deg: f64,
}

/// Slow random-walk phase drift with occasional kicks, applied per sweep point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseDrift {
    pub walk_rad_per_point: f64,
    pub kick_probability: f64,
    pub kick_rad: f64,
    pub seed: u64,
}

impl PhaseDrift {
    pub fn offsets(&self, n: usize) -> Result<Vec<f64>> {
        if !(self.walk_rad_per_point >= 0.0) || !(0.0..=1.0).contains(&self.kick_probability) {
            return Err(invalid(
                "phase_drift",
                "walk must be ≥ 0 and kick probability in [0, 1]",
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let step = Normal::new(0.0, self.walk_rad_per_point).map_err(|e| invalid("phase_drift", e.to_string()))?;
        let mut acc = 0.0;
        Ok((0..n)
            .map(|_| {
                acc += step.sample(&mut rng);
                if rng.random::<f64>() < self.kick_probability {
                    acc += if rng.random::<bool>() {
                        self.kick_rad
                    } else {
                        -self.kick_rad
                    };
                }
                acc
            })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_max: usize,
    /// Squeezing of the first (type-II) source on `(H_t, V_aux)`.
    pub r1: f64,
    /// Squeezing of the second (type-0) source on `(V_t, V_aux)`.
    pub r2: f64,
    pub pump_relative_phase: f64,
    pub eta_t: f64,
    pub eta_aux: f64,
    pub overlap: f64,
    pub lambda_t_nm: f64,
    pub lambda_aux_nm: f64,
    pub lambda_classical_nm: f64,
    pub plate: PlateSpec,
    pub sweep: SweepSpec,
    #[serde(default = "DetectorSpec::intensity")]
    pub detector: DetectorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overlap_profile: Option<OverlapProfile>,
    /// Finite PBS extinction ratio in dB; absent means ideal routing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pbs_extinction_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_drift: Option<PhaseDrift>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lockin: Option<LockinConfig>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_max: 3,
            r1: 0.05,
            r2: 0.05,
            pump_relative_phase: 0.0,
            eta_t: 1.0,
            eta_aux: 1.0,
            overlap: 1.0,
            lambda_t_nm: 1563.0,
            lambda_aux_nm: 1557.0,
            lambda_classical_nm: 1560.0,
            plate: PlateSpec {
                thickness_mm: 1.0,
                refractive_index: 1.444,
            },
            sweep: SweepSpec::range(3.0, 12.0, 200),
            detector: DetectorSpec::intensity(),
            overlap_profile: None,
            pbs_extinction_db: None,
            phase_drift: None,
            lockin: None,
        }
    }
}

impl ExperimentConfig {
    /// Lossless, perfectly overlapped, weakly pumped sources.
    pub fn ideal() -> Self {
        Self {
            eta_t: 1.0,
            eta_aux: 1.0,
            overlap: 1.0,
            ..Self::default()
        }
    }

    /// Ideal sources read out through the photodiode lock-in chain at a few
    /// hundred fW of pair-beam power.
    pub fn fig4() -> Self {
        Self {
            lockin: Some(LockinConfig {
                signal_power_fw: 200.0,
                throughput: 0.25,
                ..LockinConfig::default()
            }),
            ..Self::ideal()
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_max < 1 {
            return Err(invalid("n_max", "must be ≥ 1"));
        }
        for (name, r) in [("r1", self.r1), ("r2", self.r2)] {
            if !(r >= 0.0 && r.is_finite()) {
                return Err(invalid(name, format!("{r} is not ≥ 0")));
            }
        }
        if !self.pump_relative_phase.is_finite() {
            return Err(invalid("pump_relative_phase", "must be finite"));
        }
        for (name, v) in [
            ("eta_t", self.eta_t),
            ("eta_aux", self.eta_aux),
            ("overlap", self.overlap),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(name, format!("{v} outside [0, 1]")));
            }
        }
        for (name, l) in [
            ("lambda_t_nm", self.lambda_t_nm),
            ("lambda_aux_nm", self.lambda_aux_nm),
            ("lambda_classical_nm", self.lambda_classical_nm),
        ] {
            if !(l > 0.0 && l.is_finite()) {
                return Err(invalid(name, format!("{l} is not > 0")));
            }
        }
        if self.lambda_t_nm == self.lambda_aux_nm {
            return Err(invalid("lambda_aux_nm", "target and auxiliary wavelengths must differ"));
        }
        self.plate.at(0.0).validate()?;
        for t in self.sweep.points()? {
            self.plate.at(t).validate()?;
        }
        self.detector.validate()?;
        if let Some(p) = &self.overlap_profile {
            if !(p.width_deg > 0.0) {
                return Err(invalid("overlap_profile.width_deg", "must be > 0"));
            }
        }
        if let Some(db) = self.pbs_extinction_db {
            if !(db > 0.0) {
                return Err(invalid("pbs_extinction_db", "must be > 0"));
            }
        }
        if let Some(lockin) = &self.lockin {
            lockin.validate()?;
        }
        Ok(())
    }

    pub fn tilts(&self) -> Result<Vec<f64>> {
        self.sweep.points()
    }

    pub fn overlap_at(&self, tilt_deg: f64) -> f64 {
        match &self.overlap_profile {
            None => self.overlap,
            Some(p) => self.overlap * (-((tilt_deg - p.center_deg) / p.width_deg).powi(2)).exp(),
        }
    }

    /// Rotator angle of the diagonal-basis projection, including the
    /// polarization error from a finite PBS extinction ratio.
    pub fn projection_angle(&self) -> f64 {
        let err = self
            .pbs_extinction_db
            .map(|db| 0.5 * 10f64.powf(-db / 20.0).atan())
            .unwrap_or(0.0);
        FRAC_PI_8 + err
    }

    /// Quantum-to-classical fringe frequency ratio `λc (1/λt + 1/λaux)`.
    pub fn frequency_ratio(&self) -> f64 {
        self.lambda_classical_nm * (1.0 / self.lambda_t_nm + 1.0 / self.lambda_aux_nm)
    }

    pub fn classical_phase_map(&self) -> PhaseMap {
        PhaseMap {
            thickness_mm: self.plate.thickness_mm,
            refractive_index: self.plate.refractive_index,
            wavelength_nm: self.lambda_classical_nm,
        }
    }

    fn phase_offsets(&self, n: usize) -> Result<Vec<f64>> {
        match &self.phase_drift {
            None => Ok(vec![0.0; n]),
            Some(d) => d.offsets(n),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XUnit {
    TiltDeg,
    PhaseRad,
}

/// Tilt → phase conversion through the plate model at one wavelength,
/// referenced to normal incidence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseMap {
    pub thickness_mm: f64,
    pub refractive_index: f64,
    pub wavelength_nm: f64,
}

impl PhaseMap {
    pub fn phase(&self, tilt_deg: f64) -> f64 {
        let plate = GlassPlate {
            thickness_mm: self.thickness_mm,
            refractive_index: self.refractive_index,
            tilt_deg,
        };
        let d_nm = self.thickness_mm * 1e6;
        2.0 * std::f64::consts::PI * d_nm / self.wavelength_nm * (plate.path_factor() - self.refractive_index)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub experiment: String,
    pub x_unit: XUnit,
    pub signal_unit: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_map: Option<PhaseMap>,
}

/// Swept intensities at the two output ports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FringeDataset {
    pub x: Vec<f64>,
    pub i_plus: Vec<f64>,
    pub i_minus: Vec<f64>,
    pub meta: DatasetMeta,
}

impl FringeDataset {
    pub fn new(x: Vec<f64>, i_plus: Vec<f64>, i_minus: Vec<f64>, meta: DatasetMeta) -> Result<Self> {
        let ds = Self {
            x,
            i_plus,
            i_minus,
            meta,
        };
        ds.validate()?;
        Ok(ds)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.x.len();
        if n == 0 {
            return Err(invalid("dataset", "no samples"));
        }
        for len in [self.i_plus.len(), self.i_minus.len()] {
            if len != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: len,
                });
            }
        }
        let all = self.x.iter().chain(&self.i_plus).chain(&self.i_minus);
        if all.clone().any(|v| !v.is_finite()) {
            return Err(invalid("dataset", "non-finite sample"));
        }
        if self.i_plus.iter().chain(&self.i_minus).any(|&v| v < 0.0) {
            return Err(invalid("dataset", "negative intensity"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn port(&self, port: Port) -> &[f64] {
        match port {
            Port::Plus => &self.i_plus,
            Port::Minus => &self.i_minus,
        }
    }

    /// Sweep coordinate in phase units: tilt-swept data is mapped through
    /// the plate model, phase-swept data is returned unchanged.
    pub fn phase_axis(&self) -> Result<Vec<f64>> {
        match (self.meta.x_unit, &self.meta.phase_map) {
            (XUnit::PhaseRad, _) => Ok(self.x.clone()),
            (XUnit::TiltDeg, Some(map)) => Ok(self.x.iter().map(|&t| map.phase(t)).collect()),
            (XUnit::TiltDeg, None) => Err(invalid("dataset", "tilt-swept data without a phase map")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Port {
    Plus,
    Minus,
}

/// `(1 ± V cos φ)/2`.
pub fn ideal_intensity(phi: f64, visibility: f64, port: Port) -> f64 {
    match port {
        Port::Plus => 0.5 * (1.0 + visibility * phi.cos()),
        Port::Minus => 0.5 * (1.0 - visibility * phi.cos()),
    }
}

/// Mode labels of the two-source setup.
#[derive(Clone, Debug)]
pub struct SetupModes {
    pub h_t: ModeLabel,
    pub v_t: ModeLabel,
    pub v_aux: ModeLabel,
}

impl SetupModes {
    pub fn new(lambda_t_nm: f64, lambda_aux_nm: f64) -> Self {
        Self {
            h_t: ModeLabel::h(lambda_t_nm, TARGET_PATH),
            v_t: ModeLabel::v(lambda_t_nm, TARGET_PATH),
            v_aux: ModeLabel::v(lambda_aux_nm, AUX_PATH),
        }
    }

    pub fn target(&self) -> [ModeLabel; 2] {
        [self.h_t.clone(), self.v_t.clone()]
    }
}

/// The two-source setup with its gates built once.
pub struct QuantumPipeline {
    config: ExperimentConfig,
    modes: SetupModes,
    register: ModeRegister,
    source_1: Gate,
    source_2: Gate,
    /// Polarization rotator on the target modes at cutoff `2 n_max`.
    rotator: Gate,
}

impl QuantumPipeline {
    pub fn new(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let modes = SetupModes::new(config.lambda_t_nm, config.lambda_aux_nm);
        let register = ModeRegister::new(
            vec![modes.h_t.clone(), modes.v_t.clone(), modes.v_aux.clone()],
            config.n_max,
        )?;
        Ok(Self {
            source_1: squeezer_gate(config.n_max, config.r1, 0.0)?,
            source_2: squeezer_gate(config.n_max, config.r2, config.pump_relative_phase)?,
            rotator: beam_splitter_gate(2 * config.n_max, -2.0 * config.projection_angle(), 0.0)?,
            config: config.clone(),
            modes,
            register,
        })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    pub fn modes(&self) -> &SetupModes {
        &self.modes
    }

    pub fn register(&self) -> &ModeRegister {
        &self.register
    }

    /// Single-photon phases `(φ_t, φ_aux)` picked up in the plate.
    pub fn plate_phases(&self, tilt_deg: f64) -> (f64, f64) {
        let plate = self.config.plate.at(tilt_deg);
        (
            plate.phase(self.config.lambda_t_nm),
            plate.phase(self.config.lambda_aux_nm),
        )
    }

    /// Three-mode state after the second source.
    pub fn source_state(&self, phi_t: f64, phi_aux: f64) -> Result<QuantumState> {
        let m = &self.modes;
        let n_max = self.config.n_max;
        let psi = PureState::vacuum(&self.register).apply_two_mode_gate(&m.h_t, &m.v_aux, &self.source_1)?;
        let psi = psi
            .apply_one_mode_gate(&m.h_t, &phase_gate(n_max, phi_t)?)?
            .apply_one_mode_gate(&m.v_aux, &phase_gate(n_max, phi_aux)?)?;
        let mut state = QuantumState::Pure(psi);
        if self.config.eta_t < 1.0 {
            state = loss_channel(state, &m.h_t, self.config.eta_t)?.into();
        }
        if self.config.eta_aux < 1.0 {
            state = loss_channel(state, &m.v_aux, self.config.eta_aux)?.into();
        }
        let state = state.apply_two_mode_gate(&m.v_t, &m.v_aux, &self.source_2)?;
        let population = state.top_layer_population();
        if population > TRUNCATION_LIMIT {
            return Err(Error::Truncation {
                population,
                n_max,
                limit: TRUNCATION_LIMIT,
            });
        }
        Ok(state)
    }

    /// Target-mode state after discarding the auxiliary photon, with the
    /// mode overlap applied as dephasing of `H_t`.
    pub fn target_state(&self, phi_t: f64, phi_aux: f64, overlap: f64) -> Result<MixedState> {
        let target = self.source_state(phi_t, phi_aux)?.partial_trace(&self.modes.target())?;
        if overlap < 1.0 {
            dephase(target, &self.modes.h_t, overlap)
        } else {
            Ok(target)
        }
    }

    pub fn auxiliary_state(&self, phi_t: f64, phi_aux: f64) -> Result<MixedState> {
        self.source_state(phi_t, phi_aux)?
            .partial_trace(std::slice::from_ref(&self.modes.v_aux))
    }

    /// Port signals `(D₊, D₋)` for given single-photon phases.
    pub fn ports(&self, phi_t: f64, phi_aux: f64, overlap: f64) -> Result<(f64, f64)> {
        let target = self.target_state(phi_t, phi_aux, overlap)?;
        let out = target.with_cutoff(2 * self.config.n_max)?.apply_two_mode_gate(
            &self.modes.h_t,
            &self.modes.v_t,
            &self.rotator,
        )?;
        read_ports(&out, &self.modes.h_t, &self.modes.v_t, &self.config.detector)
    }

    pub fn ports_at_tilt(&self, tilt_deg: f64, extra_phase: f64) -> Result<(f64, f64)> {
        let (phi_t, phi_aux) = self.plate_phases(tilt_deg);
        self.ports(phi_t + extra_phase, phi_aux, self.config.overlap_at(tilt_deg))
    }

    /// Ports when the classical reference would see phase `x`; the
    /// single-photon phases scale with inverse wavelength.
    pub fn ports_at_classical_phase(&self, x: f64) -> Result<(f64, f64)> {
        let c = &self.config;
        self.ports(
            x * c.lambda_classical_nm / c.lambda_t_nm,
            x * c.lambda_classical_nm / c.lambda_aux_nm,
            c.overlap,
        )
    }
}

fn read_ports(rho: &MixedState, plus: &ModeLabel, minus: &ModeLabel, spec: &DetectorSpec) -> Result<(f64, f64)> {
    let read = |mode: &ModeLabel| -> Result<f64> {
        match spec.kind {
            DetectorKind::Intensity => Ok(spec.quantum_efficiency * intensity(rho, mode)?),
            DetectorKind::ThresholdSpd => click_probability(rho, mode, spec),
            other => Err(Error::Config(format!(
                "detector kind {other:?} does not produce a per-port fringe signal"
            ))),
        }
    };
    Ok((read(plus)?, read(minus)?))
}

/// Tilt sweep of the two-source setup.
pub fn run_quantum_sweep(config: &ExperimentConfig) -> Result<FringeDataset> {
    let pipeline = QuantumPipeline::new(config)?;
    let tilts = config.tilts()?;
    let offsets = config.phase_offsets(tilts.len())?;
    let ports = tilts
        .par_iter()
        .zip(offsets.par_iter())
        .map(|(&t, &off)| pipeline.ports_at_tilt(t, off))
        .collect::<Result<Vec<_>>>()?;
    let (i_plus, i_minus) = ports.into_iter().unzip();
    FringeDataset::new(
        tilts,
        i_plus,
        i_minus,
        DatasetMeta {
            experiment: "quantum".into(),
            x_unit: XUnit::TiltDeg,
            signal_unit: signal_unit(&config.detector).into(),
            phase_map: Some(config.classical_phase_map()),
        },
    )
}

fn signal_unit(spec: &DetectorSpec) -> &'static str {
    match spec.kind {
        DetectorKind::ThresholdSpd => "click_probability",
        _ => "photons",
    }
}

/// Classical Mach-Zehnder reference at `lambda_classical_nm`:
/// `I± = (1 ± cos φ_c(θ))/2`.
pub fn run_classical_sweep(config: &ExperimentConfig) -> Result<FringeDataset> {
    config.validate()?;
    let tilts = config.tilts()?;
    let offsets = config.phase_offsets(tilts.len())?;
    let phases: Vec<f64> = tilts
        .iter()
        .zip(&offsets)
        .map(|(&t, &off)| config.plate.at(t).phase(config.lambda_classical_nm) + off)
        .collect();
    FringeDataset::new(
        tilts,
        phases.iter().map(|&p| ideal_intensity(p, 1.0, Port::Plus)).collect(),
        phases.iter().map(|&p| ideal_intensity(p, 1.0, Port::Minus)).collect(),
        DatasetMeta {
            experiment: "classical".into(),
            x_unit: XUnit::TiltDeg,
            signal_unit: "normalized".into(),
            phase_map: Some(config.classical_phase_map()),
        },
    )
}

/// Mode labels used by the N-photon protocol.
pub fn noon_modes() -> SetupModes {
    SetupModes::new(1563.0, 1557.0)
}

/// N-photon protocol: a target photon in superposition of `H` and `V`,
/// where only the `H` branch shares the phase object with `N − 1`
/// auxiliary photons. After discarding the auxiliary photons the target
/// carries the full `Nφ` phase, read out in the diagonal basis.
pub fn run_noon_protocol(n: usize, phi_grid: &[f64]) -> Result<FringeDataset> {
    if n < 1 {
        return Err(invalid("n", "photon number must be ≥ 1"));
    }
    if phi_grid.is_empty() {
        return Err(invalid("phi_grid", "grid is empty"));
    }
    let modes = noon_modes();
    let reg = ModeRegister::new(
        vec![modes.h_t.clone(), modes.v_t.clone(), modes.v_aux.clone()],
        (n - 1).max(1),
    )?;
    let branch_1 = PureState::fock(&reg, &[1, 0, n - 1])?;
    let branch_2 = PureState::fock(&reg, &[0, 1, n - 1])?;
    let amp = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let ports = phi_grid
        .par_iter()
        .map(|&phi| -> Result<(f64, f64)> {
            let shifted = phase_shifter(&branch_1, &modes.h_t, phi)?;
            let shifted = phase_shifter(&shifted, &modes.v_aux, phi)?;
            let psi = PureState::superpose(&[(amp, &shifted), (amp, &branch_2)])?;
            let target = psi.to_density().partial_trace(&modes.target())?;
            let out = polarization_rotator(&target, modes.h_t.wavelength_nm, TARGET_PATH, FRAC_PI_8)?;
            Ok((intensity(&out, &modes.h_t)?, intensity(&out, &modes.v_t)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let (i_plus, i_minus) = ports.into_iter().unzip();
    FringeDataset::new(
        phi_grid.to_vec(),
        i_plus,
        i_minus,
        DatasetMeta {
            experiment: format!("noon-{n}"),
            x_unit: XUnit::PhaseRad,
            signal_unit: "photons".into(),
            phase_map: None,
        },
    )
}

/// Parity of one output of a balanced beam splitter fed with the N00N
/// state `(|N,0⟩ + e^{iNφ}|0,N⟩)/√2`.
pub fn noon_parity(n: usize, phi: f64) -> Result<f64> {
    if n < 1 {
        return Err(invalid("n", "photon number must be ≥ 1"));
    }
    let a = ModeLabel::h(1560.0, "noon");
    let b = ModeLabel::v(1560.0, "noon");
    let reg = ModeRegister::new(vec![a.clone(), b.clone()], n)?;
    let amp = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let left = PureState::fock(&reg, &[n, 0])?;
    let right = phase_shifter(&PureState::fock(&reg, &[0, n])?, &b, phi)?;
    let noon = PureState::superpose(&[(amp, &left), (amp, &right)])?;
    let out = beam_splitter(&noon, &a, &b, std::f64::consts::FRAC_PI_4, 0.0)?;
    crate::detection::parity_expectation(&out.to_density(), &a)
}

/// Overlap that brings the fitted visibility of `config` to `target`.
///
/// The overlap multiplies the interference term only, so the visibility
/// is linear in it.
pub fn calibrate_overlap(config: &ExperimentConfig, target: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&target) {
        return Err(invalid("target", format!("{target} outside [0, 1]")));
    }
    let full = ExperimentConfig {
        overlap: 1.0,
        overlap_profile: None,
        ..config.clone()
    };
    let v = crate::analysis::fit_fringe(&run_quantum_sweep(&full)?, Port::Plus)?.v;
    if v < target {
        return Err(invalid(
            "target",
            format!("visibility {v:.6} at perfect overlap is already below {target}"),
        ));
    }
    Ok(target / v)
}
