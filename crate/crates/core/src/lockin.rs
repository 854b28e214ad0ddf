// Copyright 2026 The tpsense Authors
// SPDX-License-Identifier: Apache-2.0

//! Photodiode readout through a chopper and a dual-phase lock-in amplifier.
//!
//! The optical signal is square-wave modulated, white detector noise with a
//! one-sided power spectral density `NEP²` is added, and the series is mixed
//! with `e^{−iωt}` and passed through a single-pole low-pass filter. The
//! recovered amplitude is the magnitude `R` of the filtered output divided
//! by the fundamental Fourier coefficient of the chopper waveform, which is
//! `sin(πD)/π` for duty cycle `D` (`2/π · D` at `D = ½`). Each sample holds
//! the open fraction of its interval, so at finite sample rates the
//! coefficient is further scaled by `sinc(π f_chop / f_s)`; it is computed
//! from the sampled waveform itself.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::experiment::{DatasetMeta, FringeDataset};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LockinConfig {
    /// Photon-pair beam power in fW.
    pub signal_power_fw: f64,
    /// Fraction of the pair-beam power reaching a detector at a fringe
    /// maximum.
    #[serde(default = "unit")]
    pub throughput: f64,
    pub chop_freq_hz: f64,
    pub duty: f64,
    pub nep_fw_per_sqrt_hz: f64,
    pub time_constant_s: f64,
    pub sample_rate_hz: f64,
    pub duration_s: f64,
    pub rng_seed: u64,
}

fn unit() -> f64 {
    1.0
}

impl Default for LockinConfig {
    fn default() -> Self {
        Self {
            signal_power_fw: 300.0,
            throughput: 1.0,
            chop_freq_hz: 600.0,
            duty: 0.5,
            nep_fw_per_sqrt_hz: 23.0,
            time_constant_s: 3.0,
            sample_rate_hz: 2500.0,
            duration_s: 15.0,
            rng_seed: 0,
        }
    }
}

impl LockinConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("chop_freq_hz", self.chop_freq_hz),
            ("time_constant_s", self.time_constant_s),
            ("sample_rate_hz", self.sample_rate_hz),
            ("duration_s", self.duration_s),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(name, format!("{v} is not > 0")));
            }
        }
        if !(self.signal_power_fw >= 0.0 && self.signal_power_fw.is_finite()) {
            return Err(invalid("signal_power_fw", "must be ≥ 0"));
        }
        if !(self.nep_fw_per_sqrt_hz >= 0.0 && self.nep_fw_per_sqrt_hz.is_finite()) {
            return Err(invalid("nep_fw_per_sqrt_hz", "must be ≥ 0"));
        }
        if !(0.0..=1.0).contains(&self.throughput) {
            return Err(invalid("throughput", format!("{} outside [0, 1]", self.throughput)));
        }
        if !(self.duty > 0.0 && self.duty < 1.0) {
            return Err(invalid("duty", format!("{} outside (0, 1)", self.duty)));
        }
        if !(self.sample_rate_hz > 4.0 * self.chop_freq_hz) {
            return Err(invalid(
                "sample_rate_hz",
                "must exceed four times the chopper frequency",
            ));
        }
        if !(self.duration_s >= 5.0 * self.time_constant_s) {
            return Err(invalid("duration_s", "must cover at least five time constants"));
        }
        Ok(())
    }

    pub fn sample_count(&self) -> usize {
        (self.sample_rate_hz * self.duration_s).round() as usize
    }

    /// Standard deviation of one noise sample: `NEP · √(f_s/2)`.
    pub fn noise_sigma(&self) -> f64 {
        self.nep_fw_per_sqrt_hz * (0.5 * self.sample_rate_hz).sqrt()
    }

    /// Continuous-time fundamental coefficient `sin(πD)/π`.
    pub fn ideal_calibration(&self) -> f64 {
        (PI * self.duty).sin() / PI
    }
}

/// Precomputed chopper and reference waveforms for one configuration.
pub struct LockinChain {
    cfg: LockinConfig,
    chop: Vec<f64>,
    reference: Vec<Complex64>,
    calibration: Complex64,
}

impl LockinChain {
    pub fn new(cfg: &LockinConfig) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.sample_count();
        let dt = 1.0 / cfg.sample_rate_hz;
        let open_time = |t: f64| {
            let cycles = t * cfg.chop_freq_hz;
            (cycles.floor() * cfg.duty + cycles.fract().min(cfg.duty)) / cfg.chop_freq_hz
        };
        let chop: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 * dt;
                ((open_time(t + dt) - open_time(t)) / dt).clamp(0.0, 1.0)
            })
            .collect();
        let omega = 2.0 * PI * cfg.chop_freq_hz;
        let reference: Vec<Complex64> = (0..n)
            .map(|i| Complex64::from_polar(1.0, -omega * i as f64 * dt))
            .collect();
        let calibration = chop.iter().zip(&reference).map(|(c, r)| r * c).sum::<Complex64>() / n as f64;
        Ok(Self {
            cfg: *cfg,
            chop,
            reference,
            calibration,
        })
    }

    pub fn config(&self) -> &LockinConfig {
        &self.cfg
    }

    /// Open fraction of each sample interval.
    pub fn chop(&self) -> &[f64] {
        &self.chop
    }

    /// Fundamental Fourier coefficient of the sampled chopper waveform.
    pub fn calibration(&self) -> Complex64 {
        self.calibration
    }

    /// Settled standard deviation of one calibrated output quadrature for
    /// `τ ≫ 1/f_s`: `NEP / (|c| √(8τ))`.
    pub fn output_sigma(&self) -> f64 {
        self.cfg.nep_fw_per_sqrt_hz / (self.calibration.norm() * (8.0 * self.cfg.time_constant_s).sqrt())
    }

    /// Chopped signal plus detector noise, from noise stream `stream`.
    pub fn synthesize(&self, power_fw: f64, stream: u64) -> Result<Vec<f64>> {
        if !(power_fw >= 0.0 && power_fw.is_finite()) {
            return Err(invalid("power_fw", format!("{power_fw} is not ≥ 0")));
        }
        let sigma = self.cfg.noise_sigma();
        let mut out: Vec<f64> = self.chop.iter().map(|c| power_fw * c).collect();
        if sigma > 0.0 {
            let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.rng_seed);
            rng.set_stream(stream);
            let noise = Normal::new(0.0, sigma).map_err(|e| invalid("nep_fw_per_sqrt_hz", e.to_string()))?;
            for v in &mut out {
                *v += noise.sample(&mut rng);
            }
        }
        Ok(out)
    }

    /// Mixer and single-pole low-pass; returns the last filtered sample.
    pub fn filter(&self, series: &[f64]) -> Result<Complex64> {
        if series.len() != self.reference.len() {
            return Err(crate::Error::DimensionMismatch {
                expected: self.reference.len(),
                actual: series.len(),
            });
        }
        let alpha = -(-1.0 / (self.cfg.sample_rate_hz * self.cfg.time_constant_s)).exp_m1();
        let mut y = Complex64::new(0.0, 0.0);
        for (x, r) in series.iter().zip(&self.reference) {
            y += (r * x - y) * alpha;
        }
        Ok(y)
    }

    /// Filter output in optical-power units (complex, phase-referenced to
    /// the chopper).
    pub fn output(&self, series: &[f64]) -> Result<Complex64> {
        Ok(self.filter(series)? / self.calibration)
    }

    /// Recovered optical power `R`.
    pub fn demodulate(&self, series: &[f64]) -> Result<f64> {
        Ok(self.output(series)?.norm())
    }
}

/// Chopped signal with detector noise; deterministic for a fixed seed.
pub fn synthesize_timeseries(cfg: &LockinConfig, power_fw: f64) -> Result<Vec<f64>> {
    LockinChain::new(cfg)?.synthesize(power_fw, 0)
}

/// Recovered optical power of a time series.
pub fn lock_in_demodulate(series: &[f64], cfg: &LockinConfig) -> Result<f64> {
    LockinChain::new(cfg)?.demodulate(series)
}

/// Replace each port signal of `ds` by its lock-in reading.
///
/// The largest total `I₊ + I₋` in the dataset is mapped to
/// `signal_power_fw · throughput`. Each point and port draws its own
/// noise stream.
pub fn lockin_sweep(ds: &FringeDataset, cfg: &LockinConfig) -> Result<FringeDataset> {
    ds.validate()?;
    let chain = LockinChain::new(cfg)?;
    let peak = ds
        .i_plus
        .iter()
        .zip(&ds.i_minus)
        .map(|(p, m)| p + m)
        .fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(invalid("dataset", "no optical power to scale"));
    }
    let scale = cfg.signal_power_fw * cfg.throughput / peak;
    let read = |i: usize, port: u64, value: f64| -> Result<f64> {
        let series = chain.synthesize(scale * value, 2 * i as u64 + port)?;
        chain.demodulate(&series)
    };
    let out = (0..ds.len())
        .into_par_iter()
        .map(|i| Ok((read(i, 0, ds.i_plus[i])?, read(i, 1, ds.i_minus[i])?)))
        .collect::<Result<Vec<_>>>()?;
    let (i_plus, i_minus) = out.into_iter().unzip();
    FringeDataset::new(
        ds.x.clone(),
        i_plus,
        i_minus,
        DatasetMeta {
            experiment: format!("lockin:{}", ds.meta.experiment),
            x_unit: ds.meta.x_unit,
            signal_unit: "fW".into(),
            phase_map: ds.meta.phase_map,
        },
    )
}

/// One-sided power spectral density by averaging periodograms of
/// non-overlapping rectangular segments. Returns `(frequency_hz, psd)`.
pub fn estimate_psd(series: &[f64], sample_rate_hz: f64, segment: usize) -> Vec<(f64, f64)> {
    let fft = FftPlanner::new().plan_fft_forward(segment);
    let count = series.len() / segment;
    let mut acc = vec![0.0; segment / 2 + 1];
    for chunk in series.chunks_exact(segment) {
        let mean = chunk.iter().sum::<f64>() / segment as f64;
        let mut buf: Vec<Complex64> = chunk.iter().map(|&v| Complex64::new(v - mean, 0.0)).collect();
        fft.process(&mut buf);
        for (a, c) in acc.iter_mut().zip(&buf) {
            *a += c.norm_sqr();
        }
    }
    let norm = 2.0 / (sample_rate_hz * segment as f64 * count.max(1) as f64);
    acc.iter()
        .enumerate()
        .map(|(i, a)| (i as f64 * sample_rate_hz / segment as f64, a * norm))
        .collect()
}
