// Copyright 2026 The tpsense Authors
// SPDX-License-Identifier: Apache-2.0

//! Fringe fitting and the figures of merit derived from it.
//!
//! The fit model is `A (1 + V cos(k x + x₀))` with `k` an angular frequency
//! in radians per unit of `x`. The frequency is seeded from the peak of a
//! zero-padded spectrum of the uniformly resampled data, refined by a
//! golden-section search on the variable-projection residual, and then all
//! four parameters are polished with Levenberg-Marquardt.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::experiment::{run_quantum_sweep, ExperimentConfig, FringeDataset, Port};

pub const MIN_FRINGES: f64 = 2.0;
pub const MIN_POINTS_PER_PERIOD: f64 = 8.0;
const RESAMPLE_FACTOR: usize = 4;
const PAD_FACTOR: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FringeFit {
    pub a: f64,
    pub v: f64,
    pub k: f64,
    pub x0: f64,
    pub err_a: f64,
    pub err_v: f64,
    pub err_k: f64,
    pub err_x0: f64,
    pub rms: f64,
    pub n_points: usize,
}

impl FringeFit {
    pub fn model(&self, x: f64) -> f64 {
        self.a * (1.0 + self.v * (self.k * x + self.x0).cos())
    }

    /// Error unless the visibility exceeds `n_sigma` standard errors.
    pub fn require_significant(&self, n_sigma: f64) -> Result<&Self> {
        if self.v > n_sigma * self.err_v {
            Ok(self)
        } else {
            Err(Error::FitDidNotConverge(format!(
                "visibility {:.4} is not significant against its standard error {:.4}",
                self.v, self.err_v
            )))
        }
    }
}

fn wrap_phase(p: f64) -> f64 {
    let w = p.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

fn is_flat(y: &[f64]) -> bool {
    let (lo, hi) = y
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    let scale = y.iter().map(|v| v.abs()).fold(0.0, f64::max);
    hi - lo <= 1e-12 * scale.max(f64::MIN_POSITIVE)
}

/// Sorted, centered copy of the samples and the center that was removed.
fn prepare(x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    if x.len() < 5 {
        return Err(invalid(
            "samples",
            format!("{} points cannot constrain 4 parameters", x.len()),
        ));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(invalid("samples", "non-finite value"));
    }
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&i, &j| x[i].total_cmp(&x[j]));
    if idx.windows(2).any(|w| x[w[0]] == x[w[1]]) {
        return Err(invalid("samples", "repeated x value"));
    }
    let center = x.iter().sum::<f64>() / x.len() as f64;
    Ok((
        idx.iter().map(|&i| x[i] - center).collect(),
        idx.iter().map(|&i| y[i]).collect(),
        center,
    ))
}

fn interpolate(u: &[f64], y: &[f64], at: f64) -> f64 {
    let j = u.partition_point(|&v| v <= at).clamp(1, u.len() - 1);
    let (u0, u1) = (u[j - 1], u[j]);
    let t = (at - u0) / (u1 - u0);
    y[j - 1] + t * (y[j] - y[j - 1])
}

/// Index of the strongest non-DC bin of `|FFT(y − ȳ)|²` over the first
/// half of the spectrum; ties go to the lower frequency.
pub fn dominant_fft_bin(y: &[f64]) -> usize {
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let mut buf: Vec<Complex<f64>> = y.iter().map(|&v| Complex::new(v - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    let mut best = (1, f64::NEG_INFINITY);
    for (i, c) in buf.iter().enumerate().take(buf.len() / 2 + 1).skip(1) {
        let p = c.norm_sqr();
        if p > best.1 * (1.0 + 1e-12) {
            best = (i, p);
        }
    }
    best.0
}

/// Angular frequency of the spectral peak of possibly non-uniform samples
/// and the padded-bin width used to find it.
pub fn dominant_frequency(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let (u, y, _) = prepare(x, y)?;
    Ok(seed_frequency(&u, &y))
}

fn seed_frequency(u: &[f64], y: &[f64]) -> (f64, f64) {
    let m = RESAMPLE_FACTOR * u.len();
    let (lo, hi) = (u[0], u[u.len() - 1]);
    let du = (hi - lo) / (m - 1) as f64;
    let mut grid: Vec<f64> = (0..m).map(|i| interpolate(u, y, lo + du * i as f64)).collect();
    grid.resize(m * PAD_FACTOR, f64::NAN);
    let mean = grid[..m].iter().sum::<f64>() / m as f64;
    for v in &mut grid {
        *v = if v.is_nan() { mean } else { *v };
    }
    let bin = dominant_fft_bin(&grid);
    let dk = 2.0 * PI / (grid.len() as f64 * du);
    (bin as f64 * dk, dk)
}

/// Linear least squares of `y ≈ c₀ + c₁ cos ku + c₂ sin ku`.
fn linear_fit(u: &[f64], y: &[f64], k: f64) -> Option<(Vector3<f64>, f64)> {
    let mut ata = Matrix3::zeros();
    let mut aty = Vector3::zeros();
    for (&ui, &yi) in u.iter().zip(y) {
        let (s, c) = (k * ui).sin_cos();
        let row = Vector3::new(1.0, c, s);
        ata += row * row.transpose();
        aty += row * yi;
    }
    let coef = ata.cholesky()?.solve(&aty);
    let ssr = u
        .iter()
        .zip(y)
        .map(|(&ui, &yi)| {
            let (s, c) = (k * ui).sin_cos();
            (coef[0] + coef[1] * c + coef[2] * s - yi).powi(2)
        })
        .sum();
    Some((coef, ssr))
}

fn golden_section(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (hi - lo).abs() <= 1e-14 * (hi.abs() + lo.abs()) {
            break;
        }
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

struct Solution {
    p: [f64; 4],
    ssr: f64,
    jtj: DMatrix<f64>,
}

/// Levenberg-Marquardt over the free subset of `(A, V, k, φ₀)`.
fn levenberg_marquardt(u: &[f64], y: &[f64], start: [f64; 4], free: [bool; 4]) -> Result<Solution> {
    let free_idx: Vec<usize> = (0..4).filter(|&i| free[i]).collect();
    let nf = free_idx.len();
    let eval = |p: &[f64; 4]| -> (DVector<f64>, DMatrix<f64>) {
        let mut r = DVector::zeros(u.len());
        let mut j = DMatrix::zeros(u.len(), nf);
        for (i, &ui) in u.iter().enumerate() {
            let (s, c) = (p[2] * ui + p[3]).sin_cos();
            r[i] = p[0] * (1.0 + p[1] * c) - y[i];
            let grad = [1.0 + p[1] * c, p[0] * c, -p[0] * p[1] * s * ui, -p[0] * p[1] * s];
            for (col, &g) in free_idx.iter().enumerate() {
                j[(i, col)] = grad[g];
            }
        }
        (r, j)
    };
    let mut p = start;
    let (mut r, mut j) = eval(&p);
    let mut ssr = r.norm_squared();
    let mut lambda = 1e-3;
    for _ in 0..500 {
        let jtj = j.transpose() * &j;
        let g = j.transpose() * &r;
        let mut improved = false;
        while lambda < 1e16 {
            let mut damped = jtj.clone();
            for d in 0..nf {
                damped[(d, d)] += lambda * jtj[(d, d)].max(1e-300);
            }
            let Some(step) = damped.clone().cholesky().map(|c| c.solve(&(-&g))) else {
                lambda *= 10.0;
                continue;
            };
            let mut trial = p;
            for (col, &i) in free_idx.iter().enumerate() {
                trial[i] += step[col];
            }
            let (tr, tj) = eval(&trial);
            let tssr = tr.norm_squared();
            if tssr.is_finite() && tssr <= ssr {
                let small = free_idx
                    .iter()
                    .enumerate()
                    .all(|(col, &i)| step[col].abs() <= 1e-14 * (p[i].abs() + 1e-12));
                let stalled = ssr - tssr <= 1e-15 * ssr;
                p = trial;
                r = tr;
                j = tj;
                ssr = tssr;
                lambda = (lambda / 10.0).max(1e-12);
                improved = !(small || stalled);
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    if !(p.iter().all(|v| v.is_finite()) && ssr.is_finite()) {
        return Err(Error::FitDidNotConverge("non-finite parameters".into()));
    }
    Ok(Solution {
        p,
        ssr,
        jtj: j.transpose() * j,
    })
}

fn standard_errors(sol: &Solution, free: [bool; 4], n: usize) -> [f64; 4] {
    let nf = free.iter().filter(|&&f| f).count();
    let dof = n.saturating_sub(nf).max(1) as f64;
    let s2 = sol.ssr / dof;
    let mut out = [0.0; 4];
    if let Some(inv) = sol.jtj.clone().try_inverse() {
        let mut col = 0;
        for (i, f) in free.iter().enumerate() {
            if *f {
                out[i] = (s2 * inv[(col, col)]).max(0.0).sqrt();
                col += 1;
            }
        }
    } else {
        out = [f64::INFINITY; 4];
    }
    out
}

fn check_sampling(u: &[f64], k: f64) -> Result<()> {
    let span = u[u.len() - 1] - u[0];
    let fringes = k * span / (2.0 * PI);
    if fringes < MIN_FRINGES {
        return Err(Error::TooFewFringes {
            fringes,
            required: MIN_FRINGES,
        });
    }
    let max_gap = u.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let points_per_period = 2.0 * PI / (k * max_gap);
    if points_per_period < MIN_POINTS_PER_PERIOD {
        return Err(Error::Undersampled {
            points_per_period,
            required: MIN_POINTS_PER_PERIOD,
        });
    }
    Ok(())
}

fn finish(u: &[f64], y: &[f64], center: f64, start: [f64; 4], fix_k: bool) -> Result<FringeFit> {
    let n = u.len();
    let free = [true, true, !fix_k, true];
    let sol = levenberg_marquardt(u, y, start, free)?;
    let mut p = sol.p;
    let errs = standard_errors(&sol, free, n);
    if p[1] < 0.0 {
        p[1] = -p[1];
        p[3] += PI;
    }
    if p[2] < 0.0 {
        p[2] = -p[2];
        p[3] = -p[3];
    }
    let mut ssr = sol.ssr;
    if p[1] > 1.0 {
        let capped = levenberg_marquardt(u, y, [p[0], 1.0, p[2], p[3]], [true, false, !fix_k, true])?;
        p = capped.p;
        ssr = capped.ssr;
    }
    check_sampling(u, p[2])?;
    Ok(FringeFit {
        a: p[0],
        v: p[1],
        k: p[2],
        x0: wrap_phase(p[3] - p[2] * center),
        err_a: errs[0],
        err_v: errs[1],
        err_k: errs[2],
        err_x0: errs[3],
        rms: (ssr / n as f64).sqrt(),
        n_points: n,
    })
}

fn start_from_linear(coef: Vector3<f64>, k: f64) -> [f64; 4] {
    let amp = coef[1].hypot(coef[2]);
    let a = coef[0];
    [a, if a != 0.0 { amp / a } else { 0.0 }, k, (-coef[2]).atan2(coef[1])]
}

/// Fit `A (1 + V cos(k x + x₀))` to arbitrary samples.
pub fn fit_samples(x: &[f64], y: &[f64]) -> Result<FringeFit> {
    let (u, y, center) = prepare(x, y)?;
    if is_flat(&y) {
        return Err(Error::FitDidNotConverge("data are flat; no fringe to fit".into()));
    }
    let (k_seed, dk) = seed_frequency(&u, &y);
    let ssr_at = |k: f64| linear_fit(&u, &y, k).map_or(f64::INFINITY, |(_, s)| s);
    let k = golden_section((k_seed - 2.0 * dk).max(0.25 * dk), k_seed + 2.0 * dk, ssr_at);
    let (coef, _) = linear_fit(&u, &y, k).ok_or_else(|| Error::FitDidNotConverge("singular design".into()))?;
    finish(&u, &y, center, start_from_linear(coef, k), false)
}

/// Fit with the angular frequency held at `k`. Flat data yield `V = 0`.
pub fn fit_samples_with_frequency(x: &[f64], y: &[f64], k: f64) -> Result<FringeFit> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(invalid("k", format!("{k} is not > 0")));
    }
    let (u, y, center) = prepare(x, y)?;
    if is_flat(&y) {
        check_sampling(&u, k)?;
        let a = y.iter().sum::<f64>() / y.len() as f64;
        return Ok(FringeFit {
            a,
            v: 0.0,
            k,
            x0: 0.0,
            err_a: 0.0,
            err_v: 0.0,
            err_k: 0.0,
            err_x0: 0.0,
            rms: (y.iter().map(|v| (v - a).powi(2)).sum::<f64>() / y.len() as f64).sqrt(),
            n_points: y.len(),
        });
    }
    let (coef, _) = linear_fit(&u, &y, k).ok_or_else(|| Error::FitDidNotConverge("singular design".into()))?;
    finish(&u, &y, center, start_from_linear(coef, k), true)
}

/// Fit one port of a dataset in the phase domain.
pub fn fit_fringe(ds: &FringeDataset, port: Port) -> Result<FringeFit> {
    ds.validate()?;
    fit_samples(&ds.phase_axis()?, ds.port(port))
}

pub fn fit_fringe_with_frequency(ds: &FringeDataset, port: Port, k: f64) -> Result<FringeFit> {
    ds.validate()?;
    fit_samples_with_frequency(&ds.phase_axis()?, ds.port(port), k)
}

pub fn fringe_frequency_ratio(quantum: &FringeFit, classical: &FringeFit) -> f64 {
    quantum.k / classical.k
}

/// Fitted visibility with equal transmission `η` for the target and
/// auxiliary modes between the two sources.
pub fn visibility_vs_transmission(etas: &[f64], config: &ExperimentConfig) -> Result<Vec<(f64, f64)>> {
    etas.iter()
        .map(|&eta| {
            let cfg = ExperimentConfig {
                eta_t: eta,
                eta_aux: eta,
                ..config.clone()
            };
            let ds = run_quantum_sweep(&cfg)?;
            let v = if is_flat(&ds.i_plus) {
                0.0
            } else {
                fit_fringe(&ds, Port::Plus)?.v
            };
            Ok((eta, v))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseUncertainty {
    /// `1/(V k √N_det)` for `N_det` detected photons.
    pub per_detected: f64,
    /// The same budget expressed in probe photons, each detection having
    /// consumed `N` of them.
    pub per_probe: f64,
}

/// Shot-noise error propagation `σ_I/|dI/dφ|` at the steepest point of the
/// fitted fringe, with Poissonian counts.
pub fn phase_uncertainty(fit: &FringeFit, detected_photons: f64, photons_per_probe: usize) -> Result<PhaseUncertainty> {
    if !(detected_photons > 0.0) {
        return Err(invalid("detected_photons", "must be > 0"));
    }
    if photons_per_probe < 1 {
        return Err(invalid("photons_per_probe", "must be ≥ 1"));
    }
    if !(fit.v > 0.0 && fit.k > 0.0) {
        return Err(Error::DivergentUncertainty(format!(
            "zero fringe slope (V = {}, k = {})",
            fit.v, fit.k
        )));
    }
    let per_detected = 1.0 / (fit.v * fit.k * detected_photons.sqrt());
    Ok(PhaseUncertainty {
        per_detected,
        per_probe: per_detected * (photons_per_probe as f64).sqrt(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumAdvantage {
    pub value: f64,
    pub pass: bool,
}

/// `V² N`, which must strictly exceed one.
pub fn quantum_advantage(visibility: f64, n: usize) -> QuantumAdvantage {
    let value = visibility * visibility * n as f64;
    QuantumAdvantage {
        value,
        pass: value > 1.0,
    }
}
