// Copyright 2026 The tpsense Authors
// SPDX-License-Identifier: Apache-2.0

//! C ABI for tpsense.
//!
//! Every fallible function returns a [`TpsStatus`]. On failure a message is
//! stored per thread and can be read with [`tps_last_error_message`] until
//! the next failing call on the same thread. Objects are opaque handles
//! owned by the caller and released with their `_free` function. Panics
//! never cross the boundary; they are reported as `TPS_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use tpsense::analysis::{fit_fringe, fringe_frequency_ratio, quantum_advantage, FringeFit};
use tpsense::experiment::{
    run_classical_sweep, run_noon_protocol, run_quantum_sweep, ExperimentConfig, FringeDataset, Port, SweepSpec,
};
use tpsense::gaussian::run_gaussian_sweep;
use tpsense::io::{read_dataset, write_dataset};
use tpsense::Error;

/// Plus output port of the polarization analyzer.
pub const TPS_PORT_PLUS: u32 = 0;
/// Minus output port of the polarization analyzer.
pub const TPS_PORT_MINUS: u32 = 1;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TpsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Config = 4,
    Numerical = 5,
    Fit = 6,
    Io = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// Experiment configuration handle.
pub struct TpsConfig {
    inner: ExperimentConfig,
}

/// Fringe dataset handle.
pub struct TpsDataset {
    inner: FringeDataset,
}

/// Fitted fringe `I(x) = A (1 + V cos(k x − x0))` with one-sigma errors.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TpsFit {
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

impl From<&FringeFit> for TpsFit {
    fn from(f: &FringeFit) -> Self {
        Self {
            a: f.a,
            v: f.v,
            k: f.k,
            x0: f.x0,
            err_a: f.err_a,
            err_v: f.err_v,
            err_k: f.err_k,
            err_x0: f.err_x0,
            rms: f.rms,
            n_points: f.n_points,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: TpsStatus,
    message: String,
}

impl Failure {
    fn new(status: TpsStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }

    fn null(name: &str) -> Self {
        Self::new(TpsStatus::NullPointer, format!("`{name}` is null"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::UnknownMode(_)
            | Error::DuplicateMode(_)
            | Error::SameMode(_)
            | Error::DimensionMismatch { .. }
            | Error::InvalidParameter { .. } => TpsStatus::InvalidArgument,
            Error::NonUnitary { .. }
            | Error::NonSymplectic { .. }
            | Error::InvalidState(_)
            | Error::Truncation { .. } => TpsStatus::Numerical,
            Error::TooFewFringes { .. }
            | Error::Undersampled { .. }
            | Error::FitDidNotConverge(_)
            | Error::DivergentUncertainty(_) => TpsStatus::Fit,
            Error::Config(_) | Error::Json(_) => TpsStatus::Config,
            Error::Io(_) | Error::Csv(_) => TpsStatus::Io,
        };
        Self::new(status, e.to_string())
    }
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TpsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TpsStatus::Ok,
        Ok(Err(failure)) => {
            set_last_error(&failure.message);
            failure.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            TpsStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(ptr: *const T, name: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| Failure::null(name))
}

unsafe fn borrow_mut<'a, T>(ptr: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    ptr.as_mut().ok_or_else(|| Failure::null(name))
}

unsafe fn c_str<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(Failure::null(name));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure::new(TpsStatus::InvalidUtf8, format!("`{name}` is not valid UTF-8")))
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    let slot = borrow_mut(out, "out")?;
    *slot = Box::into_raw(Box::new(value));
    Ok(())
}

fn port(value: u32) -> Result<Port, Failure> {
    match value {
        TPS_PORT_PLUS => Ok(Port::Plus),
        TPS_PORT_MINUS => Ok(Port::Minus),
        other => Err(Failure::new(
            TpsStatus::InvalidArgument,
            format!("unknown port {other}"),
        )),
    }
}

/// Message of the last failed call on this thread, or null if none failed.
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn tps_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tps_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Built-in default configuration.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn tps_config_default(out: *mut *mut TpsConfig) -> TpsStatus {
    guard(|| {
        emit(
            out,
            TpsConfig {
                inner: ExperimentConfig::default(),
            },
        )
    })
}

/// Lossless configuration with perfect mode overlap.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn tps_config_ideal(out: *mut *mut TpsConfig) -> TpsStatus {
    guard(|| {
        emit(
            out,
            TpsConfig {
                inner: ExperimentConfig::ideal(),
            },
        )
    })
}

/// Parse a configuration from TOML text.
///
/// # Safety
/// `toml` must be a NUL-terminated string and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn tps_config_from_toml(toml: *const c_char, out: *mut *mut TpsConfig) -> TpsStatus {
    guard(|| {
        let inner = ExperimentConfig::from_toml_str(c_str(toml, "toml")?)?;
        emit(out, TpsConfig { inner })
    })
}

/// Load a configuration from a TOML file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn tps_config_load(path: *const c_char, out: *mut *mut TpsConfig) -> TpsStatus {
    guard(|| {
        let inner = ExperimentConfig::load(Path::new(c_str(path, "path")?))?;
        emit(out, TpsConfig { inner })
    })
}

/// Replace the tilt sweep with `count` evenly spaced angles in degrees.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tps_config_set_sweep(
    config: *mut TpsConfig,
    start_deg: f64,
    stop_deg: f64,
    count: usize,
) -> TpsStatus {
    guard(|| {
        let cfg = borrow_mut(config, "config")?;
        let candidate = ExperimentConfig {
            sweep: SweepSpec::range(start_deg, stop_deg, count),
            ..cfg.inner.clone()
        };
        candidate.validate()?;
        cfg.inner = candidate;
        Ok(())
    })
}

/// Set the Fock cutoff.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tps_config_set_n_max(config: *mut TpsConfig, n_max: usize) -> TpsStatus {
    guard(|| {
        let cfg = borrow_mut(config, "config")?;
        let candidate = ExperimentConfig {
            n_max,
            ..cfg.inner.clone()
        };
        candidate.validate()?;
        cfg.inner = candidate;
        Ok(())
    })
}

/// Set the inter-source transmissions and the mode overlap.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tps_config_set_imperfections(
    config: *mut TpsConfig,
    eta_t: f64,
    eta_aux: f64,
    overlap: f64,
) -> TpsStatus {
    guard(|| {
        let cfg = borrow_mut(config, "config")?;
        let candidate = ExperimentConfig {
            eta_t,
            eta_aux,
            overlap,
            ..cfg.inner.clone()
        };
        candidate.validate()?;
        cfg.inner = candidate;
        Ok(())
    })
}

/// Release a configuration. Null is ignored.
///
/// # Safety
/// `config` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tps_config_free(config: *mut TpsConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

unsafe fn sweep(
    config: *const TpsConfig,
    out: *mut *mut TpsDataset,
    run: fn(&ExperimentConfig) -> tpsense::Result<FringeDataset>,
) -> TpsStatus {
    guard(|| {
        let cfg = borrow(config, "config")?;
        let inner = run(&cfg.inner)?;
        emit(out, TpsDataset { inner })
    })
}

/// Two-photon fringes from the truncated Fock model.
///
/// # Safety
/// `config` must be a live handle and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn tps_run_quantum_sweep(config: *const TpsConfig, out: *mut *mut TpsDataset) -> TpsStatus {
    sweep(config, out, run_quantum_sweep)
}

/// Single-photon reference fringes at the classical wavelength.
///
/// # Safety
/// `config` must be a live handle and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn tps_run_classical_sweep(config: *const TpsConfig, out: *mut *mut TpsDataset) -> TpsStatus {
    sweep(config, out, run_classical_sweep)
}

/// Two-photon fringes from the covariance-matrix model.
///
/// # Safety
/// `config` must be a live handle and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn tps_run_gaussian_sweep(config: *const TpsConfig, out: *mut *mut TpsDataset) -> TpsStatus {
    sweep(config, out, run_gaussian_sweep)
}

/// N-photon protocol fringes over `len` phases.
///
/// # Safety
/// `phases` must point to `len` readable doubles and `out` be a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn tps_run_noon(
    n: usize,
    phases: *const f64,
    len: usize,
    out: *mut *mut TpsDataset,
) -> TpsStatus {
    guard(|| {
        if phases.is_null() {
            return Err(Failure::null("phases"));
        }
        let grid = std::slice::from_raw_parts(phases, len);
        let inner = run_noon_protocol(n, grid)?;
        emit(out, TpsDataset { inner })
    })
}

/// Read a dataset CSV (and its JSON sidecar if present).
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn tps_dataset_read_csv(path: *const c_char, out: *mut *mut TpsDataset) -> TpsStatus {
    guard(|| {
        let inner = read_dataset(Path::new(c_str(path, "path")?))?;
        emit(out, TpsDataset { inner })
    })
}

/// Write a dataset CSV and its JSON sidecar.
///
/// # Safety
/// `dataset` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn tps_dataset_write_csv(dataset: *const TpsDataset, path: *const c_char) -> TpsStatus {
    guard(|| {
        let ds = borrow(dataset, "dataset")?;
        write_dataset(Path::new(c_str(path, "path")?), &ds.inner)?;
        Ok(())
    })
}

/// Number of sweep points.
///
/// # Safety
/// `dataset` must be a live handle and `len` writable.
#[no_mangle]
pub unsafe extern "C" fn tps_dataset_len(dataset: *const TpsDataset, len: *mut usize) -> TpsStatus {
    guard(|| {
        *borrow_mut(len, "len")? = borrow(dataset, "dataset")?.inner.len();
        Ok(())
    })
}

/// Copy the sweep axis and both port signals into caller buffers of
/// `capacity` doubles each. Any buffer may be null to skip it.
///
/// # Safety
/// `dataset` must be a live handle; non-null buffers must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn tps_dataset_copy(
    dataset: *const TpsDataset,
    x: *mut f64,
    i_plus: *mut f64,
    i_minus: *mut f64,
    capacity: usize,
) -> TpsStatus {
    guard(|| {
        let ds = &borrow(dataset, "dataset")?.inner;
        if capacity < ds.len() {
            return Err(Failure::new(
                TpsStatus::BufferTooSmall,
                format!("buffers hold {capacity} values, dataset has {}", ds.len()),
            ));
        }
        for (dst, src) in [(x, &ds.x), (i_plus, &ds.i_plus), (i_minus, &ds.i_minus)] {
            if !dst.is_null() {
                std::slice::from_raw_parts_mut(dst, src.len()).copy_from_slice(src);
            }
        }
        Ok(())
    })
}

/// Release a dataset. Null is ignored.
///
/// # Safety
/// `dataset` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tps_dataset_free(dataset: *mut TpsDataset) {
    if !dataset.is_null() {
        drop(Box::from_raw(dataset));
    }
}

/// Fit a cosine fringe to one port (`TPS_PORT_PLUS` or `TPS_PORT_MINUS`).
///
/// # Safety
/// `dataset` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tps_fit_fringe(dataset: *const TpsDataset, port_id: u32, out: *mut TpsFit) -> TpsStatus {
    guard(|| {
        let ds = borrow(dataset, "dataset")?;
        let fit = fit_fringe(&ds.inner, port(port_id)?)?;
        *borrow_mut(out, "out")? = (&fit).into();
        Ok(())
    })
}

/// Ratio of quantum to classical fringe frequency. Both fits must share a
/// sweep axis.
///
/// # Safety
/// `quantum`, `classical` and `ratio` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tps_fringe_frequency_ratio(
    quantum: *const TpsFit,
    classical: *const TpsFit,
    ratio: *mut f64,
) -> TpsStatus {
    guard(|| {
        let q = borrow(quantum, "quantum")?;
        let c = borrow(classical, "classical")?;
        if c.k == 0.0 {
            return Err(Failure::new(
                TpsStatus::InvalidArgument,
                "classical fringe frequency is zero",
            ));
        }
        let as_fit = |f: &TpsFit| FringeFit {
            a: f.a,
            v: f.v,
            k: f.k,
            x0: f.x0,
            err_a: f.err_a,
            err_v: f.err_v,
            err_k: f.err_k,
            err_x0: f.err_x0,
            rms: f.rms,
            n_points: f.n_points,
        };
        *borrow_mut(ratio, "ratio")? = fringe_frequency_ratio(&as_fit(q), &as_fit(c));
        Ok(())
    })
}

/// `V² N` and whether it exceeds one.
///
/// # Safety
/// `value` and `pass` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tps_quantum_advantage(
    visibility: f64,
    n: usize,
    value: *mut f64,
    pass: *mut bool,
) -> TpsStatus {
    guard(|| {
        let value = borrow_mut(value, "value")?;
        let pass = borrow_mut(pass, "pass")?;
        let qa = quantum_advantage(visibility, n);
        *value = qa.value;
        *pass = qa.pass;
        Ok(())
    })
}
