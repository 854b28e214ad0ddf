/* Copyright 2026 The tpsense Authors
 * SPDX-License-Identifier: Apache-2.0 */

#ifndef TPSENSE_H
#define TPSENSE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/*
 Plus output port of the polarization analyzer.
 */
#define TPS_PORT_PLUS 0

/*
 Minus output port of the polarization analyzer.
 */
#define TPS_PORT_MINUS 1

typedef enum TpsStatus {
  TPS_STATUS_OK = 0,
  TPS_STATUS_NULL_POINTER = 1,
  TPS_STATUS_INVALID_UTF8 = 2,
  TPS_STATUS_INVALID_ARGUMENT = 3,
  TPS_STATUS_CONFIG = 4,
  TPS_STATUS_NUMERICAL = 5,
  TPS_STATUS_FIT = 6,
  TPS_STATUS_IO = 7,
  TPS_STATUS_BUFFER_TOO_SMALL = 8,
  TPS_STATUS_PANIC = 9,
} TpsStatus;

/*
 Experiment configuration handle.
 */
typedef struct TpsConfig TpsConfig;

/*
 Fringe dataset handle.
 */
typedef struct TpsDataset TpsDataset;

/*
 Fitted fringe `I(x) = A (1 + V cos(k x − x0))` with one-sigma errors.
 */
typedef struct TpsFit {
  double a;
  double v;
  double k;
  double x0;
  double err_a;
  double err_v;
  double err_k;
  double err_x0;
  double rms;
  size_t n_points;
} TpsFit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null if none failed.
 The pointer stays valid until the next failing call on this thread.
 */
const char *tps_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *tps_version(void);

/*
 Built-in default configuration.

 # Safety
 `out` must be a valid pointer to writable storage for a handle.
 */
enum TpsStatus tps_config_default(struct TpsConfig **out);

/*
 Lossless configuration with perfect mode overlap.

 # Safety
 `out` must be a valid pointer to writable storage for a handle.
 */
enum TpsStatus tps_config_ideal(struct TpsConfig **out);

/*
 Parse a configuration from TOML text.

 # Safety
 `toml` must be a NUL-terminated string and `out` a valid handle slot.
 */
enum TpsStatus tps_config_from_toml(const char *toml, struct TpsConfig **out);

/*
 Load a configuration from a TOML file.

 # Safety
 `path` must be a NUL-terminated string and `out` a valid handle slot.
 */
enum TpsStatus tps_config_load(const char *path, struct TpsConfig **out);

/*
 Replace the tilt sweep with `count` evenly spaced angles in degrees.

 # Safety
 `config` must be a live handle.
 */
enum TpsStatus tps_config_set_sweep(struct TpsConfig *config,
                                    double start_deg,
                                    double stop_deg,
                                    size_t count);

/*
 Set the Fock cutoff.

 # Safety
 `config` must be a live handle.
 */
enum TpsStatus tps_config_set_n_max(struct TpsConfig *config, size_t n_max);

/*
 Set the inter-source transmissions and the mode overlap.

 # Safety
 `config` must be a live handle.
 */
enum TpsStatus tps_config_set_imperfections(struct TpsConfig *config,
                                            double eta_t,
                                            double eta_aux,
                                            double overlap);

/*
 Release a configuration. Null is ignored.

 # Safety
 `config` must be null or a handle not yet freed.
 */
void tps_config_free(struct TpsConfig *config);

/*
 Two-photon fringes from the truncated Fock model.

 # Safety
 `config` must be a live handle and `out` a valid handle slot.
 */
enum TpsStatus tps_run_quantum_sweep(const struct TpsConfig *config, struct TpsDataset **out);

/*
 Single-photon reference fringes at the classical wavelength.

 # Safety
 `config` must be a live handle and `out` a valid handle slot.
 */
enum TpsStatus tps_run_classical_sweep(const struct TpsConfig *config, struct TpsDataset **out);

/*
 Two-photon fringes from the covariance-matrix model.

 # Safety
 `config` must be a live handle and `out` a valid handle slot.
 */
enum TpsStatus tps_run_gaussian_sweep(const struct TpsConfig *config, struct TpsDataset **out);

/*
 N-photon protocol fringes over `len` phases.

 # Safety
 `phases` must point to `len` readable doubles and `out` be a valid handle slot.
 */
enum TpsStatus tps_run_noon(size_t n, const double *phases, size_t len, struct TpsDataset **out);

/*
 Read a dataset CSV (and its JSON sidecar if present).

 # Safety
 `path` must be a NUL-terminated string and `out` a valid handle slot.
 */
enum TpsStatus tps_dataset_read_csv(const char *path, struct TpsDataset **out);

/*
 Write a dataset CSV and its JSON sidecar.

 # Safety
 `dataset` must be a live handle and `path` a NUL-terminated string.
 */
enum TpsStatus tps_dataset_write_csv(const struct TpsDataset *dataset, const char *path);

/*
 Number of sweep points.

 # Safety
 `dataset` must be a live handle and `len` writable.
 */
enum TpsStatus tps_dataset_len(const struct TpsDataset *dataset, size_t *len);

/*
 Copy the sweep axis and both port signals into caller buffers of
 `capacity` doubles each. Any buffer may be null to skip it.

 # Safety
 `dataset` must be a live handle; non-null buffers must hold `capacity` doubles.
 */
enum TpsStatus tps_dataset_copy(const struct TpsDataset *dataset,
                                double *x,
                                double *i_plus,
                                double *i_minus,
                                size_t capacity);

/*
 Release a dataset. Null is ignored.

 # Safety
 `dataset` must be null or a handle not yet freed.
 */
void tps_dataset_free(struct TpsDataset *dataset);

/*
 Fit a cosine fringe to one port (`TPS_PORT_PLUS` or `TPS_PORT_MINUS`).

 # Safety
 `dataset` must be a live handle and `out` writable.
 */
enum TpsStatus tps_fit_fringe(const struct TpsDataset *dataset,
                              uint32_t port_id,
                              struct TpsFit *out);

/*
 Ratio of quantum to classical fringe frequency. Both fits must share a
 sweep axis.

 # Safety
 `quantum`, `classical` and `ratio` must be valid pointers.
 */
enum TpsStatus tps_fringe_frequency_ratio(const struct TpsFit *quantum,
                                          const struct TpsFit *classical,
                                          double *ratio);

/*
 `V² N` and whether it exceeds one.

 # Safety
 `value` and `pass` must be writable.
 */
enum TpsStatus tps_quantum_advantage(double visibility, size_t n, double *value, bool *pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TPSENSE_H */
