/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API for the spadsim photon-counting sensor toolkit.
 *
 * Conventions:
 *   - Units are seconds, photons/second, electrons, decibels.
 *   - Functions return SPADSIM_OK on success; on failure they return an
 *     error code and spadsim_last_error() describes the problem for the
 *     calling thread.
 *   - Objects returned through spadsim_*_create/load functions are opaque
 *     handles owned by the caller; release them with the matching _free.
 *   - Hard saturation is reported with explicit sentinels: rmse = +inf,
 *     snr = -inf (never NaN).
 *   - All randomness is keyed by (master_seed, stream_id); identical inputs
 *     give bit-identical outputs regardless of thread count.
 */

#ifndef SPADSIM_H
#define SPADSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spadsim_status {
    SPADSIM_OK = 0,
    SPADSIM_ERR_INVALID_ARGUMENT = 1,
    SPADSIM_ERR_IO = 2,
    SPADSIM_ERR_RUNTIME = 3,
} spadsim_status;

/* Message for the most recent failure on this thread. */
const char* spadsim_last_error(void);

const char* spadsim_version(void);

/* ------------------------------------------------------------------ */
/* Configuration                                                       */
/* ------------------------------------------------------------------ */

/* Sensor parameters; NaN marks a field that was never provided. Parsed from
 * key=value files with keys q, tau_d_s, dark_rate_hz, p_ap, jitter_sigma_s,
 * exposure_s, fwc, read_noise_e, qis_tau_b_s ('#' starts a comment; unknown
 * keys are rejected). */
typedef struct spadsim_config {
    double q;              /* quantum efficiency, (0,1] */
    double tau_d_s;        /* SPAD dead time, seconds */
    double dark_rate_hz;   /* SPAD dark count rate, counts/s (default 0) */
    double p_ap;           /* SPAD afterpulse probability, [0,1) (default 0) */
    double jitter_sigma_s; /* SPAD dead-time jitter stddev, s (default 0) */
    double exposure_s;     /* exposure time, seconds */
    double fwc;            /* conventional full well capacity, electrons */
    double read_noise_e;   /* read noise RMS, electrons (default 0) */
    double qis_tau_b_s;    /* QIS bin width, seconds */
} spadsim_config;

spadsim_config spadsim_config_default(void);
spadsim_status spadsim_config_load(const char* path, spadsim_config* out);

/* ------------------------------------------------------------------ */
/* Analytic models                                                     */
/* ------------------------------------------------------------------ */

/* Mean SPAD count over the exposure. */
spadsim_status spadsim_spad_expected_counts(const spadsim_config* cfg, double exposure_s,
                                            double flux, double* out);

/* Variance of the SPAD count. */
spadsim_status spadsim_spad_count_variance(const spadsim_config* cfg, double exposure_s,
                                           double flux, double* out);

typedef struct spadsim_rmse_breakdown {
    double bias_dark;         /* photons/s */
    double bias_afterpulse;   /* photons/s */
    double var_shot;          /* (photons/s)^2 */
    double var_quantization;  /* (photons/s)^2 */
    double rmse;              /* photons/s */
} spadsim_rmse_breakdown;

/* Flux-domain error budget of the SPAD count estimator. */
spadsim_status spadsim_spad_rmse_breakdown(const spadsim_config* cfg, double exposure_s,
                                           double flux, int jitter_corrected,
                                           spadsim_rmse_breakdown* out);

/* 20*log10(flux/rmse); rmse = +inf gives -inf dB. */
spadsim_status spadsim_snr_db(double flux, double rmse, double* out);

/* Conventional pixel rmse/snr (sentinels past the full-well flux). */
spadsim_status spadsim_conventional_rmse_snr(const spadsim_config* cfg, double exposure_s,
                                             double flux, double* rmse, double* snr_db);

/* QIS jot-cube rmse/snr. Requires exposure = N * qis_tau_b_s. */
spadsim_status spadsim_qis_rmse_snr(const spadsim_config* cfg, double exposure_s, double flux,
                                    double* rmse, double* snr_db);

/* ------------------------------------------------------------------ */
/* Flux estimators                                                     */
/* ------------------------------------------------------------------ */

spadsim_status spadsim_estimate_from_counts(const spadsim_config* cfg, double exposure_s,
                                            long long count, double* flux_hat);

/* Timestamp MLE over a detection trace (timestamps strictly increasing,
 * in (0, exposure]); needs at least two detections. */
spadsim_status spadsim_estimate_from_timestamps(const spadsim_config* cfg, double exposure_s,
                                                const double* timestamps_s, size_t count,
                                                double* flux_hat);

spadsim_status spadsim_estimate_qis(const spadsim_config* cfg, double exposure_s,
                                    long long count, double* flux_hat);

/* saturated is set to 1 (and flux_hat to +inf) when the well is full. */
spadsim_status spadsim_estimate_conventional(const spadsim_config* cfg, double exposure_s,
                                             long long count, double* flux_hat,
                                             int* saturated);

/* ------------------------------------------------------------------ */
/* SNR curves and dynamic range                                        */
/* ------------------------------------------------------------------ */

typedef struct spadsim_curve spadsim_curve;

/* sensor is one of: spad, spad-exact, spad-jitter, conventional, qis. */
spadsim_status spadsim_snr_curve(const char* sensor, const spadsim_config* cfg,
                                 double exposure_s, double flux_min, double flux_max,
                                 int points, spadsim_curve** out);

size_t spadsim_curve_size(const spadsim_curve* curve);
const char* spadsim_curve_model(const spadsim_curve* curve);
spadsim_status spadsim_curve_row(const spadsim_curve* curve, size_t index, double* flux,
                                 double* rmse, double* snr_db);

/* CSV schema: flux_photons_per_s,rmse,snr_db,model. */
spadsim_status spadsim_curve_write_csv(const spadsim_curve* curve, const char* path);
spadsim_status spadsim_curve_read_csv(const char* path, spadsim_curve** out);

/* Ratio of highest to lowest flux with SNR at or above the threshold,
 * interpolated log-linearly between grid points. found is 0 when no grid
 * point reaches the threshold (ratio is then unset). */
spadsim_status spadsim_dynamic_range(const spadsim_curve* curve, double threshold_db,
                                     double* ratio, int* found);

void spadsim_curve_free(spadsim_curve* curve);

/* ------------------------------------------------------------------ */
/* Monte Carlo simulation                                              */
/* ------------------------------------------------------------------ */

typedef struct spadsim_trace spadsim_trace;

spadsim_status spadsim_simulate_spad_trace(const spadsim_config* cfg, double exposure_s,
                                           double flux, uint64_t master_seed,
                                           uint64_t stream_id, spadsim_trace** out);

size_t spadsim_trace_size(const spadsim_trace* trace);
const double* spadsim_trace_timestamps(const spadsim_trace* trace);
/* One-column CSV, header t_s. */
spadsim_status spadsim_trace_write_csv(const spadsim_trace* trace, const char* path);
spadsim_status spadsim_trace_estimate(const spadsim_trace* trace, const spadsim_config* cfg,
                                      double* flux_hat);
void spadsim_trace_free(spadsim_trace* trace);

typedef struct spadsim_trial_stats {
    double flux;
    long long trials;
    double mean_count;
    double var_count;
    double mean_flux_hat;
    double rmse_flux_hat;
} spadsim_trial_stats;

typedef struct spadsim_trials spadsim_trials;

/* sensor is one of: spad, conventional, qis. Runs `trials` simulations per
 * flux point and aggregates counts and flux estimates. */
spadsim_status spadsim_run_trials(const char* sensor, const spadsim_config* cfg,
                                  double exposure_s, const double* fluxes, size_t flux_count,
                                  long long trials, uint64_t master_seed, int threads,
                                  spadsim_trials** out);

size_t spadsim_trials_size(const spadsim_trials* trials);
spadsim_status spadsim_trials_row(const spadsim_trials* trials, size_t index,
                                  spadsim_trial_stats* out);
/* CSV schema: flux_photons_per_s,trials,mean_count,var_count,mean_flux_hat,
 * rmse_flux_hat. */
spadsim_status spadsim_trials_write_csv(const spadsim_trials* trials, const char* path);
void spadsim_trials_free(spadsim_trials* trials);

/* ------------------------------------------------------------------ */
/* Image pipeline                                                      */
/* ------------------------------------------------------------------ */

typedef struct spadsim_image spadsim_image;

/* Loads a PFM ('PF' color / 'Pf' gray; scale sign = byte order; rows stored
 * bottom-up). Negative samples clamp to 0; negatives_clamped (optional)
 * receives how many. */
spadsim_status spadsim_image_load_pfm(const char* path, spadsim_image** out,
                                      long long* negatives_clamped);

/* data is row-major from the top row, channel-interleaved, photons/s. */
spadsim_status spadsim_image_create(int width, int height, int channels, const double* data,
                                    spadsim_image** out);

int spadsim_image_width(const spadsim_image* image);
int spadsim_image_height(const spadsim_image* image);
int spadsim_image_channels(const spadsim_image* image);
const double* spadsim_image_data(const spadsim_image* image);

spadsim_status spadsim_image_write_pfm(const spadsim_image* image, const char* path);

/* Log-domain remap: max -> peak_flux, max/min(positive) -> target_ratio. */
spadsim_status spadsim_image_rescale_dynamic_range(const spadsim_image* image,
                                                   double target_ratio, double peak_flux,
                                                   spadsim_image** out);

void spadsim_image_free(spadsim_image* image);

typedef struct spadsim_counts spadsim_counts;

/* Simulates one capture; pixel/channel index i uses stream_id i, so captures
 * are reproducible for any thread count. fast (spad only; needs p_ap = 0 and
 * jitter 0) samples the exact count distribution instead of running the
 * event loop. */
spadsim_status spadsim_capture(const spadsim_image* image, const char* sensor,
                               const spadsim_config* cfg, double exposure_s,
                               uint64_t master_seed, int fast, int threads,
                               spadsim_counts** out);

int spadsim_counts_width(const spadsim_counts* counts);
int spadsim_counts_height(const spadsim_counts* counts);
int spadsim_counts_channels(const spadsim_counts* counts);
const long long* spadsim_counts_data(const spadsim_counts* counts);
void spadsim_counts_free(spadsim_counts* counts);

typedef struct spadsim_recon spadsim_recon;

/* Inverts counts back to flux; saturated pixels are flagged. */
spadsim_status spadsim_reconstruct(const spadsim_counts* counts, spadsim_recon** out);

/* Borrowed views, valid while the recon handle lives. */
const spadsim_image* spadsim_recon_flux(const spadsim_recon* recon);
const unsigned char* spadsim_recon_saturated_mask(const spadsim_recon* recon);
void spadsim_recon_free(spadsim_recon* recon);

/* Tone maps with the global operator (key scales the geometric-mean
 * luminance) and writes an 8-bit PNG. */
spadsim_status spadsim_tone_map_png(const spadsim_image* image, double key, const char* path);

/* Summary CSV: channel,min_flux,max_flux,mean_flux,saturated_pixels. */
spadsim_status spadsim_recon_write_summary_csv(const spadsim_recon* recon, const char* path);

/* Full pipeline: load PFM, optionally rescale (skipped when rescale_ratio
 * <= 0), capture, reconstruct, tone map, and write <prefix>_toned.png,
 * <prefix>_flux.pfm, <prefix>_summary.csv. */
spadsim_status spadsim_render(const char* input_pfm, const char* sensor,
                              const spadsim_config* cfg, double exposure_s,
                              uint64_t master_seed, double key, int fast, int threads,
                              double rescale_ratio, double peak_flux,
                              const char* out_prefix);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SPADSIM_H */
