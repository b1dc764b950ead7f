/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "core/types.hpp"

namespace spadsim {

/// rmse in photons/s and SNR in dB. Hard saturation is represented by the
/// explicit sentinels rmse = +inf, snr_db = -inf (never NaN).
struct RmseSnr {
    double rmse;
    double snr_db;
};

/// Conventional full-well pixel. Below saturation flux N_fwc/(q*T):
/// rmse = sqrt(q*flux*T + sigma_r^2)/(q*T); at or above: sentinels.
[[nodiscard]] RmseSnr conventional_rmse_snr(FluxLevel flux, const ConventionalConfig& cfg,
                                            Exposure exposure);

/// Flux at which the conventional pixel saturates: N_fwc/(q*T).
[[nodiscard]] double conventional_saturation_flux(const ConventionalConfig& cfg,
                                                  Exposure exposure);

/// Mean QIS jot-cube count: N (1 - exp(-q*flux*tau_b)) with N = T/tau_b bins.
[[nodiscard]] double qis_mean_counts(FluxLevel flux, const QisConfig& cfg, Exposure exposure);

/// QIS error model: read-noise false positives bias the estimate low-flux
/// (clamped at zero), and the binomial variance grows as exp(q*flux*tau_b).
/// The variance is evaluated in log space; values beyond double range become
/// the +inf rmse sentinel. erf comes from the C math library (glibc's
/// implementation is accurate to under 1 ulp, well inside the 1.5e-7 budget).
[[nodiscard]] RmseSnr qis_rmse_snr(FluxLevel flux, const QisConfig& cfg, Exposure exposure);

/// Sensitivities d(flux estimate)/d(count) of the QIS and PF-SPAD count
/// estimators at the same count, for tau_b = tau_d. The SPAD slope is the
/// larger one everywhere in the open count range.
struct SlopePair {
    double d_spad;
    double d_qis;
};

[[nodiscard]] SlopePair estimator_slope_gap(long long count, const SpadConfig& spad,
                                            const QisConfig& qis, Exposure exposure);

}  // namespace spadsim
