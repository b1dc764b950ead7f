/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstddef>
#include <vector>

#include "core/types.hpp"

namespace spadsim {

/// Mean detected count over an exposure: q*flux*T / (1 + q*flux*tau_d).
/// Strictly increasing in flux, bounded above by T/tau_d.
[[nodiscard]] double expected_counts(FluxLevel flux, const SpadConfig& cfg, Exposure exposure);

/// Variance of the detected count: q*flux*T / (1 + q*flux*tau_d)^3.
/// Rises with flux up to 1/(2*q*tau_d), then falls.
[[nodiscard]] double count_variance(FluxLevel flux, const SpadConfig& cfg, Exposure exposure);

/// Flux where count_variance peaks: 1/(2*q*tau_d).
[[nodiscard]] double variance_peak_flux(const SpadConfig& cfg);

/// Flux-domain error budget of the count-based estimator. All terms are in
/// photons/s (biases) or (photons/s)^2 (variances); rmse combines them as
/// sqrt((bias_dark + bias_afterpulse)^2 + var_shot + var_quantization).
struct RmseBreakdown {
    double bias_dark;
    double bias_afterpulse;
    double var_shot;
    double var_quantization;
    double rmse;
};

/// Gaussian-approximation error model. With jitter_corrected set, the shot
/// term becomes flux*(1 + q^2*flux^2*sigma_d^2)*(1 + q*flux*mu_d)/(q*T) with
/// mu_d the mean dead time; at sigma_d = 0 this reduces to the plain model.
[[nodiscard]] RmseBreakdown rmse_approx(FluxLevel flux, const SpadConfig& cfg,
                                        Exposure exposure, bool jitter_corrected);

/// 20*log10(flux/rmse). rmse = +inf maps to -inf dB; rmse <= 0 or NaN throws.
[[nodiscard]] double snr_from_rmse(FluxLevel flux, double rmse);

/// Exact count distribution from renewal theory. probs[n] for
/// n = 0..floor(T/tau_d); probs[n] = Q(n,(T-n*tau)q*flux) -
/// Q(n-1,(T-(n-1)*tau)q*flux) with Q the Poisson CDF, and
/// probs[0] = Q(0,(T-tau)q*flux), the no-detection probability under the
/// detection-at-t=0 boundary convention.
struct CountPmf {
    std::vector<double> probs;
    double quantum_efficiency;
    double flux;
    double exposure_s;
    double dead_time_s;
};

inline constexpr std::size_t kDefaultPmfSupportCap = 1'000'000;

[[nodiscard]] CountPmf count_pmf_exact(FluxLevel flux, const SpadConfig& cfg, Exposure exposure,
                                       std::size_t support_cap = kDefaultPmfSupportCap);

/// Exact RMSE: sqrt((dark + afterpulse bias)^2 + sum_n p_n (est(n) - flux)^2),
/// with est(n) the count estimator n/(q(T - n*tau_d)).
[[nodiscard]] double rmse_exact(FluxLevel flux, const SpadConfig& cfg, Exposure exposure,
                                std::size_t support_cap = kDefaultPmfSupportCap);

/// High-flux crossover where quantization variance overtakes shot variance
/// (the unique crossing beyond the shot-noise peak).
[[nodiscard]] double soft_saturation_flux(const SpadConfig& cfg, Exposure exposure);

}  // namespace spadsim
