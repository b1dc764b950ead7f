/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "core/reference_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spadsim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double conventional_saturation_flux(const ConventionalConfig& cfg, Exposure exposure) {
    validate(cfg, exposure);
    return static_cast<double>(cfg.full_well_e) /
           (cfg.quantum_efficiency * exposure.seconds);
}

RmseSnr conventional_rmse_snr(FluxLevel flux, const ConventionalConfig& cfg,
                              Exposure exposure) {
    validate(cfg, exposure);
    validate(flux);
    const double q = cfg.quantum_efficiency;
    const double T = exposure.seconds;
    const double phi = flux.photons_per_s;
    if (phi >= conventional_saturation_flux(cfg, exposure)) return {kInf, -kInf};

    const double electrons = q * phi * T;
    const double var = electrons + cfg.read_noise_e * cfg.read_noise_e;
    const double rmse = std::sqrt(var) / (q * T);
    if (phi == 0.0 || rmse == 0.0) return {rmse, -kInf};
    return {rmse, 10.0 * std::log10(electrons * electrons / var)};
}

double qis_mean_counts(FluxLevel flux, const QisConfig& cfg, Exposure exposure) {
    const double bins = static_cast<double>(qis_bin_count(cfg, exposure));
    validate(flux);
    return bins * -std::expm1(-cfg.quantum_efficiency * flux.photons_per_s * cfg.bin_width_s);
}

RmseSnr qis_rmse_snr(FluxLevel flux, const QisConfig& cfg, Exposure exposure) {
    (void)qis_bin_count(cfg, exposure);  // enforces divisibility
    validate(flux);
    const double q = cfg.quantum_efficiency;
    const double tb = cfg.bin_width_s;
    const double T = exposure.seconds;
    const double phi = flux.photons_per_s;
    const double y = q * phi * tb;

    double bias = 0.0;
    if (cfg.read_noise_e > 0.0) {
        const double gate = 1.0 - std::erf(1.0 / (2.0 * std::sqrt(2.0) * cfg.read_noise_e));
        bias = std::max(0.0, 0.5 * (1.0 / (q * tb) - phi) * gate);
    }

    if (y == 0.0) {
        const double rmse = bias;
        return {rmse, rmse > 0.0 && phi > 0.0 ? 20.0 * std::log10(phi / rmse) : -kInf};
    }

    // var = (1 - e^-y) / (q^2 T tb e^-y), in log space to survive large y.
    const double log_var = y + std::log(-std::expm1(-y)) - std::log(q * q * T * tb);
    const double half = 0.5 * log_var;
    if (half > 709.0) return {kInf, -kInf};
    const double rmse = std::hypot(bias, std::exp(half));
    return {rmse, 20.0 * std::log10(phi / rmse)};
}

SlopePair estimator_slope_gap(long long count, const SpadConfig& spad, const QisConfig& qis,
                              Exposure exposure) {
    const long long bins = qis_bin_count(qis, exposure);
    validate(spad, exposure);
    if (std::abs(qis.bin_width_s - spad.dead_time_s) > 1e-12 * spad.dead_time_s)
        throw std::invalid_argument("slope comparison requires tau_b equal to tau_d");
    if (count <= 0 || count >= bins)
        throw std::invalid_argument("count outside open range (0, T/tau_b)");

    const double q = spad.quantum_efficiency;
    const double T = exposure.seconds;
    const double n = static_cast<double>(count);
    const double rem_qis = T - n * qis.bin_width_s;
    const double rem_spad = T - n * spad.dead_time_s;
    return {T / (q * rem_spad * rem_spad), 1.0 / (q * rem_qis)};
}

}  // namespace spadsim
