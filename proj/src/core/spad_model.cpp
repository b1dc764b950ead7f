/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "core/spad_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "core/math_util.hpp"

namespace spadsim {

double expected_counts(FluxLevel flux, const SpadConfig& cfg, Exposure exposure) {
    validate(cfg, exposure);
    validate(flux);
    const double qphi = cfg.quantum_efficiency * flux.photons_per_s;
    return qphi * exposure.seconds / (1.0 + qphi * cfg.dead_time_s);
}

double count_variance(FluxLevel flux, const SpadConfig& cfg, Exposure exposure) {
    validate(cfg, exposure);
    validate(flux);
    const double qphi = cfg.quantum_efficiency * flux.photons_per_s;
    const double denom = 1.0 + qphi * cfg.dead_time_s;
    return qphi * exposure.seconds / (denom * denom * denom);
}

double variance_peak_flux(const SpadConfig& cfg) {
    return 1.0 / (2.0 * cfg.quantum_efficiency * cfg.dead_time_s);
}

RmseBreakdown rmse_approx(FluxLevel flux, const SpadConfig& cfg, Exposure exposure,
                          bool jitter_corrected) {
    validate(cfg, exposure);
    validate(flux);
    const double q = cfg.quantum_efficiency;
    const double phi = flux.photons_per_s;
    const double T = exposure.seconds;
    // Under jitter correction the dead time enters through its mean, which the
    // model sets equal to the nominal value.
    const double tau = cfg.dead_time_s;
    const double x = q * phi * tau;

    RmseBreakdown out{};
    out.bias_dark = cfg.dark_rate_hz;
    out.bias_afterpulse =
        cfg.afterpulse_prob * q * phi * (1.0 + phi * tau) * std::exp(-x);
    if (jitter_corrected) {
        const double s = q * phi * cfg.jitter_sigma_s;
        out.var_shot = phi * (1.0 + s * s) * (1.0 + x) / (q * T);
    } else {
        out.var_shot = phi * (1.0 + x) / (q * T);
    }
    const double one_x = 1.0 + x;
    out.var_quantization = one_x * one_x * one_x * one_x / (12.0 * q * q * T * T);
    const double bias = out.bias_dark + out.bias_afterpulse;
    out.rmse = std::sqrt(bias * bias + out.var_shot + out.var_quantization);
    return out;
}

double snr_from_rmse(FluxLevel flux, double rmse) {
    validate(flux);
    if (flux.photons_per_s <= 0.0)
        throw std::invalid_argument("snr requires positive flux");
    if (std::isnan(rmse) || rmse <= 0.0)
        throw std::invalid_argument("snr requires positive rmse");
    if (std::isinf(rmse)) return -std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(flux.photons_per_s / rmse);
}

CountPmf count_pmf_exact(FluxLevel flux, const SpadConfig& cfg, Exposure exposure,
                         std::size_t support_cap) {
    validate(cfg, exposure);
    validate(flux);
    const double q = cfg.quantum_efficiency;
    const double phi = flux.photons_per_s;
    const double T = exposure.seconds;
    const double tau = cfg.dead_time_s;

    const double support = std::floor(T / tau);
    if (support + 1.0 > static_cast<double>(support_cap))
        throw std::invalid_argument(
            "count pmf support exceeds cap (" + std::to_string(support_cap) +
            " terms); reduce T/tau_d or use the approximate model");
    const long long max_count = static_cast<long long>(support);

    CountPmf out;
    out.quantum_efficiency = q;
    out.flux = phi;
    out.exposure_s = T;
    out.dead_time_s = tau;
    out.probs.assign(static_cast<std::size_t>(max_count) + 1, 0.0);

    const double qphi = q * phi;
    if (qphi == 0.0) {
        out.probs[0] = 1.0;
        return out;
    }

    out.probs[0] = std::exp(-(T - tau) * qphi);

    // Difference adjacent CDF values; use complements on the upper side so
    // tail entries keep relative accuracy.
    PoissonCdfPair prev = poisson_cdf_pair(0, T * qphi);
    for (long long n = 1; n <= max_count; ++n) {
        const double mean = (T - static_cast<double>(n) * tau) * qphi;
        const PoissonCdfPair cur = poisson_cdf_pair(n, std::max(mean, 0.0));
        const double p = (prev.cdf > 0.5 && cur.cdf > 0.5) ? prev.tail - cur.tail
                                                           : cur.cdf - prev.cdf;
        out.probs[static_cast<std::size_t>(n)] = std::max(p, 0.0);
        prev = cur;
    }
    return out;
}

double rmse_exact(FluxLevel flux, const SpadConfig& cfg, Exposure exposure,
                  std::size_t support_cap) {
    const CountPmf pmf = count_pmf_exact(flux, cfg, exposure, support_cap);
    const double q = cfg.quantum_efficiency;
    const double phi = flux.photons_per_s;
    const double T = exposure.seconds;
    const double tau = cfg.dead_time_s;

    const double x = q * phi * tau;
    const double bias = cfg.dark_rate_hz +
                        cfg.afterpulse_prob * q * phi * (1.0 + phi * tau) * std::exp(-x);

    double acc = 0.0;
    for (std::size_t n = 0; n < pmf.probs.size(); ++n) {
        const double p = pmf.probs[n];
        if (p == 0.0) continue;
        const double nn = static_cast<double>(n);
        const double est = n == 0 ? 0.0 : nn / (q * (T - nn * tau));
        const double err = est - phi;
        acc += p * err * err;
    }
    return std::sqrt(bias * bias + acc);
}

double soft_saturation_flux(const SpadConfig& cfg, Exposure exposure) {
    validate(cfg, exposure);
    // Crossing of (1+x)^4/(12 q^2 T^2) = phi (1+x)/(q T) in x = q*phi*tau:
    // (1+x)^3 = 12 (T/tau) x. Beyond the shot-noise peak (x = 1/2) the left
    // side grows faster, so the upper root is unique; bisect on it.
    const double c = 12.0 * exposure.seconds / cfg.dead_time_s;
    auto g = [c](double x) {
        return (1.0 + x) * (1.0 + x) * (1.0 + x) - c * x;
    };
    double lo = 0.5;
    if (!(g(lo) < 0.0))
        throw std::invalid_argument("no soft-saturation crossover for this configuration");
    double hi = 1.0;
    while (g(hi) < 0.0) hi *= 2.0;
    for (int i = 0; i < 200 && (hi - lo) > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    const double x = 0.5 * (lo + hi);
    return x / (cfg.quantum_efficiency * cfg.dead_time_s);
}

}  // namespace spadsim
