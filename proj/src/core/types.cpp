/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "core/types.hpp"

#include <cmath>

namespace spadsim {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw ConfigError(message);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void validate(const Exposure& exposure) {
    require(finite(exposure.seconds), "exposure not finite");
    require(exposure.seconds > 0.0, "exposure must be positive");
}

void validate(const FluxLevel& flux) {
    require(finite(flux.photons_per_s), "flux not finite");
    require(flux.photons_per_s >= 0.0, "flux must be nonnegative");
}

void validate(const SpadConfig& cfg, const Exposure& exposure) {
    require(finite(cfg.quantum_efficiency) && cfg.quantum_efficiency > 0.0 &&
                cfg.quantum_efficiency <= 1.0,
            "quantum_efficiency out of range");
    require(finite(cfg.dead_time_s) && cfg.dead_time_s > 0.0, "dead_time must be positive");
    require(finite(cfg.dark_rate_hz) && cfg.dark_rate_hz >= 0.0,
            "dark_rate must be nonnegative");
    require(finite(cfg.afterpulse_prob) && cfg.afterpulse_prob >= 0.0 &&
                cfg.afterpulse_prob < 1.0,
            "afterpulse_prob out of range");
    require(finite(cfg.jitter_sigma_s) && cfg.jitter_sigma_s >= 0.0,
            "jitter_sigma must be nonnegative");
    require(cfg.jitter_sigma_s < cfg.dead_time_s, "jitter_sigma must be below dead_time");
    validate(exposure);
    require(exposure.seconds > cfg.dead_time_s, "exposure shorter than dead time");
}

void validate(const ConventionalConfig& cfg, const Exposure& exposure) {
    require(finite(cfg.quantum_efficiency) && cfg.quantum_efficiency > 0.0 &&
                cfg.quantum_efficiency <= 1.0,
            "quantum_efficiency out of range");
    require(cfg.full_well_e >= 1, "full_well must be at least 1");
    require(finite(cfg.read_noise_e) && cfg.read_noise_e >= 0.0,
            "read_noise must be nonnegative");
    validate(exposure);
}

void validate(const QisConfig& cfg, const Exposure& exposure) {
    require(finite(cfg.quantum_efficiency) && cfg.quantum_efficiency > 0.0 &&
                cfg.quantum_efficiency <= 1.0,
            "quantum_efficiency out of range");
    require(finite(cfg.bin_width_s) && cfg.bin_width_s > 0.0, "bin_width must be positive");
    require(finite(cfg.read_noise_e) && cfg.read_noise_e >= 0.0,
            "read_noise must be nonnegative");
    validate(exposure);
}

long long qis_bin_count(const QisConfig& cfg, const Exposure& exposure) {
    validate(cfg, exposure);
    const double ratio = exposure.seconds / cfg.bin_width_s;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio)
        throw ConfigError("exposure must be an integer multiple of qis bin width");
    return static_cast<long long>(rounded);
}

}  // namespace spadsim
