/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <stdexcept>

namespace spadsim {

// Unit conventions used throughout: seconds, photons/second, electrons,
// decibels. Config structs are immutable values; derived quantities are
// recomputed, never cached.

/// Free-running SPAD pixel parameters.
struct SpadConfig {
    double quantum_efficiency = 0.0;  ///< detection probability, (0,1]
    double dead_time_s = 0.0;         ///< non-paralyzable dead time, > 0
    double dark_rate_hz = 0.0;        ///< dark count rate, >= 0
    double afterpulse_prob = 0.0;     ///< afterpulse probability, [0,1)
    double jitter_sigma_s = 0.0;      ///< dead-time duration stddev, [0, dead_time)
};

/// Conventional full-well pixel parameters.
struct ConventionalConfig {
    double quantum_efficiency = 0.0;  ///< (0,1]
    long long full_well_e = 0;        ///< full well capacity, electrons >= 1
    double read_noise_e = 0.0;        ///< read noise RMS, electrons >= 0
};

/// Quanta image sensor (uniform binary binning) parameters.
struct QisConfig {
    double quantum_efficiency = 0.0;  ///< (0,1]
    double bin_width_s = 0.0;         ///< temporal bin width, > 0
    double read_noise_e = 0.0;        ///< per-jot read noise RMS, >= 0
};

struct Exposure {
    double seconds = 0.0;  ///< > 0
};

struct FluxLevel {
    double photons_per_s = 0.0;  ///< finite, >= 0
};

/// Validation failure; the message names the first violated constraint.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// I/O failure carrying path context.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

void validate(const SpadConfig& cfg, const Exposure& exposure);
void validate(const ConventionalConfig& cfg, const Exposure& exposure);
void validate(const QisConfig& cfg, const Exposure& exposure);
void validate(const Exposure& exposure);
void validate(const FluxLevel& flux);

/// Number of QIS bins N with T = N * bin_width. Throws ConfigError unless the
/// exposure is an integer multiple of the bin width within 1e-9 relative.
[[nodiscard]] long long qis_bin_count(const QisConfig& cfg, const Exposure& exposure);

}  // namespace spadsim
