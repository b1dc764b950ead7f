/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/types.hpp"

namespace spadsim {

enum class ModelTag {
    spad_approx,
    spad_exact,
    spad_jitter,
    conventional,
    qis,
    monte_carlo,
};

[[nodiscard]] const char* to_string(ModelTag tag);
[[nodiscard]] ModelTag model_tag_from_string(std::string_view name);

/// Per-flux RMSE and SNR on a strictly increasing log-spaced grid.
/// snr_db[i] = 20 log10(flux[i]/rmse[i]) wherever rmse is finite; hard
/// saturation appears as the rmse = +inf / snr = -inf sentinel pair.
struct SnrCurve {
    std::vector<double> flux;
    std::vector<double> rmse;
    std::vector<double> snr_db;
    ModelTag model = ModelTag::spad_approx;
};

/// Log-spaced grid with exact endpoints. Requires min > 0, max > min,
/// points >= 2.
[[nodiscard]] std::vector<double> log_spaced_grid(double flux_min, double flux_max, int points);

[[nodiscard]] SnrCurve snr_curve_spad(const SpadConfig& cfg, Exposure exposure, double flux_min,
                                      double flux_max, int points, ModelTag which);
[[nodiscard]] SnrCurve snr_curve_conventional(const ConventionalConfig& cfg, Exposure exposure,
                                              double flux_min, double flux_max, int points);
[[nodiscard]] SnrCurve snr_curve_qis(const QisConfig& cfg, Exposure exposure, double flux_min,
                                     double flux_max, int points);

/// Ratio of the highest to lowest flux whose SNR stays at or above the
/// threshold. Crossings between grid points are located on the log-linear
/// interpolant (linear in dB versus log flux); a -inf neighbor pins the
/// crossing at the last finite grid point. Returns nullopt when no grid point
/// reaches the threshold.
[[nodiscard]] std::optional<double> dynamic_range(const SnrCurve& curve, double threshold_db);

/// CSV with header flux_photons_per_s,rmse,snr_db,model. Infinities are
/// written as inf/-inf so files round-trip.
void write_csv(const SnrCurve& curve, std::ostream& out);
void write_csv(const SnrCurve& curve, const std::string& path);
[[nodiscard]] SnrCurve read_snr_csv(std::istream& in);
[[nodiscard]] SnrCurve read_snr_csv(const std::string& path);

}  // namespace spadsim
