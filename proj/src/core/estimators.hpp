/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace spadsim {

/// Ordered photon-detection timestamps from one exposure, seconds in (0, T].
struct DetectionTrace {
    std::vector<double> timestamps_s;
    Exposure exposure;
};

/// Builds a trace, checking timestamps are strictly increasing and in (0, T].
[[nodiscard]] DetectionTrace make_trace(std::vector<double> timestamps_s, Exposure exposure);

struct FluxEstimate {
    double photons_per_s;
    std::string method;
};

/// Timestamp MLE: mean gap X over the trace (counting the first detection as
/// a gap from t = 0), flux = 1/(q (X - tau_d)). Needs at least two
/// detections; a mean gap at or below the dead time is an error.
[[nodiscard]] FluxEstimate estimate_from_interarrivals(const DetectionTrace& trace,
                                                       const SpadConfig& cfg);

/// Count inversion: flux = n / (q (T - n tau_d)); n = 0 gives 0. Counts whose
/// dead time fills the exposure (within 1e-12 relative) are an error.
[[nodiscard]] FluxEstimate estimate_from_counts(long long count, const SpadConfig& cfg,
                                                Exposure exposure);

/// QIS inversion: flux = ln(T/(T - n tau_b)) / (q tau_b), for 0 <= n < N.
/// All bins full diverges and is an error.
[[nodiscard]] FluxEstimate estimate_qis(long long count, const QisConfig& cfg,
                                        Exposure exposure);

/// Conventional inversion: flux = n/(qT) below the full well; a full well is
/// reported as saturated with the +inf sentinel.
struct ConventionalEstimate {
    double photons_per_s;
    bool saturated;
};

[[nodiscard]] ConventionalEstimate estimate_conventional(long long count,
                                                         const ConventionalConfig& cfg,
                                                         Exposure exposure);

/// One-column CSV with header t_s.
void write_trace_csv(const DetectionTrace& trace, std::ostream& out);
void write_trace_csv(const DetectionTrace& trace, const std::string& path);

}  // namespace spadsim
