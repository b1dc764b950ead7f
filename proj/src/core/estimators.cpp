/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "core/estimators.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace spadsim {

DetectionTrace make_trace(std::vector<double> timestamps_s, Exposure exposure) {
    validate(exposure);
    double prev = 0.0;
    for (double t : timestamps_s) {
        if (!std::isfinite(t) || t <= prev)
            throw std::invalid_argument("timestamps must be strictly increasing and positive");
        if (t > exposure.seconds)
            throw std::invalid_argument("timestamp beyond exposure");
        prev = t;
    }
    return {std::move(timestamps_s), exposure};
}

FluxEstimate estimate_from_interarrivals(const DetectionTrace& trace, const SpadConfig& cfg) {
    validate(cfg, trace.exposure);
    const auto n = trace.timestamps_s.size();
    if (n < 2) throw std::invalid_argument("insufficient detections");
    // Gaps telescope: counting the gap from t = 0 to the first detection, the
    // mean gap is just last timestamp / n.
    const double mean_gap = trace.timestamps_s.back() / static_cast<double>(n);
    if (mean_gap <= cfg.dead_time_s)
        throw std::invalid_argument("mean gap at or below dead time");
    return {1.0 / (cfg.quantum_efficiency * (mean_gap - cfg.dead_time_s)), "spad_interarrival"};
}

FluxEstimate estimate_from_counts(long long count, const SpadConfig& cfg, Exposure exposure) {
    validate(cfg, exposure);
    if (count < 0) throw std::invalid_argument("count must be nonnegative");
    if (count == 0) return {0.0, "spad_counts"};
    const double T = exposure.seconds;
    const double used = static_cast<double>(count) * cfg.dead_time_s;
    // Boundary counts whose dead time consumes the exposure up to float noise
    // would produce arbitrarily large estimates; treat them as errors.
    if (used >= T * (1.0 - 1e-12))
        throw std::invalid_argument("count exceeds exposure capacity");
    return {static_cast<double>(count) / (cfg.quantum_efficiency * (T - used)), "spad_counts"};
}

FluxEstimate estimate_qis(long long count, const QisConfig& cfg, Exposure exposure) {
    const long long bins = qis_bin_count(cfg, exposure);
    if (count < 0) throw std::invalid_argument("count must be nonnegative");
    if (count > bins) throw std::invalid_argument("count exceeds bin count");
    if (count == bins) throw std::invalid_argument("all bins full, estimator diverges");
    const double T = exposure.seconds;
    const double frac = static_cast<double>(count) / static_cast<double>(bins);
    const double flux =
        -std::log1p(-frac) / (cfg.quantum_efficiency * cfg.bin_width_s);
    return {flux, "qis_counts"};
}

ConventionalEstimate estimate_conventional(long long count, const ConventionalConfig& cfg,
                                           Exposure exposure) {
    validate(cfg, exposure);
    if (count < 0) throw std::invalid_argument("count must be nonnegative");
    if (count > cfg.full_well_e) throw std::invalid_argument("count exceeds full well");
    if (count == cfg.full_well_e)
        return {std::numeric_limits<double>::infinity(), true};
    return {static_cast<double>(count) / (cfg.quantum_efficiency * exposure.seconds), false};
}

void write_trace_csv(const DetectionTrace& trace, std::ostream& out) {
    out << "t_s\n";
    char buf[40];
    for (double t : trace.timestamps_s) {
        std::snprintf(buf, sizeof buf, "%.17g\n", t);
        out << buf;
    }
}

void write_trace_csv(const DetectionTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_trace_csv(trace, out);
    if (!out.good()) throw IoError("write failed: " + path);
}

}  // namespace spadsim
