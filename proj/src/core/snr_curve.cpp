/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "core/snr_curve.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "core/reference_model.hpp"
#include "core/spad_model.hpp"

namespace spadsim {

const char* to_string(ModelTag tag) {
    switch (tag) {
        case ModelTag::spad_approx: return "spad_approx";
        case ModelTag::spad_exact: return "spad_exact";
        case ModelTag::spad_jitter: return "spad_jitter";
        case ModelTag::conventional: return "conventional";
        case ModelTag::qis: return "qis";
        case ModelTag::monte_carlo: return "monte_carlo";
    }
    throw std::invalid_argument("bad model tag");
}

ModelTag model_tag_from_string(std::string_view name) {
    if (name == "spad_approx") return ModelTag::spad_approx;
    if (name == "spad_exact") return ModelTag::spad_exact;
    if (name == "spad_jitter") return ModelTag::spad_jitter;
    if (name == "conventional") return ModelTag::conventional;
    if (name == "qis") return ModelTag::qis;
    if (name == "monte_carlo") return ModelTag::monte_carlo;
    throw std::invalid_argument("unknown model tag '" + std::string(name) + "'");
}

std::vector<double> log_spaced_grid(double flux_min, double flux_max, int points) {
    if (!(flux_min > 0.0) || !std::isfinite(flux_min))
        throw std::invalid_argument("flux_min must be positive");
    if (!(flux_max > flux_min) || !std::isfinite(flux_max))
        throw std::invalid_argument("flux_max must exceed flux_min");
    if (points < 2) throw std::invalid_argument("points must be at least 2");

    std::vector<double> grid(static_cast<std::size_t>(points));
    const double lo = std::log(flux_min);
    const double hi = std::log(flux_max);
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] =
            std::exp(lo + (hi - lo) * static_cast<double>(i) / (points - 1));
    grid.front() = flux_min;
    grid.back() = flux_max;
    return grid;
}

namespace {

double snr_or_sentinel(double flux, double rmse) {
    if (!std::isfinite(rmse) || rmse <= 0.0 || flux <= 0.0)
        return -std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(flux / rmse);
}

}  // namespace

SnrCurve snr_curve_spad(const SpadConfig& cfg, Exposure exposure, double flux_min,
                        double flux_max, int points, ModelTag which) {
    if (which != ModelTag::spad_approx && which != ModelTag::spad_exact &&
        which != ModelTag::spad_jitter)
        throw std::invalid_argument("not a spad model tag");
    validate(cfg, exposure);

    SnrCurve curve;
    curve.model = which;
    curve.flux = log_spaced_grid(flux_min, flux_max, points);
    curve.rmse.reserve(curve.flux.size());
    curve.snr_db.reserve(curve.flux.size());
    for (double phi : curve.flux) {
        double rmse;
        if (which == ModelTag::spad_exact)
            rmse = rmse_exact(FluxLevel{phi}, cfg, exposure);
        else
            rmse = rmse_approx(FluxLevel{phi}, cfg, exposure,
                               which == ModelTag::spad_jitter)
                       .rmse;
        curve.rmse.push_back(rmse);
        curve.snr_db.push_back(snr_or_sentinel(phi, rmse));
    }
    return curve;
}

SnrCurve snr_curve_conventional(const ConventionalConfig& cfg, Exposure exposure,
                                double flux_min, double flux_max, int points) {
    validate(cfg, exposure);
    SnrCurve curve;
    curve.model = ModelTag::conventional;
    curve.flux = log_spaced_grid(flux_min, flux_max, points);
    for (double phi : curve.flux) {
        const RmseSnr point = conventional_rmse_snr(FluxLevel{phi}, cfg, exposure);
        curve.rmse.push_back(point.rmse);
        curve.snr_db.push_back(point.snr_db);
    }
    return curve;
}

SnrCurve snr_curve_qis(const QisConfig& cfg, Exposure exposure, double flux_min,
                       double flux_max, int points) {
    (void)qis_bin_count(cfg, exposure);
    SnrCurve curve;
    curve.model = ModelTag::qis;
    curve.flux = log_spaced_grid(flux_min, flux_max, points);
    for (double phi : curve.flux) {
        const RmseSnr point = qis_rmse_snr(FluxLevel{phi}, cfg, exposure);
        curve.rmse.push_back(point.rmse);
        curve.snr_db.push_back(point.snr_db);
    }
    return curve;
}

namespace {

/// Threshold crossing between grid indices a (below) and b (at/above), on the
/// interpolant linear in dB against log flux.
double crossing(const SnrCurve& c, std::size_t a, std::size_t b, double threshold) {
    const double sa = c.snr_db[a];
    const double sb = c.snr_db[b];
    if (!std::isfinite(sa)) return c.flux[b];
    const double t = (threshold - sa) / (sb - sa);
    return std::exp(std::log(c.flux[a]) + t * (std::log(c.flux[b]) - std::log(c.flux[a])));
}

}  // namespace

std::optional<double> dynamic_range(const SnrCurve& curve, double threshold_db) {
    const std::size_t n = curve.flux.size();
    if (n != curve.snr_db.size() || n != curve.rmse.size())
        throw std::invalid_argument("curve vectors must have equal length");
    std::size_t first = n, last = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (curve.snr_db[i] >= threshold_db) {
            if (first == n) first = i;
            last = i;
        }
    }
    if (first == n) return std::nullopt;

    const double low =
        first == 0 ? curve.flux[0] : crossing(curve, first - 1, first, threshold_db);
    double high = curve.flux[last];
    if (last + 1 < n && std::isfinite(curve.snr_db[last + 1]))
        high = crossing(curve, last + 1, last, threshold_db);
    return high / low;
}

void write_csv(const SnrCurve& curve, std::ostream& out) {
    out << "flux_photons_per_s,rmse,snr_db,model\n";
    char buf[128];
    for (std::size_t i = 0; i < curve.flux.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%s\n", curve.flux[i], curve.rmse[i],
                      curve.snr_db[i], to_string(curve.model));
        out << buf;
    }
}

void write_csv(const SnrCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_csv(curve, out);
    if (!out.good()) throw IoError("write failed: " + path);
}

SnrCurve read_snr_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "flux_photons_per_s,rmse,snr_db,model")
        throw IoError("bad snr csv header");
    SnrCurve curve;
    bool have_model = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string flux_s, rmse_s, snr_s, model_s;
        if (!std::getline(row, flux_s, ',') || !std::getline(row, rmse_s, ',') ||
            !std::getline(row, snr_s, ',') || !std::getline(row, model_s))
            throw IoError("bad snr csv row: " + line);
        curve.flux.push_back(std::stod(flux_s));
        curve.rmse.push_back(std::stod(rmse_s));
        curve.snr_db.push_back(std::stod(snr_s));
        const ModelTag tag = model_tag_from_string(model_s);
        if (have_model && tag != curve.model)
            throw IoError("mixed model tags in snr csv");
        curve.model = tag;
        have_model = true;
    }
    return curve;
}

SnrCurve read_snr_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    return read_snr_csv(in);
}

}  // namespace spadsim
