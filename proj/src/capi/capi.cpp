/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "spadsim/spadsim.h"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "core/config_file.hpp"
#include "core/estimators.hpp"
#include "core/image.hpp"
#include "core/pfm.hpp"
#include "core/pipeline.hpp"
#include "core/png_writer.hpp"
#include "core/reference_model.hpp"
#include "core/simulate.hpp"
#include "core/snr_curve.hpp"
#include "core/spad_model.hpp"
#include "core/types.hpp"

using namespace spadsim;

namespace {

thread_local std::string g_last_error;

template <typename F>
spadsim_status wrap(F&& body) noexcept {
    try {
        body();
        return SPADSIM_OK;
    } catch (const IoError& e) {
        g_last_error = e.what();
        return SPADSIM_ERR_IO;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return SPADSIM_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SPADSIM_ERR_RUNTIME;
    } catch (...) {
        g_last_error = "unknown error";
        return SPADSIM_ERR_RUNTIME;
    }
}

void check(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

double field(double value, const char* key) {
    if (std::isnan(value))
        throw std::invalid_argument(std::string("config missing key '") + key + "'");
    return value;
}

double defaulted(double value) { return std::isnan(value) ? 0.0 : value; }

SpadConfig spad_config(const spadsim_config& c) {
    SpadConfig cfg;
    cfg.quantum_efficiency = field(c.q, "q");
    cfg.dead_time_s = field(c.tau_d_s, "tau_d_s");
    cfg.dark_rate_hz = defaulted(c.dark_rate_hz);
    cfg.afterpulse_prob = defaulted(c.p_ap);
    cfg.jitter_sigma_s = defaulted(c.jitter_sigma_s);
    return cfg;
}

ConventionalConfig conventional_config(const spadsim_config& c) {
    ConventionalConfig cfg;
    cfg.quantum_efficiency = field(c.q, "q");
    const double wells = field(c.fwc, "fwc");
    if (!(wells >= 1.0) || wells != std::floor(wells))
        throw std::invalid_argument("fwc must be a positive integer");
    cfg.full_well_e = static_cast<long long>(wells);
    cfg.read_noise_e = defaulted(c.read_noise_e);
    return cfg;
}

QisConfig qis_config(const spadsim_config& c) {
    QisConfig cfg;
    cfg.quantum_efficiency = field(c.q, "q");
    cfg.bin_width_s = field(c.qis_tau_b_s, "qis_tau_b_s");
    cfg.read_noise_e = defaulted(c.read_noise_e);
    return cfg;
}

SensorBundle bundle_for(const char* sensor, const spadsim_config& c) {
    SensorBundle bundle;
    bundle.sensor = sensor_from_string(sensor ? sensor : "");
    switch (bundle.sensor) {
        case Sensor::spad: bundle.spad = spad_config(c); break;
        case Sensor::conventional: bundle.conventional = conventional_config(c); break;
        case Sensor::qis: bundle.qis = qis_config(c); break;
    }
    return bundle;
}

}  // namespace

struct spadsim_curve {
    SnrCurve curve;
};

struct spadsim_trace {
    DetectionTrace trace;
};

struct spadsim_trials {
    std::vector<TrialStats> stats;
};

struct spadsim_image {
    FluxImage image;
};

struct spadsim_counts {
    CountImage counts;
};

struct spadsim_recon {
    ReconResult recon;
    spadsim_image view;  // borrowed flux view handed out by spadsim_recon_flux
};

extern "C" {

const char* spadsim_last_error(void) { return g_last_error.c_str(); }

const char* spadsim_version(void) { return "0.1.0"; }

spadsim_config spadsim_config_default(void) {
    spadsim_config c;
    c.q = kUnset;
    c.tau_d_s = kUnset;
    c.dark_rate_hz = kUnset;
    c.p_ap = kUnset;
    c.jitter_sigma_s = kUnset;
    c.exposure_s = kUnset;
    c.fwc = kUnset;
    c.read_noise_e = kUnset;
    c.qis_tau_b_s = kUnset;
    return c;
}

spadsim_status spadsim_config_load(const char* path, spadsim_config* out) {
    return wrap([&] {
        check(path && out, "null argument");
        const ConfigFile file = load_config(path);
        spadsim_config c = spadsim_config_default();
        if (file.q) c.q = *file.q;
        if (file.tau_d_s) c.tau_d_s = *file.tau_d_s;
        if (file.dark_rate_hz) c.dark_rate_hz = *file.dark_rate_hz;
        if (file.p_ap) c.p_ap = *file.p_ap;
        if (file.jitter_sigma_s) c.jitter_sigma_s = *file.jitter_sigma_s;
        if (file.exposure_s) c.exposure_s = *file.exposure_s;
        if (file.fwc) c.fwc = *file.fwc;
        if (file.read_noise_e) c.read_noise_e = *file.read_noise_e;
        if (file.qis_tau_b_s) c.qis_tau_b_s = *file.qis_tau_b_s;
        *out = c;
    });
}

spadsim_status spadsim_spad_expected_counts(const spadsim_config* cfg, double exposure_s,
                                            double flux, double* out) {
    return wrap([&] {
        check(cfg && out, "null argument");
        *out = expected_counts(FluxLevel{flux}, spad_config(*cfg), Exposure{exposure_s});
    });
}

spadsim_status spadsim_spad_count_variance(const spadsim_config* cfg, double exposure_s,
                                           double flux, double* out) {
    return wrap([&] {
        check(cfg && out, "null argument");
        *out = count_variance(FluxLevel{flux}, spad_config(*cfg), Exposure{exposure_s});
    });
}

spadsim_status spadsim_spad_rmse_breakdown(const spadsim_config* cfg, double exposure_s,
                                           double flux, int jitter_corrected,
                                           spadsim_rmse_breakdown* out) {
    return wrap([&] {
        check(cfg && out, "null argument");
        const RmseBreakdown b = rmse_approx(FluxLevel{flux}, spad_config(*cfg),
                                            Exposure{exposure_s}, jitter_corrected != 0);
        out->bias_dark = b.bias_dark;
        out->bias_afterpulse = b.bias_afterpulse;
        out->var_shot = b.var_shot;
        out->var_quantization = b.var_quantization;
        out->rmse = b.rmse;
    });
}

spadsim_status spadsim_snr_db(double flux, double rmse, double* out) {
    return wrap([&] {
        check(out != nullptr, "null argument");
        *out = snr_from_rmse(FluxLevel{flux}, rmse);
    });
}

spadsim_status spadsim_conventional_rmse_snr(const spadsim_config* cfg, double exposure_s,
                                             double flux, double* rmse, double* snr_db) {
    return wrap([&] {
        check(cfg && rmse && snr_db, "null argument");
        const RmseSnr r =
            conventional_rmse_snr(FluxLevel{flux}, conventional_config(*cfg), Exposure{exposure_s});
        *rmse = r.rmse;
        *snr_db = r.snr_db;
    });
}

spadsim_status spadsim_qis_rmse_snr(const spadsim_config* cfg, double exposure_s, double flux,
                                    double* rmse, double* snr_db) {
    return wrap([&] {
        check(cfg && rmse && snr_db, "null argument");
        const RmseSnr r = qis_rmse_snr(FluxLevel{flux}, qis_config(*cfg), Exposure{exposure_s});
        *rmse = r.rmse;
        *snr_db = r.snr_db;
    });
}

spadsim_status spadsim_estimate_from_counts(const spadsim_config* cfg, double exposure_s,
                                            long long count, double* flux_hat) {
    return wrap([&] {
        check(cfg && flux_hat, "null argument");
        *flux_hat =
            estimate_from_counts(count, spad_config(*cfg), Exposure{exposure_s}).photons_per_s;
    });
}

spadsim_status spadsim_estimate_from_timestamps(const spadsim_config* cfg, double exposure_s,
                                                const double* timestamps_s, size_t count,
                                                double* flux_hat) {
    return wrap([&] {
        check(cfg && flux_hat && (timestamps_s || count == 0), "null argument");
        const DetectionTrace trace = make_trace(
            std::vector<double>(timestamps_s, timestamps_s + count), Exposure{exposure_s});
        *flux_hat = estimate_from_interarrivals(trace, spad_config(*cfg)).photons_per_s;
    });
}

spadsim_status spadsim_estimate_qis(const spadsim_config* cfg, double exposure_s,
                                    long long count, double* flux_hat) {
    return wrap([&] {
        check(cfg && flux_hat, "null argument");
        *flux_hat = estimate_qis(count, qis_config(*cfg), Exposure{exposure_s}).photons_per_s;
    });
}

spadsim_status spadsim_estimate_conventional(const spadsim_config* cfg, double exposure_s,
                                             long long count, double* flux_hat,
                                             int* saturated) {
    return wrap([&] {
        check(cfg && flux_hat && saturated, "null argument");
        const ConventionalEstimate est =
            estimate_conventional(count, conventional_config(*cfg), Exposure{exposure_s});
        *flux_hat = est.photons_per_s;
        *saturated = est.saturated ? 1 : 0;
    });
}

spadsim_status spadsim_snr_curve(const char* sensor, const spadsim_config* cfg,
                                 double exposure_s, double flux_min, double flux_max,
                                 int points, spadsim_curve** out) {
    return wrap([&] {
        check(sensor && cfg && out, "null argument");
        const std::string name(sensor);
        const Exposure exposure{exposure_s};
        SnrCurve curve;
        if (name == "spad")
            curve = snr_curve_spad(spad_config(*cfg), exposure, flux_min, flux_max, points,
                                   ModelTag::spad_approx);
        else if (name == "spad-exact")
            curve = snr_curve_spad(spad_config(*cfg), exposure, flux_min, flux_max, points,
                                   ModelTag::spad_exact);
        else if (name == "spad-jitter")
            curve = snr_curve_spad(spad_config(*cfg), exposure, flux_min, flux_max, points,
                                   ModelTag::spad_jitter);
        else if (name == "conventional")
            curve = snr_curve_conventional(conventional_config(*cfg), exposure, flux_min,
                                           flux_max, points);
        else if (name == "qis")
            curve = snr_curve_qis(qis_config(*cfg), exposure, flux_min, flux_max, points);
        else
            throw std::invalid_argument("unknown sensor '" + name + "'");
        *out = new spadsim_curve{std::move(curve)};
    });
}

size_t spadsim_curve_size(const spadsim_curve* curve) {
    return curve ? curve->curve.flux.size() : 0;
}

const char* spadsim_curve_model(const spadsim_curve* curve) {
    return curve ? to_string(curve->curve.model) : "";
}

spadsim_status spadsim_curve_row(const spadsim_curve* curve, size_t index, double* flux,
                                 double* rmse, double* snr_db) {
    return wrap([&] {
        check(curve && flux && rmse && snr_db, "null argument");
        check(index < curve->curve.flux.size(), "row index out of range");
        *flux = curve->curve.flux[index];
        *rmse = curve->curve.rmse[index];
        *snr_db = curve->curve.snr_db[index];
    });
}

spadsim_status spadsim_curve_write_csv(const spadsim_curve* curve, const char* path) {
    return wrap([&] {
        check(curve && path, "null argument");
        write_csv(curve->curve, path);
    });
}

spadsim_status spadsim_curve_read_csv(const char* path, spadsim_curve** out) {
    return wrap([&] {
        check(path && out, "null argument");
        *out = new spadsim_curve{read_snr_csv(path)};
    });
}

spadsim_status spadsim_dynamic_range(const spadsim_curve* curve, double threshold_db,
                                     double* ratio, int* found) {
    return wrap([&] {
        check(curve && ratio && found, "null argument");
        const auto range = dynamic_range(curve->curve, threshold_db);
        *found = range.has_value() ? 1 : 0;
        if (range) *ratio = *range;
    });
}

void spadsim_curve_free(spadsim_curve* curve) { delete curve; }

spadsim_status spadsim_simulate_spad_trace(const spadsim_config* cfg, double exposure_s,
                                           double flux, uint64_t master_seed,
                                           uint64_t stream_id, spadsim_trace** out) {
    return wrap([&] {
        check(cfg && out, "null argument");
        *out = new spadsim_trace{simulate_spad_trace(FluxLevel{flux}, spad_config(*cfg),
                                                     Exposure{exposure_s},
                                                     SeedSpec{master_seed, stream_id})};
    });
}

size_t spadsim_trace_size(const spadsim_trace* trace) {
    return trace ? trace->trace.timestamps_s.size() : 0;
}

const double* spadsim_trace_timestamps(const spadsim_trace* trace) {
    return trace ? trace->trace.timestamps_s.data() : nullptr;
}

spadsim_status spadsim_trace_write_csv(const spadsim_trace* trace, const char* path) {
    return wrap([&] {
        check(trace && path, "null argument");
        write_trace_csv(trace->trace, path);
    });
}

spadsim_status spadsim_trace_estimate(const spadsim_trace* trace, const spadsim_config* cfg,
                                      double* flux_hat) {
    return wrap([&] {
        check(trace && cfg && flux_hat, "null argument");
        *flux_hat = estimate_from_interarrivals(trace->trace, spad_config(*cfg)).photons_per_s;
    });
}

void spadsim_trace_free(spadsim_trace* trace) { delete trace; }

spadsim_status spadsim_run_trials(const char* sensor, const spadsim_config* cfg,
                                  double exposure_s, const double* fluxes, size_t flux_count,
                                  long long trials, uint64_t master_seed, int threads,
                                  spadsim_trials** out) {
    return wrap([&] {
        check(sensor && cfg && fluxes && out, "null argument");
        const SensorBundle bundle = bundle_for(sensor, *cfg);
        *out = new spadsim_trials{run_trials(bundle, Exposure{exposure_s},
                                             std::span<const double>(fluxes, flux_count),
                                             trials, SeedSpec{master_seed, 0}, threads)};
    });
}

size_t spadsim_trials_size(const spadsim_trials* trials) {
    return trials ? trials->stats.size() : 0;
}

spadsim_status spadsim_trials_row(const spadsim_trials* trials, size_t index,
                                  spadsim_trial_stats* out) {
    return wrap([&] {
        check(trials && out, "null argument");
        check(index < trials->stats.size(), "row index out of range");
        const TrialStats& s = trials->stats[index];
        out->flux = s.flux;
        out->trials = s.trials;
        out->mean_count = s.mean_count;
        out->var_count = s.var_count;
        out->mean_flux_hat = s.mean_flux_hat;
        out->rmse_flux_hat = s.rmse_flux_hat;
    });
}

spadsim_status spadsim_trials_write_csv(const spadsim_trials* trials, const char* path) {
    return wrap([&] {
        check(trials && path, "null argument");
        write_trials_csv(trials->stats, path);
    });
}

void spadsim_trials_free(spadsim_trials* trials) { delete trials; }

spadsim_status spadsim_image_load_pfm(const char* path, spadsim_image** out,
                                      long long* negatives_clamped) {
    return wrap([&] {
        check(path && out, "null argument");
        PfmLoadResult loaded = load_pfm(path);
        if (negatives_clamped) *negatives_clamped = loaded.negatives_clamped;
        *out = new spadsim_image{std::move(loaded.image)};
    });
}

spadsim_status spadsim_image_create(int width, int height, int channels, const double* data,
                                    spadsim_image** out) {
    return wrap([&] {
        check(data && out, "null argument");
        const std::size_t n = static_cast<std::size_t>(width > 0 ? width : 0) *
                              static_cast<std::size_t>(height > 0 ? height : 0) *
                              static_cast<std::size_t>(channels > 0 ? channels : 0);
        *out = new spadsim_image{
            make_flux_image(width, height, channels, std::vector<double>(data, data + n))};
    });
}

int spadsim_image_width(const spadsim_image* image) { return image ? image->image.width : 0; }
int spadsim_image_height(const spadsim_image* image) { return image ? image->image.height : 0; }
int spadsim_image_channels(const spadsim_image* image) {
    return image ? image->image.channels : 0;
}
const double* spadsim_image_data(const spadsim_image* image) {
    return image ? image->image.data.data() : nullptr;
}

spadsim_status spadsim_image_write_pfm(const spadsim_image* image, const char* path) {
    return wrap([&] {
        check(image && path, "null argument");
        write_pfm(image->image, path);
    });
}

spadsim_status spadsim_image_rescale_dynamic_range(const spadsim_image* image,
                                                   double target_ratio, double peak_flux,
                                                   spadsim_image** out) {
    return wrap([&] {
        check(image && out, "null argument");
        *out = new spadsim_image{rescale_dynamic_range(image->image, target_ratio, peak_flux)};
    });
}

void spadsim_image_free(spadsim_image* image) { delete image; }

spadsim_status spadsim_capture(const spadsim_image* image, const char* sensor,
                               const spadsim_config* cfg, double exposure_s,
                               uint64_t master_seed, int fast, int threads,
                               spadsim_counts** out) {
    return wrap([&] {
        check(image && sensor && cfg && out, "null argument");
        const SensorBundle bundle = bundle_for(sensor, *cfg);
        if (fast && bundle.sensor == Sensor::spad &&
            (bundle.spad.afterpulse_prob != 0.0 || bundle.spad.jitter_sigma_s != 0.0))
            throw std::invalid_argument("fast capture requires p_ap = 0 and jitter_sigma = 0");
        *out = new spadsim_counts{simulate_capture(image->image, bundle, Exposure{exposure_s},
                                                   SeedSpec{master_seed, 0}, fast != 0,
                                                   threads)};
    });
}

int spadsim_counts_width(const spadsim_counts* counts) {
    return counts ? counts->counts.width : 0;
}
int spadsim_counts_height(const spadsim_counts* counts) {
    return counts ? counts->counts.height : 0;
}
int spadsim_counts_channels(const spadsim_counts* counts) {
    return counts ? counts->counts.channels : 0;
}
const long long* spadsim_counts_data(const spadsim_counts* counts) {
    return counts ? counts->counts.counts.data() : nullptr;
}
void spadsim_counts_free(spadsim_counts* counts) { delete counts; }

spadsim_status spadsim_reconstruct(const spadsim_counts* counts, spadsim_recon** out) {
    return wrap([&] {
        check(counts && out, "null argument");
        auto* recon = new spadsim_recon{reconstruct_flux(counts->counts), {}};
        recon->view.image = recon->recon.flux;
        *out = recon;
    });
}

const spadsim_image* spadsim_recon_flux(const spadsim_recon* recon) {
    return recon ? &recon->view : nullptr;
}

const unsigned char* spadsim_recon_saturated_mask(const spadsim_recon* recon) {
    return recon ? recon->recon.saturated.data() : nullptr;
}

void spadsim_recon_free(spadsim_recon* recon) { delete recon; }

spadsim_status spadsim_tone_map_png(const spadsim_image* image, double key, const char* path) {
    return wrap([&] {
        check(image && path, "null argument");
        const std::vector<std::uint8_t> toned = tone_map(image->image, key);
        write_png8(path, image->image.width, image->image.height, image->image.channels, toned);
    });
}

spadsim_status spadsim_recon_write_summary_csv(const spadsim_recon* recon, const char* path) {
    return wrap([&] {
        check(recon && path, "null argument");
        write_summary_csv(recon->recon, path);
    });
}

spadsim_status spadsim_render(const char* input_pfm, const char* sensor,
                              const spadsim_config* cfg, double exposure_s,
                              uint64_t master_seed, double key, int fast, int threads,
                              double rescale_ratio, double peak_flux,
                              const char* out_prefix) {
    return wrap([&] {
        check(input_pfm && sensor && cfg && out_prefix, "null argument");
        PfmLoadResult loaded = load_pfm(input_pfm);
        FluxImage scene = std::move(loaded.image);
        if (rescale_ratio > 0.0)
            scene = rescale_dynamic_range(scene, rescale_ratio, peak_flux);

        const SensorBundle bundle = bundle_for(sensor, *cfg);
        const CountImage counts = simulate_capture(scene, bundle, Exposure{exposure_s},
                                                   SeedSpec{master_seed, 0}, fast != 0,
                                                   threads);
        const ReconResult recon = reconstruct_flux(counts);
        const std::vector<std::uint8_t> toned = tone_map(recon.flux, key);
        write_outputs(recon, toned, recon.flux.channels, outputs_for_prefix(out_prefix));
    });
}

}  // extern "C"
