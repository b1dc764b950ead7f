/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "core/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "core/reference_model.hpp"
#include "core/spad_model.hpp"

namespace spadsim {

const char* to_string(Sensor sensor) {
    switch (sensor) {
        case Sensor::spad: return "spad";
        case Sensor::conventional: return "conventional";
        case Sensor::qis: return "qis";
    }
    throw std::invalid_argument("bad sensor");
}

Sensor sensor_from_string(std::string_view name) {
    if (name == "spad") return Sensor::spad;
    if (name == "conventional") return Sensor::conventional;
    if (name == "qis") return Sensor::qis;
    throw std::invalid_argument("unknown sensor '" + std::string(name) + "'");
}

namespace {

double realized_dead_time(Rng& rng, const SpadConfig& cfg) {
    if (cfg.jitter_sigma_s == 0.0) return cfg.dead_time_s;
    // Truncated at zero; for sigma_d < tau_d/3 the truncated mass is < 1.4e-3.
    return std::max(0.0, rng.normal(cfg.dead_time_s, cfg.jitter_sigma_s));
}

/// Runs the SPAD event loop, invoking sink(t) per detection time in (0, T].
template <typename Sink>
void spad_event_loop(FluxLevel flux, const SpadConfig& cfg, Exposure exposure, SeedSpec seed,
                     Sink&& sink) {
    validate(cfg, exposure);
    validate(flux);
    const double rate = cfg.quantum_efficiency * flux.photons_per_s + cfg.dark_rate_hz;
    if (rate <= 0.0) return;

    Rng rng(seed);
    const double T = exposure.seconds;

    // Stationary window start. The dead-window branch uses a fresh duration
    // draw with a uniform remaining fraction; exact for sigma_d = 0.
    const double p_dead = cfg.dead_time_s / (cfg.dead_time_s + 1.0 / rate);
    double t;
    if (rng.next_unit() < p_dead) {
        t = rng.next_unit() * realized_dead_time(rng, cfg) + rng.exponential(rate);
    } else {
        t = rng.exponential(rate);
    }

    while (t <= T) {
        sink(t);
        const double window_end = t + realized_dead_time(rng, cfg);
        if (cfg.afterpulse_prob > 0.0 && rng.next_unit() < cfg.afterpulse_prob) {
            t = window_end;  // afterpulse fires the moment the detector re-arms
        } else {
            t = window_end + rng.exponential(rate);
        }
    }
}

}  // namespace

DetectionTrace simulate_spad_trace(FluxLevel flux, const SpadConfig& cfg, Exposure exposure,
                                   SeedSpec seed) {
    DetectionTrace trace;
    trace.exposure = exposure;
    spad_event_loop(flux, cfg, exposure, seed,
                    [&trace](double t) { trace.timestamps_s.push_back(t); });
    return trace;
}

long long simulate_spad_count(FluxLevel flux, const SpadConfig& cfg, Exposure exposure,
                              SeedSpec seed) {
    long long count = 0;
    spad_event_loop(flux, cfg, exposure, seed, [&count](double) { ++count; });
    return count;
}

long long simulate_conventional_count(FluxLevel flux, const ConventionalConfig& cfg,
                                      Exposure exposure, SeedSpec seed) {
    validate(cfg, exposure);
    validate(flux);
    Rng rng(seed);
    const double mean = cfg.quantum_efficiency * flux.photons_per_s * exposure.seconds;
    long long electrons = rng.poisson(mean);
    if (cfg.read_noise_e > 0.0)
        electrons += std::llround(rng.normal(0.0, cfg.read_noise_e));
    return std::clamp(electrons, 0LL, cfg.full_well_e);
}

long long simulate_qis_count(FluxLevel flux, const QisConfig& cfg, Exposure exposure,
                             SeedSpec seed) {
    const long long bins = qis_bin_count(cfg, exposure);
    validate(flux);
    Rng rng(seed);
    const double p_one =
        -std::expm1(-cfg.quantum_efficiency * flux.photons_per_s * cfg.bin_width_s);
    long long count = 0;
    for (long long i = 0; i < bins; ++i)
        if (rng.next_unit() < p_one) ++count;
    return count;
}

namespace {

struct ChunkSums {
    double count = 0.0;         // sum of (count - shift)
    double count_sq = 0.0;      // sum of (count - shift)^2
    double est = 0.0;           // sum of flux estimates
    double sq_err = 0.0;        // sum of (flux_hat - flux)^2
};

/// Per-trial simulate + estimate for one flux point.
struct TrialRunner {
    const SensorBundle& bundle;
    Exposure exposure;
    double flux;
    long long spad_capacity;  // floor(T/tau_d), spad only

    double estimate(long long count) const {
        switch (bundle.sensor) {
            case Sensor::spad: {
                // The stationary window start can straddle one extra count at
                // extreme flux; clamp to the largest invertible count.
                long long n = std::min(count, spad_capacity);
                for (;;) {
                    try {
                        return estimate_from_counts(n, bundle.spad, exposure).photons_per_s;
                    } catch (const std::invalid_argument&) {
                        if (n == 0) return 0.0;
                        --n;
                    }
                }
            }
            case Sensor::conventional: {
                const auto est = estimate_conventional(count, bundle.conventional, exposure);
                // Saturated wells read back as the saturation flux.
                return est.saturated
                           ? conventional_saturation_flux(bundle.conventional, exposure)
                           : est.photons_per_s;
            }
            case Sensor::qis: {
                const long long bins = qis_bin_count(bundle.qis, exposure);
                if (count >= bins) return std::numeric_limits<double>::infinity();
                return estimate_qis(count, bundle.qis, exposure).photons_per_s;
            }
        }
        throw std::invalid_argument("bad sensor");
    }

    long long simulate(SeedSpec seed) const {
        switch (bundle.sensor) {
            case Sensor::spad:
                return simulate_spad_count(FluxLevel{flux}, bundle.spad, exposure, seed);
            case Sensor::conventional:
                return simulate_conventional_count(FluxLevel{flux}, bundle.conventional,
                                                   exposure, seed);
            case Sensor::qis:
                return simulate_qis_count(FluxLevel{flux}, bundle.qis, exposure, seed);
        }
        throw std::invalid_argument("bad sensor");
    }
};

constexpr long long kChunkTrials = 1024;

}  // namespace

std::vector<TrialStats> run_trials(const SensorBundle& bundle, Exposure exposure,
                                   std::span<const double> flux_grid, long long trials,
                                   SeedSpec base, int threads) {
    if (trials < 2) throw std::invalid_argument("trials must be at least 2");
    if (threads < 1) throw std::invalid_argument("threads must be at least 1");

    std::vector<TrialStats> out;
    out.reserve(flux_grid.size());

    for (std::size_t j = 0; j < flux_grid.size(); ++j) {
        const double flux = flux_grid[j];
        validate(FluxLevel{flux});

        TrialRunner runner{bundle, exposure, flux, 0};
        double shift = 0.0;
        switch (bundle.sensor) {
            case Sensor::spad:
                runner.spad_capacity = static_cast<long long>(
                    std::floor(exposure.seconds / bundle.spad.dead_time_s));
                shift = std::floor(expected_counts(FluxLevel{flux}, bundle.spad, exposure));
                break;
            case Sensor::conventional:
                shift = std::floor(
                    std::min(bundle.conventional.quantum_efficiency * flux * exposure.seconds,
                             static_cast<double>(bundle.conventional.full_well_e)));
                break;
            case Sensor::qis:
                shift = std::floor(qis_mean_counts(FluxLevel{flux}, bundle.qis, exposure));
                break;
        }

        // Fixed-size chunks keep aggregation identical for every thread count:
        // chunk sums are merged in chunk order after all workers finish.
        const long long chunk_count = (trials + kChunkTrials - 1) / kChunkTrials;
        std::vector<ChunkSums> sums(static_cast<std::size_t>(chunk_count));

        auto run_chunk = [&](long long chunk) {
            const long long begin = chunk * kChunkTrials;
            const long long end = std::min(trials, begin + kChunkTrials);
            ChunkSums& s = sums[static_cast<std::size_t>(chunk)];
            for (long long t = begin; t < end; ++t) {
                const SeedSpec seed{base.master_seed,
                                    base.stream_id +
                                        static_cast<std::uint64_t>(j) *
                                            static_cast<std::uint64_t>(trials) +
                                        static_cast<std::uint64_t>(t)};
                const long long count = runner.simulate(seed);
                const double centered = static_cast<double>(count) - shift;
                s.count += centered;
                s.count_sq += centered * centered;
                const double est = runner.estimate(count);
                s.est += est;
                const double err = est - flux;
                s.sq_err += err * err;
            }
        };

        if (threads == 1 || chunk_count == 1) {
            for (long long c = 0; c < chunk_count; ++c) run_chunk(c);
        } else {
            std::vector<std::thread> pool;
            std::atomic<long long> next{0};
            const int workers = static_cast<int>(
                std::min<long long>(threads, chunk_count));
            for (int w = 0; w < workers; ++w) {
                pool.emplace_back([&] {
                    for (;;) {
                        const long long c = next.fetch_add(1);
                        if (c >= chunk_count) return;
                        run_chunk(c);
                    }
                });
            }
            for (auto& th : pool) th.join();
        }

        ChunkSums total;
        for (const ChunkSums& s : sums) {
            total.count += s.count;
            total.count_sq += s.count_sq;
            total.est += s.est;
            total.sq_err += s.sq_err;
        }

        const double n = static_cast<double>(trials);
        TrialStats stats{};
        stats.flux = flux;
        stats.trials = trials;
        stats.mean_count = shift + total.count / n;
        stats.var_count =
            std::max(0.0, (total.count_sq - total.count * total.count / n) / (n - 1.0));
        stats.mean_flux_hat = total.est / n;
        stats.rmse_flux_hat = std::sqrt(total.sq_err / n);
        out.push_back(stats);
    }
    return out;
}

void write_trials_csv(const std::vector<TrialStats>& stats, std::ostream& out) {
    out << "flux_photons_per_s,trials,mean_count,var_count,mean_flux_hat,rmse_flux_hat\n";
    char buf[192];
    for (const TrialStats& s : stats) {
        std::snprintf(buf, sizeof buf, "%.17g,%lld,%.17g,%.17g,%.17g,%.17g\n", s.flux, s.trials,
                      s.mean_count, s.var_count, s.mean_flux_hat, s.rmse_flux_hat);
        out << buf;
    }
}

void write_trials_csv(const std::vector<TrialStats>& stats, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_trials_csv(stats, out);
    if (!out.good()) throw IoError("write failed: " + path);
}

}  // namespace spadsim
