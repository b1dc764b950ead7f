/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "core/estimators.hpp"
#include "core/rng.hpp"
#include "core/types.hpp"

namespace spadsim {

enum class Sensor { spad, conventional, qis };

[[nodiscard]] const char* to_string(Sensor sensor);
[[nodiscard]] Sensor sensor_from_string(std::string_view name);

/// Time-domain SPAD detection simulation over one exposure.
///
/// The detector free-runs, so the exposure window opens on the stationary
/// state of the detection renewal process: with probability tau_d/(tau_d+1/r)
/// the window starts inside a dead time (uniform remaining fraction), else
/// the next arrival is a fresh exponential wait at rate r = q*flux + dark.
/// After each detection the detector is dead for max(0, Normal(tau_d,
/// sigma_d)); an afterpulse candidate fires exactly at the window end with
/// probability p_ap, otherwise the next detection waits Exp(r) beyond it.
/// Rejected arrivals inside dead windows are never drawn explicitly; by
/// memorylessness the post-window wait is Exp(r) either way.
[[nodiscard]] DetectionTrace simulate_spad_trace(FluxLevel flux, const SpadConfig& cfg,
                                                 Exposure exposure, SeedSpec seed);

/// Count-only variant of simulate_spad_trace (same event sequence).
[[nodiscard]] long long simulate_spad_count(FluxLevel flux, const SpadConfig& cfg,
                                            Exposure exposure, SeedSpec seed);

/// Poisson(q*flux*T) electrons plus rounded Normal(0, sigma_r) read noise,
/// clamped to [0, full_well].
[[nodiscard]] long long simulate_conventional_count(FluxLevel flux,
                                                    const ConventionalConfig& cfg,
                                                    Exposure exposure, SeedSpec seed);

/// Sum of N independent Bernoulli(1 - exp(-q*flux*tau_b)) bins.
[[nodiscard]] long long simulate_qis_count(FluxLevel flux, const QisConfig& cfg,
                                           Exposure exposure, SeedSpec seed);

/// Aggregated Monte Carlo statistics at one flux level.
struct TrialStats {
    double flux;
    long long trials;
    double mean_count;
    double var_count;      ///< sample variance (n-1)
    double mean_flux_hat;
    double rmse_flux_hat;  ///< sqrt(mean (flux_hat - flux)^2)
};

struct SensorBundle {
    Sensor sensor = Sensor::spad;
    SpadConfig spad{};
    ConventionalConfig conventional{};
    QisConfig qis{};
};

/// Runs `trials` simulations per flux point, estimates flux from each count,
/// and aggregates. Trial t of flux point j uses stream_id
/// base.stream_id + j*trials + t, so results are reproducible and
/// thread-count independent: work is split into fixed-size chunks whose
/// partial sums merge in chunk order.
[[nodiscard]] std::vector<TrialStats> run_trials(const SensorBundle& sensor, Exposure exposure,
                                                 std::span<const double> flux_grid,
                                                 long long trials, SeedSpec base,
                                                 int threads = 1);

/// CSV with header flux_photons_per_s,trials,mean_count,var_count,
/// mean_flux_hat,rmse_flux_hat.
void write_trials_csv(const std::vector<TrialStats>& stats, std::ostream& out);
void write_trials_csv(const std::vector<TrialStats>& stats, const std::string& path);

}  // namespace spadsim
