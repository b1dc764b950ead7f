/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "core/rng.hpp"

#include <cmath>
#include <numbers>

#include "core/math_util.hpp"

namespace spadsim {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(SeedSpec seed) {
    std::uint64_t a = seed.master_seed;
    std::uint64_t b = seed.stream_id;
    state_[0] = splitmix64(a);
    state_[1] = splitmix64(a);
    state_[2] = splitmix64(b);
    state_[3] = splitmix64(b);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::next_unit() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Rng::exponential(double rate) { return -std::log(next_unit()) / rate; }

double Rng::normal(double mean, double stddev) {
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
}

long long Rng::poisson(double mean) {
    if (!(mean > 0.0)) return 0;

    if (mean < 30.0) {
        // Sequential inversion.
        const double u = next_unit();
        double p = std::exp(-mean);
        double cum = p;
        long long k = 0;
        while (u > cum) {
            ++k;
            p *= mean / static_cast<double>(k);
            cum += p;
            if (p == 0.0) break;  // u in the far tail beyond double resolution
        }
        return k;
    }

    // Transformed rejection (Hormann's PTRS).
    const double smu = std::sqrt(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double log_inv_alpha = std::log(1.1239 + 1.1328 / (b - 3.4));
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);

    for (;;) {
        const double u = next_unit() - 0.5;
        const double v = next_unit();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<long long>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + log_inv_alpha - std::log(a / (us * us) + b) <=
            k * log_mean - mean - log_factorial(static_cast<long long>(k))) {
            return static_cast<long long>(k);
        }
    }
}

}  // namespace spadsim
