/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "core/math_util.hpp"

#include <array>
#include <cmath>

namespace spadsim {

namespace {

constexpr double kRelativeCutoff = 1e-18;
// exp() underflows to 0 below roughly -745; sums bounded by a few thousand
// terms cannot lift a seed this small back into the normal range.
constexpr double kLogUnderflow = -760.0;

const std::array<double, 128>& small_log_factorials() {
    static const auto table = [] {
        std::array<double, 128> t{};
        t[0] = 0.0;
        for (std::size_t i = 1; i < t.size(); ++i)
            t[i] = t[i - 1] + std::log(static_cast<double>(i));
        return t;
    }();
    return table;
}

}  // namespace

double log_factorial(long long k) {
    if (k < 0) return 0.0;
    const auto& table = small_log_factorials();
    if (static_cast<std::size_t>(k) < table.size()) return table[static_cast<std::size_t>(k)];
    // Stirling series; relative error < 1e-13 for k >= 128.
    const double n = static_cast<double>(k);
    const double n2 = n * n;
    return (n + 0.5) * std::log(n) - n + 0.9189385332046727  // 0.5*log(2*pi)
           + 1.0 / (12.0 * n) - 1.0 / (360.0 * n * n2) + 1.0 / (1260.0 * n * n2 * n2);
}

double poisson_pmf(long long k, double mean) {
    if (k < 0) return 0.0;
    if (mean <= 0.0) return k == 0 ? 1.0 : 0.0;
    return std::exp(-mean + static_cast<double>(k) * std::log(mean) - log_factorial(k));
}

PoissonCdfPair poisson_cdf_pair(long long k, double mean) {
    if (k < 0) return {0.0, 1.0};
    if (mean <= 0.0) return {1.0, 0.0};

    if (static_cast<double>(k) < mean) {
        // Lower side is the small one; sum k down to 0 (terms decrease).
        const double log_top = -mean + static_cast<double>(k) * std::log(mean) - log_factorial(k);
        if (log_top < kLogUnderflow) return {0.0, 1.0};
        double term = std::exp(log_top);
        if (term == 0.0) return {0.0, 1.0};
        double sum = term;
        for (long long j = k; j >= 1; --j) {
            term *= static_cast<double>(j) / mean;
            sum += term;
            // Second clause: near the subnormal floor, sum*cutoff rounds to
            // zero and the relative test can never fire.
            if (term < sum * kRelativeCutoff || term == 0.0) break;
        }
        return {sum, 1.0 - sum};
    }

    // Upper side is the small one; sum k+1 upward (terms decrease).
    const double log_top =
        -mean + static_cast<double>(k + 1) * std::log(mean) - log_factorial(k + 1);
    if (log_top < kLogUnderflow) return {1.0, 0.0};
    double term = std::exp(log_top);
    if (term == 0.0) return {1.0, 0.0};
    double sum = term;
    for (long long j = k + 2;; ++j) {
        term *= mean / static_cast<double>(j);
        sum += term;
        if (term < sum * kRelativeCutoff || term == 0.0) break;
    }
    return {1.0 - sum, sum};
}

double poisson_cdf(long long k, double mean) { return poisson_cdf_pair(k, mean).cdf; }

}  // namespace spadsim
