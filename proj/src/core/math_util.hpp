/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

namespace spadsim {

/// Poisson CDF and its complement. The smaller side is obtained by direct
/// summation of Poisson terms seeded in log space, with early exit once terms
/// fall below 1e-18 relative; the larger side is its complement from 1. This
/// keeps both sides accurate in relative terms wherever they are small. The
/// log-space seed costs k*log(mean)*eps of cancellation, so relative accuracy
/// tapers from ~1e-13 at small k to ~1e-9 around k = 1e6.
struct PoissonCdfPair {
    double cdf;   ///< Pr(N <= k)
    double tail;  ///< Pr(N > k)
};

[[nodiscard]] PoissonCdfPair poisson_cdf_pair(long long k, double mean);

/// Pr(N <= k) for N ~ Poisson(mean).
[[nodiscard]] double poisson_cdf(long long k, double mean);

/// Poisson pmf Pr(N = k), evaluated in log space.
[[nodiscard]] double poisson_pmf(long long k, double mean);

/// log(k!) with a table for small k and a Stirling series beyond.
[[nodiscard]] double log_factorial(long long k);

}  // namespace spadsim
