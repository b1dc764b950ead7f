/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "core/estimators.hpp"
#include "core/rng.hpp"
#include "core/spad_model.hpp"

using namespace spadsim;

namespace {

const SpadConfig kSpad{0.4, 149.7e-9, 0.0, 0.0, 0.0};
const Exposure kExp{5e-3};

DetectionTrace trace_from_gaps(const std::vector<double>& gaps, Exposure exposure) {
    std::vector<double> ts;
    double t = 0.0;
    for (double g : gaps) {
        t += g;
        ts.push_back(t);
    }
    return make_trace(std::move(ts), exposure);
}

}  // namespace

TEST_CASE("trace construction checks ordering and range") {
    CHECK_NOTHROW(make_trace({1e-6, 2e-6, 5e-6}, Exposure{1e-3}));
    CHECK_THROWS_AS(make_trace({2e-6, 1e-6}, Exposure{1e-3}), std::invalid_argument);
    CHECK_THROWS_AS(make_trace({0.0, 1e-6}, Exposure{1e-3}), std::invalid_argument);
    CHECK_THROWS_AS(make_trace({1e-6, 2e-3}, Exposure{1e-3}), std::invalid_argument);
}

TEST_CASE("interarrival estimator: noiseless construction recovers the flux") {
    const double phi = 2.5e7;
    const double gap = kSpad.dead_time_s + 1.0 / (kSpad.quantum_efficiency * phi);
    std::vector<double> gaps(40, gap);
    const FluxEstimate est = estimate_from_interarrivals(trace_from_gaps(gaps, kExp), kSpad);
    CHECK(est.photons_per_s == doctest::Approx(phi).epsilon(1e-12));
}

TEST_CASE("interarrival estimator: reference value") {
    const FluxEstimate est =
        estimate_from_interarrivals(trace_from_gaps({300e-9, 400e-9}, kExp), kSpad);
    CHECK(est.photons_per_s == doctest::Approx(12481278.08).epsilon(1e-9));
}

TEST_CASE("interarrival estimator: error cases") {
    CHECK_THROWS_WITH_AS(
        (void)estimate_from_interarrivals(trace_from_gaps({200e-9}, kExp), kSpad),
        "insufficient detections", std::invalid_argument);
    // All gaps exactly at the dead time: denominator collapses.
    CHECK_THROWS_WITH_AS((void)estimate_from_interarrivals(
                             trace_from_gaps({149.7e-9, 149.7e-9, 149.7e-9}, kExp), kSpad),
                         "mean gap at or below dead time", std::invalid_argument);
}

TEST_CASE("interarrival estimator maximizes the shifted-exponential likelihood") {
    // Oracle: golden-section search over the log-likelihood
    //   N log(q phi) - q phi sum(gap_i - tau_d).
    Rng rng(SeedSpec{314, 0});
    for (int rep = 0; rep < 200; ++rep) {
        const double phi_true = std::pow(10.0, 5.0 + 3.5 * rng.next_unit());
        const std::size_t detections = 2 + static_cast<std::size_t>(rng.next_unit() * 18.0);
        std::vector<double> gaps(detections);
        for (double& g : gaps)
            g = kSpad.dead_time_s +
                rng.exponential(kSpad.quantum_efficiency * phi_true);
        const DetectionTrace trace = trace_from_gaps(gaps, Exposure{1.0});
        const double estimate = estimate_from_interarrivals(trace, kSpad).photons_per_s;

        double gap_excess = 0.0;
        for (double g : gaps) gap_excess += g - kSpad.dead_time_s;
        const auto neg_loglik = [&](double log_phi) {
            const double qphi = kSpad.quantum_efficiency * std::exp(log_phi);
            return qphi * gap_excess - static_cast<double>(detections) * std::log(qphi);
        };
        double lo = std::log(estimate) - 6.0;
        double hi = std::log(estimate) + 6.0;
        const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - ratio * (hi - lo);
        double x2 = lo + ratio * (hi - lo);
        double f1 = neg_loglik(x1);
        double f2 = neg_loglik(x2);
        while (hi - lo > 1e-10) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - ratio * (hi - lo);
                f1 = neg_loglik(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + ratio * (hi - lo);
                f2 = neg_loglik(x2);
            }
        }
        const double argmax = std::exp(0.5 * (lo + hi));
        CHECK(std::abs(estimate - argmax) / argmax < 1e-6);
    }
}

TEST_CASE("count estimator: reference values and bounds") {
    CHECK(estimate_from_counts(0, kSpad, kExp).photons_per_s == 0.0);
    CHECK(estimate_from_counts(28620, kSpad, kExp).photons_per_s ==
          doctest::Approx(99987981.88).epsilon(1e-9));

    const long long cap = static_cast<long long>(std::floor(kExp.seconds / kSpad.dead_time_s));
    CHECK_NOTHROW((void)estimate_from_counts(cap, kSpad, kExp));
    CHECK_THROWS_WITH_AS((void)estimate_from_counts(cap + 1, kSpad, kExp),
                         "count exceeds exposure capacity", std::invalid_argument);
    CHECK_THROWS_AS((void)estimate_from_counts(-1, kSpad, kExp), std::invalid_argument);
}

TEST_CASE("count estimator: strictly increasing in the count") {
    double prev = -1.0;
    for (long long n = 0; n <= 33400; n += 167) {
        const double est = estimate_from_counts(n, kSpad, kExp).photons_per_s;
        CHECK(est > prev);
        prev = est;
    }
}

TEST_CASE("count estimator round-trips the response curve within 2 percent") {
    for (double phi = 1e5; phi <= 1.0000001e9; phi *= std::pow(10.0, 0.5)) {
        const double mean = expected_counts(FluxLevel{phi}, kSpad, kExp);
        const double est =
            estimate_from_counts(std::llround(mean), kSpad, kExp).photons_per_s;
        CHECK(est >= 0.98 * phi);
        CHECK(est <= 1.02 * phi);
    }
}

TEST_CASE("qis estimator: anchors and divergence") {
    const QisConfig qis{0.4, 1e-6, 0.0};
    const Exposure exposure{5e-3};  // 5000 bins
    CHECK(estimate_qis(0, qis, exposure).photons_per_s == 0.0);
    CHECK(estimate_qis(2500, qis, exposure).photons_per_s ==
          doctest::Approx(std::log(2.0) / (0.4 * 1e-6)).epsilon(1e-12));
    CHECK_THROWS_WITH_AS((void)estimate_qis(5000, qis, exposure),
                         "all bins full, estimator diverges", std::invalid_argument);
    CHECK_THROWS_AS((void)estimate_qis(5001, qis, exposure), std::invalid_argument);
}

TEST_CASE("conventional estimator: anchors and saturation") {
    const ConventionalConfig conv{0.9, 33400, 5.0};
    CHECK(estimate_conventional(0, conv, kExp).photons_per_s == 0.0);
    const ConventionalEstimate mid = estimate_conventional(4500, conv, kExp);
    CHECK(mid.photons_per_s == doctest::Approx(1e6).epsilon(1e-12));
    CHECK_FALSE(mid.saturated);
    const ConventionalEstimate full = estimate_conventional(33400, conv, kExp);
    CHECK(full.saturated);
    CHECK(std::isinf(full.photons_per_s));
    CHECK_THROWS_AS((void)estimate_conventional(33401, conv, kExp), std::invalid_argument);
}

TEST_CASE("trace csv serialization") {
    const DetectionTrace trace = make_trace({1.5e-6, 3e-6}, Exposure{1e-3});
    std::ostringstream out;
    write_trace_csv(trace, out);
    CHECK(out.str() == "t_s\n1.5000000000000001e-06\n3.0000000000000001e-06\n");
}
