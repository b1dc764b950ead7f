/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>

#include "core/snr_curve.hpp"

using namespace spadsim;

namespace {

const SpadConfig kPaper{0.4, 149.7e-9, 100.0, 0.01, 0.0};
const ConventionalConfig kConv{0.9, 33400, 5.0};
const Exposure kExp{5e-3};
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("log grid: endpoints exact, strictly increasing, errors checked") {
    const auto grid = log_spaced_grid(1e3, 1e9, 31);
    CHECK(grid.size() == 31);
    CHECK(grid.front() == 1e3);
    CHECK(grid.back() == 1e9);
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);

    CHECK_THROWS_AS((void)log_spaced_grid(0.0, 1e9, 10), std::invalid_argument);
    CHECK_THROWS_AS((void)log_spaced_grid(1e3, 1e3, 10), std::invalid_argument);
    CHECK_THROWS_AS((void)log_spaced_grid(1e3, 1e9, 1), std::invalid_argument);
}

TEST_CASE("model tags round-trip and reject unknowns") {
    for (ModelTag tag : {ModelTag::spad_approx, ModelTag::spad_exact, ModelTag::spad_jitter,
                         ModelTag::conventional, ModelTag::qis, ModelTag::monte_carlo})
        CHECK(model_tag_from_string(to_string(tag)) == tag);
    CHECK_THROWS_AS((void)model_tag_from_string("cmos"), std::invalid_argument);
}

TEST_CASE("spad curve: smooth, finite, graceful degradation") {
    const SnrCurve curve = snr_curve_spad(kPaper, kExp, 1e5, 1e9, 120, ModelTag::spad_approx);
    CHECK(curve.flux.size() == 120);
    for (std::size_t i = 0; i < curve.flux.size(); ++i) {
        CHECK(std::isfinite(curve.snr_db[i]));
        CHECK(curve.snr_db[i] ==
              doctest::Approx(20.0 * std::log10(curve.flux[i] / curve.rmse[i]))
                  .epsilon(1e-12));
    }
}

TEST_CASE("conventional curve: minus-infinity sentinel past saturation") {
    const SnrCurve curve = snr_curve_conventional(kConv, kExp, 1e5, 1e9, 200);
    const double sat = 33400.0 / (0.9 * 5e-3);
    bool saw_inf = false;
    for (std::size_t i = 0; i < curve.flux.size(); ++i) {
        if (curve.flux[i] >= sat) {
            CHECK(curve.snr_db[i] == -kInf);
            CHECK(curve.rmse[i] == kInf);
            saw_inf = true;
        } else {
            CHECK(std::isfinite(curve.snr_db[i]));
        }
    }
    CHECK(saw_inf);
}

TEST_CASE("doubling the exposure raises the spad snr at every flux") {
    const SnrCurve base = snr_curve_spad(kPaper, kExp, 1e5, 1e10, 80, ModelTag::spad_approx);
    const SnrCurve doubled =
        snr_curve_spad(kPaper, Exposure{1e-2}, 1e5, 1e10, 80, ModelTag::spad_approx);
    for (std::size_t i = 0; i < base.flux.size(); ++i)
        CHECK(doubled.snr_db[i] > base.snr_db[i]);
}

TEST_CASE("dynamic range: none when the whole curve is below threshold") {
    SnrCurve curve;
    curve.flux = {1e3, 1e4, 1e5};
    curve.rmse = {1.0, 1.0, 1.0};
    curve.snr_db = {10.0, 12.0, 11.0};
    CHECK_FALSE(dynamic_range(curve, 30.0).has_value());
}

TEST_CASE("dynamic range: interpolated crossings on a triangle curve") {
    SnrCurve curve;
    curve.flux = {1e5, 1e6, 1e7};
    curve.rmse = {1.0, 1.0, 1.0};
    curve.snr_db = {20.0, 40.0, 20.0};
    // Crossings at half the log steps: 10^5.5 and 10^6.5, ratio exactly 10.
    const auto ratio = dynamic_range(curve, 30.0);
    REQUIRE(ratio.has_value());
    CHECK(*ratio == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("dynamic range: minus-infinity neighbor pins the crossing at the grid point") {
    SnrCurve curve;
    curve.flux = {1e5, 1e6, 1e7};
    curve.rmse = {1.0, 1.0, kInf};
    curve.snr_db = {35.0, 40.0, -kInf};
    const auto ratio = dynamic_range(curve, 30.0);
    REQUIRE(ratio.has_value());
    CHECK(*ratio == doctest::Approx(10.0).epsilon(1e-12));  // 1e6 / 1e5
}

TEST_CASE("snr csv round trip preserves values and sentinels") {
    SnrCurve curve = snr_curve_conventional(kConv, kExp, 1e5, 1e9, 40);
    std::stringstream buffer;
    write_csv(curve, buffer);

    std::string header;
    std::getline(buffer, header);
    CHECK(header == "flux_photons_per_s,rmse,snr_db,model");
    buffer.seekg(0);

    const SnrCurve back = read_snr_csv(buffer);
    REQUIRE(back.flux.size() == curve.flux.size());
    CHECK(back.model == ModelTag::conventional);
    for (std::size_t i = 0; i < curve.flux.size(); ++i) {
        CHECK(back.flux[i] == curve.flux[i]);
        CHECK(back.rmse[i] == curve.rmse[i]);    // +inf round-trips
        CHECK(back.snr_db[i] == curve.snr_db[i]);
    }
}

TEST_CASE("snr csv rejects bad headers") {
    std::stringstream bad("flux,rmse\n1,2\n");
    CHECK_THROWS_AS((void)read_snr_csv(bad), IoError);
}
