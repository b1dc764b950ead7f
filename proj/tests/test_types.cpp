/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "core/config_file.hpp"
#include "core/types.hpp"

using namespace spadsim;

namespace {

SpadConfig paper_spad() { return {0.4, 149.7e-9, 100.0, 0.01, 0.0}; }

}  // namespace

TEST_CASE("spad config validation accepts the reference pixel") {
    CHECK_NOTHROW(validate(paper_spad(), Exposure{5e-3}));
}

TEST_CASE("spad config validation names the first violated constraint") {
    Exposure exposure{5e-3};

    SpadConfig zero_q = paper_spad();
    zero_q.quantum_efficiency = 0.0;
    CHECK_THROWS_WITH_AS(validate(zero_q, exposure), "quantum_efficiency out of range",
                         ConfigError);

    SpadConfig q_above_one = paper_spad();
    q_above_one.quantum_efficiency = 1.5;
    CHECK_THROWS_AS(validate(q_above_one, exposure), ConfigError);

    CHECK_THROWS_WITH_AS(validate(paper_spad(), Exposure{1e-7}),
                         "exposure shorter than dead time", ConfigError);

    SpadConfig nan_dark = paper_spad();
    nan_dark.dark_rate_hz = std::nan("");
    CHECK_THROWS_AS(validate(nan_dark, exposure), ConfigError);

    SpadConfig big_jitter = paper_spad();
    big_jitter.jitter_sigma_s = 150e-9;  // above the dead time
    CHECK_THROWS_AS(validate(big_jitter, exposure), ConfigError);

    SpadConfig p_ap_one = paper_spad();
    p_ap_one.afterpulse_prob = 1.0;
    CHECK_THROWS_AS(validate(p_ap_one, exposure), ConfigError);
}

TEST_CASE("validation is pure") {
    const SpadConfig cfg = paper_spad();
    for (int i = 0; i < 3; ++i) CHECK_NOTHROW(validate(cfg, Exposure{5e-3}));
}

TEST_CASE("flux and exposure reject non-finite values") {
    CHECK_THROWS_AS(validate(FluxLevel{-1.0}), ConfigError);
    CHECK_THROWS_AS(validate(FluxLevel{std::nan("")}), ConfigError);
    CHECK_THROWS_AS(validate(FluxLevel{std::numeric_limits<double>::infinity()}), ConfigError);
    CHECK_THROWS_AS(validate(Exposure{0.0}), ConfigError);
    CHECK_NOTHROW(validate(FluxLevel{0.0}));
}

TEST_CASE("conventional and qis validation") {
    CHECK_NOTHROW(validate(ConventionalConfig{0.9, 33400, 5.0}, Exposure{5e-3}));
    CHECK_THROWS_AS(validate(ConventionalConfig{0.9, 0, 5.0}, Exposure{5e-3}), ConfigError);

    const QisConfig qis{0.4, 1e-6, 0.25};
    CHECK(qis_bin_count(qis, Exposure{5e-3}) == 5000);
    CHECK_THROWS_WITH_AS(qis_bin_count(qis, Exposure{5.0005e-3}),
                         "exposure must be an integer multiple of qis bin width", ConfigError);
}

TEST_CASE("config file parses all keys and comments") {
    std::stringstream in(
        "# reference pixel\n"
        "q = 0.4\n"
        "tau_d_s = 149.7e-9  # dead time\n"
        "dark_rate_hz = 100\n"
        "p_ap = 0.01\n"
        "jitter_sigma_s = 0\n"
        "exposure_s = 5e-3\n"
        "fwc = 33400\n"
        "read_noise_e = 5\n"
        "qis_tau_b_s = 149.7e-9\n");
    const ConfigFile file = parse_config(in);
    const SpadConfig spad = file.spad();
    CHECK(spad.quantum_efficiency == doctest::Approx(0.4));
    CHECK(spad.dead_time_s == doctest::Approx(149.7e-9));
    CHECK(spad.dark_rate_hz == doctest::Approx(100.0));
    CHECK(file.conventional().full_well_e == 33400);
    CHECK(file.qis().bin_width_s == doctest::Approx(149.7e-9));
    CHECK(file.exposure().seconds == doctest::Approx(5e-3));
}

TEST_CASE("config file rejects unknown and duplicate keys") {
    std::stringstream unknown("q=0.4\nwavelength_nm=550\n");
    CHECK_THROWS_AS(parse_config(unknown), ConfigError);

    std::stringstream dup("q=0.4\nq=0.5\n");
    CHECK_THROWS_AS(parse_config(dup), ConfigError);

    std::stringstream garbage("q=half\n");
    CHECK_THROWS_AS(parse_config(garbage), ConfigError);

    std::stringstream noeq("q 0.4\n");
    CHECK_THROWS_AS(parse_config(noeq), ConfigError);
}

TEST_CASE("config file reports missing keys at materialization") {
    std::stringstream in("q=0.4\n");
    const ConfigFile file = parse_config(in);
    CHECK_THROWS_WITH_AS(file.spad(), "config missing key 'tau_d_s'", ConfigError);
    CHECK_THROWS_AS(file.exposure(), ConfigError);
}
