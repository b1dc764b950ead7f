/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "core/types.hpp"

namespace spadsim {

/// Plain-text key=value sensor configuration. One key per line, '#' starts a
/// comment. Recognized keys: q, tau_d_s, dark_rate_hz, p_ap, jitter_sigma_s,
/// exposure_s, fwc, read_noise_e, qis_tau_b_s. Unknown keys are rejected.
struct ConfigFile {
    std::optional<double> q;
    std::optional<double> tau_d_s;
    std::optional<double> dark_rate_hz;
    std::optional<double> p_ap;
    std::optional<double> jitter_sigma_s;
    std::optional<double> exposure_s;
    std::optional<double> fwc;
    std::optional<double> read_noise_e;
    std::optional<double> qis_tau_b_s;

    /// Builds a SPAD config; throws ConfigError naming any missing key.
    [[nodiscard]] SpadConfig spad() const;
    [[nodiscard]] ConventionalConfig conventional() const;
    [[nodiscard]] QisConfig qis() const;
    [[nodiscard]] Exposure exposure() const;
};

ConfigFile parse_config(std::istream& in);
ConfigFile load_config(const std::string& path);

}  // namespace spadsim
