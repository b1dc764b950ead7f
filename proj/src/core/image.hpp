/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <vector>

#include "core/simulate.hpp"
#include "core/types.hpp"

namespace spadsim {

/// Per-pixel photon flux, row-major from the top row, channel-interleaved.
/// Values are finite and nonnegative.
struct FluxImage {
    int width = 0;
    int height = 0;
    int channels = 1;  ///< 1 or 3

    std::vector<double> data;

    [[nodiscard]] std::size_t value_count() const { return data.size(); }
    [[nodiscard]] double& at(int x, int y, int c);
    [[nodiscard]] double at(int x, int y, int c) const;
};

/// Checks dimensions, channel count, and value invariants; returns the image.
FluxImage make_flux_image(int width, int height, int channels, std::vector<double> data);

/// Integer counts per pixel/channel from a simulated capture, carrying the
/// sensor kind and configuration that produced them.
struct CountImage {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<long long> counts;
    SensorBundle sensor;
    Exposure exposure{};
};

}  // namespace spadsim
