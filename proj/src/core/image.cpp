/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "core/image.hpp"

#include <cmath>
#include <stdexcept>

namespace spadsim {

double& FluxImage::at(int x, int y, int c) {
    return data[(static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                 static_cast<std::size_t>(x)) *
                    static_cast<std::size_t>(channels) +
                static_cast<std::size_t>(c)];
}

double FluxImage::at(int x, int y, int c) const {
    return const_cast<FluxImage*>(this)->at(x, y, c);
}

FluxImage make_flux_image(int width, int height, int channels, std::vector<double> data) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("image dimensions must be positive");
    if (channels != 1 && channels != 3) throw std::invalid_argument("channels must be 1 or 3");
    const std::size_t expected = static_cast<std::size_t>(width) *
                                 static_cast<std::size_t>(height) *
                                 static_cast<std::size_t>(channels);
    if (data.size() != expected) throw std::invalid_argument("image data size mismatch");
    for (double v : data)
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("flux values must be finite and nonnegative");
    return {width, height, channels, std::move(data)};
}

}  // namespace spadsim
