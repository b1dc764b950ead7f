/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <string>

#include "core/image.hpp"

namespace spadsim {

/// PFM load result. Negative samples are clamped to zero and counted rather
/// than rejected; NaN samples are an error.
struct PfmLoadResult {
    FluxImage image;
    long long negatives_clamped = 0;
};

/// Reads a portable float map: 'PF' (3-channel) or 'Pf' (grayscale) header,
/// width/height line, scale line whose sign gives the byte order, then raw
/// 32-bit floats stored bottom row first. The scale magnitude is ignored.
[[nodiscard]] PfmLoadResult load_pfm(const std::string& path);

/// Writes little-endian PFM (scale -1.0), bottom row first.
void write_pfm(const FluxImage& image, const std::string& path);

}  // namespace spadsim
