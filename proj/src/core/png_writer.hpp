/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spadsim {

/// Writes an 8-bit grayscale (channels = 1) or RGB (channels = 3) PNG.
/// Scanlines use filter type 0 and zlib level 6, so output bytes are a pure
/// function of the pixels.
void write_png8(const std::string& path, int width, int height, int channels,
                const std::vector<std::uint8_t>& pixels);

}  // namespace spadsim
