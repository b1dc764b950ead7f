/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/image.hpp"
#include "core/rng.hpp"

namespace spadsim {

/// Log-domain affine remap of the positive values so that the maximum lands
/// on peak_flux and max/min(positive) equals target_ratio. Zeros stay zero
/// and value ordering is preserved. Needs at least two distinct positive
/// values and target_ratio > 1.
[[nodiscard]] FluxImage rescale_dynamic_range(const FluxImage& image, double target_ratio,
                                              double peak_flux);

/// Simulates one capture of the scene. Every pixel/channel runs an
/// independent stream with stream_id = base + pixel_index*channels + channel
/// (pixel_index = y*width + x), so results do not depend on evaluation order
/// or thread count. With fast set (spad only, requires p_ap = 0 and
/// sigma_d = 0), counts are drawn by inverse-CDF from the exact count
/// distribution instead of the event loop; dark counts fold into the rate.
[[nodiscard]] CountImage simulate_capture(const FluxImage& image, const SensorBundle& sensor,
                                          Exposure exposure, SeedSpec seed, bool fast = false,
                                          int threads = 1);

/// Per-pixel flux inversion of a capture. Saturated pixels (conventional full
/// wells, QIS all-bins-full, SPAD counts past capacity) read back as the
/// largest invertible flux for that sensor and are flagged in the mask.
struct ReconResult {
    FluxImage flux;
    std::vector<std::uint8_t> saturated;  ///< one flag per pixel/channel
};

[[nodiscard]] ReconResult reconstruct_flux(const CountImage& counts);

/// Global tone map: with G the geometric mean of the positive luminances,
/// L' = L/(key*G) and each channel maps to round(255 * (C/(key*G))/(1+L')),
/// clamped to [0,255]. All-zero images map to all zeros.
[[nodiscard]] std::vector<std::uint8_t> tone_map(const FluxImage& image, double key);

struct OutputPaths {
    std::string toned_png;
    std::string flux_pfm;
    std::string summary_csv;
};

/// Writes the tone-mapped PNG, the reconstructed-flux PFM, and a summary CSV
/// (channel,min_flux,max_flux,mean_flux,saturated_pixels).
void write_outputs(const ReconResult& recon, const std::vector<std::uint8_t>& toned,
                   int toned_channels, const OutputPaths& paths);

/// Just the summary CSV.
void write_summary_csv(const ReconResult& recon, const std::string& path);

/// Output paths derived from a prefix: <prefix>_toned.png, <prefix>_flux.pfm,
/// <prefix>_summary.csv.
[[nodiscard]] OutputPaths outputs_for_prefix(const std::string& prefix);

}  // namespace spadsim
