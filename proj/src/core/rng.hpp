/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>

namespace spadsim {

/// Identifies one independent random stream. Streams are keyed by a master
/// seed plus a stream id (trial index, or pixel_index * channels + channel
/// for image work); the (master_seed, stream_id) -> state mapping is
/// injective, so distinct ids never alias.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

/// xoshiro256++ 1.0, seeded via SplitMix64.
///
/// State words s[0], s[1] come from a SplitMix64 chain over master_seed and
/// s[2], s[3] from a chain over stream_id. The first SplitMix64 output is a
/// bijection of its seed, so (s[0], s[2]) determines (master_seed, stream_id)
/// uniquely. Generator choice and seeding are pinned so golden values stay
/// portable.
class Rng {
  public:
    explicit Rng(SeedSpec seed);

    std::uint64_t next_u64();

    /// Uniform double in (0, 1], 53-bit resolution.
    double next_unit();

    /// Exponential waiting time with the given rate (1/seconds).
    double exponential(double rate);

    /// Normal via Box-Muller; consumes exactly two uniforms per call.
    double normal(double mean, double stddev);

    /// Poisson sample. Sequential inversion for mean < 30, Hormann's PTRD
    /// transformed rejection above.
    long long poisson(double mean);

  private:
    std::uint64_t state_[4];
};

}  // namespace spadsim
