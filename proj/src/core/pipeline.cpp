/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "core/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <thread>

#include "core/estimators.hpp"
#include "core/pfm.hpp"
#include "core/png_writer.hpp"
#include "core/reference_model.hpp"
#include "core/spad_model.hpp"

namespace spadsim {

FluxImage rescale_dynamic_range(const FluxImage& image, double target_ratio, double peak_flux) {
    if (!(target_ratio > 1.0)) throw std::invalid_argument("target_ratio must exceed 1");
    if (!(peak_flux > 0.0) || !std::isfinite(peak_flux))
        throw std::invalid_argument("peak_flux must be positive");

    double min_pos = std::numeric_limits<double>::infinity();
    double max_val = 0.0;
    for (double v : image.data) {
        if (v > 0.0) {
            min_pos = std::min(min_pos, v);
            max_val = std::max(max_val, v);
        }
    }
    if (!(max_val > min_pos))
        throw std::invalid_argument("image needs at least two distinct positive values");

    const double exponent = std::log(target_ratio) / std::log(max_val / min_pos);
    FluxImage out = image;
    for (double& v : out.data)
        if (v > 0.0) v = peak_flux * std::pow(v / max_val, exponent);
    return out;
}

namespace {

/// Inverse-CDF table over the exact count distribution, shared by every pixel
/// at the same flux. Dark counts enter through an equivalent flux offset.
class FastCountSampler {
  public:
    FastCountSampler(const SpadConfig& cfg, Exposure exposure) : cfg_(cfg), exposure_(exposure) {
        if (cfg.afterpulse_prob != 0.0 || cfg.jitter_sigma_s != 0.0)
            throw std::invalid_argument("fast capture requires p_ap = 0 and jitter_sigma = 0");
    }

    long long sample(double flux, Rng& rng) {
        const std::vector<double>& cdf = table(flux);
        const double u = rng.next_unit();
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        return it == cdf.end() ? static_cast<long long>(cdf.size()) - 1
                               : static_cast<long long>(it - cdf.begin());
    }

  private:
    const std::vector<double>& table(double flux) {
        auto found = tables_.find(flux);
        if (found != tables_.end()) return found->second;

        const double equivalent =
            flux + cfg_.dark_rate_hz / cfg_.quantum_efficiency;
        const CountPmf pmf = count_pmf_exact(FluxLevel{equivalent}, cfg_, exposure_);
        std::vector<double> cdf(pmf.probs.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < pmf.probs.size(); ++i) {
            acc += pmf.probs[i];
            cdf[i] = acc;
        }
        cdf.back() = std::max(cdf.back(), 1.0);
        return tables_.emplace(flux, std::move(cdf)).first->second;
    }

    SpadConfig cfg_;
    Exposure exposure_;
    std::map<double, std::vector<double>> tables_;
};

}  // namespace

CountImage simulate_capture(const FluxImage& image, const SensorBundle& sensor,
                            Exposure exposure, SeedSpec seed, bool fast, int threads) {
    if (image.width <= 0 || image.height <= 0 || image.data.empty())
        throw std::invalid_argument("empty image");
    if (threads < 1) throw std::invalid_argument("threads must be at least 1");
    switch (sensor.sensor) {
        case Sensor::spad: validate(sensor.spad, exposure); break;
        case Sensor::conventional: validate(sensor.conventional, exposure); break;
        case Sensor::qis: (void)qis_bin_count(sensor.qis, exposure); break;
    }

    CountImage out;
    out.width = image.width;
    out.height = image.height;
    out.channels = image.channels;
    out.sensor = sensor;
    out.exposure = exposure;
    out.counts.assign(image.data.size(), 0);

    const bool use_fast = fast && sensor.sensor == Sensor::spad;

    // The fast sampler memoizes per-flux tables; prime them for every
    // distinct flux level serially so workers only ever read the map.
    std::optional<FastCountSampler> fast_sampler;
    if (use_fast) {
        fast_sampler.emplace(sensor.spad, exposure);
        Rng warm(seed);
        for (double v : image.data) (void)fast_sampler->sample(v, warm);
    }

    auto simulate_one = [&](std::size_t index) {
        const double flux = image.data[index];
        const SeedSpec pixel_seed{seed.master_seed,
                                  seed.stream_id + static_cast<std::uint64_t>(index)};
        switch (sensor.sensor) {
            case Sensor::spad:
                if (fast_sampler) {
                    Rng rng(pixel_seed);
                    return fast_sampler->sample(flux, rng);
                }
                return simulate_spad_count(FluxLevel{flux}, sensor.spad, exposure, pixel_seed);
            case Sensor::conventional:
                return simulate_conventional_count(FluxLevel{flux}, sensor.conventional,
                                                   exposure, pixel_seed);
            case Sensor::qis:
                return simulate_qis_count(FluxLevel{flux}, sensor.qis, exposure, pixel_seed);
        }
        throw std::invalid_argument("bad sensor");
    };

    const std::size_t total = image.data.size();
    if (threads == 1) {
        for (std::size_t i = 0; i < total; ++i) out.counts[i] = simulate_one(i);
    } else {
        constexpr std::size_t kChunk = 4096;
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const int workers = std::min<int>(threads, static_cast<int>((total + kChunk - 1) / kChunk));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t begin = next.fetch_add(kChunk);
                    if (begin >= total) return;
                    const std::size_t end = std::min(total, begin + kChunk);
                    for (std::size_t i = begin; i < end; ++i) out.counts[i] = simulate_one(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

ReconResult reconstruct_flux(const CountImage& counts) {
    ReconResult out;
    out.flux.width = counts.width;
    out.flux.height = counts.height;
    out.flux.channels = counts.channels;
    out.flux.data.assign(counts.counts.size(), 0.0);
    out.saturated.assign(counts.counts.size(), 0);

    const Exposure exposure = counts.exposure;
    switch (counts.sensor.sensor) {
        case Sensor::spad: {
            const SpadConfig& cfg = counts.sensor.spad;
            validate(cfg, exposure);
            // Largest invertible count; anything beyond reads back saturated.
            long long cap = static_cast<long long>(
                std::floor(exposure.seconds / cfg.dead_time_s));
            while (cap > 0) {
                const double used = static_cast<double>(cap) * cfg.dead_time_s;
                if (used < exposure.seconds * (1.0 - 1e-12)) break;
                --cap;
            }
            for (std::size_t i = 0; i < counts.counts.size(); ++i) {
                long long n = counts.counts[i];
                if (n > cap) {
                    n = cap;
                    out.saturated[i] = 1;
                }
                out.flux.data[i] = estimate_from_counts(n, cfg, exposure).photons_per_s;
            }
            break;
        }
        case Sensor::conventional: {
            const ConventionalConfig& cfg = counts.sensor.conventional;
            const double sat_flux = conventional_saturation_flux(cfg, exposure);
            for (std::size_t i = 0; i < counts.counts.size(); ++i) {
                const auto est = estimate_conventional(counts.counts[i], cfg, exposure);
                if (est.saturated) {
                    out.flux.data[i] = sat_flux;
                    out.saturated[i] = 1;
                } else {
                    out.flux.data[i] = est.photons_per_s;
                }
            }
            break;
        }
        case Sensor::qis: {
            const QisConfig& cfg = counts.sensor.qis;
            const long long bins = qis_bin_count(cfg, exposure);
            for (std::size_t i = 0; i < counts.counts.size(); ++i) {
                long long n = counts.counts[i];
                if (n >= bins) {
                    n = bins - 1;
                    out.saturated[i] = 1;
                }
                out.flux.data[i] = estimate_qis(n, cfg, exposure).photons_per_s;
            }
            break;
        }
    }
    return out;
}

std::vector<std::uint8_t> tone_map(const FluxImage& image, double key) {
    if (!(key > 0.0) || !std::isfinite(key)) throw std::invalid_argument("key must be positive");
    const std::size_t pixels =
        static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height);
    const int ch = image.channels;

    auto luminance = [&](std::size_t p) {
        if (ch == 1) return image.data[p];
        const double* rgb = &image.data[p * 3];
        return 0.2126 * rgb[0] + 0.7152 * rgb[1] + 0.0722 * rgb[2];
    };

    double log_sum = 0.0;
    std::size_t positive = 0;
    for (std::size_t p = 0; p < pixels; ++p) {
        const double lum = luminance(p);
        if (lum > 0.0) {
            log_sum += std::log(lum);
            ++positive;
        }
    }
    std::vector<std::uint8_t> out(image.data.size(), 0);
    if (positive == 0) return out;  // all-zero image stays black

    const double geo_mean = std::exp(log_sum / static_cast<double>(positive));
    const double inv_scale = 1.0 / (key * geo_mean);

    for (std::size_t p = 0; p < pixels; ++p) {
        const double scaled_lum = luminance(p) * inv_scale;
        const double denom = 1.0 + scaled_lum;
        for (int c = 0; c < ch; ++c) {
            const double v = image.data[p * static_cast<std::size_t>(ch) +
                                        static_cast<std::size_t>(c)] *
                             inv_scale / denom;
            const double level = std::round(255.0 * std::min(1.0, v));
            out[p * static_cast<std::size_t>(ch) + static_cast<std::size_t>(c)] =
                static_cast<std::uint8_t>(std::clamp(level, 0.0, 255.0));
        }
    }
    return out;
}

OutputPaths outputs_for_prefix(const std::string& prefix) {
    return {prefix + "_toned.png", prefix + "_flux.pfm", prefix + "_summary.csv"};
}

void write_summary_csv(const ReconResult& recon, const std::string& path) {
    std::ofstream csv(path);
    if (!csv) throw IoError("cannot open for writing: " + path);
    csv << "channel,min_flux,max_flux,mean_flux,saturated_pixels\n";
    const int ch = recon.flux.channels;
    const std::size_t pixels = static_cast<std::size_t>(recon.flux.width) *
                               static_cast<std::size_t>(recon.flux.height);
    char buf[160];
    for (int c = 0; c < ch; ++c) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        double sum = 0.0;
        long long saturated = 0;
        for (std::size_t p = 0; p < pixels; ++p) {
            const std::size_t i = p * static_cast<std::size_t>(ch) + static_cast<std::size_t>(c);
            const double v = recon.flux.data[i];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
            saturated += recon.saturated[i];
        }
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%lld\n", c, lo, hi,
                      sum / static_cast<double>(pixels), saturated);
        csv << buf;
    }
    if (!csv.good()) throw IoError("write failed: " + path);
}

void write_outputs(const ReconResult& recon, const std::vector<std::uint8_t>& toned,
                   int toned_channels, const OutputPaths& paths) {
    write_png8(paths.toned_png, recon.flux.width, recon.flux.height, toned_channels, toned);
    write_pfm(recon.flux, paths.flux_pfm);
    write_summary_csv(recon, paths.summary_csv);
}

}  // namespace spadsim
