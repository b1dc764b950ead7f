/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <doctest.h>

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "core/pfm.hpp"
#include "core/pipeline.hpp"
#include "core/png_writer.hpp"
#include "core/reference_model.hpp"
#include "core/spad_model.hpp"

using namespace spadsim;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "spadsim_pipeline_tests";
    fs::create_directories(dir);
    return dir;
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

void append_float(std::vector<std::uint8_t>& out, float v, bool little) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    if (little)
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    else
        for (int i = 3; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

std::vector<std::uint8_t> build_pfm(const std::string& magic, int w, int h, double scale,
                                    const std::vector<float>& samples, bool little) {
    std::vector<std::uint8_t> bytes;
    char header[64];
    std::snprintf(header, sizeof header, "%s\n%d %d\n%g\n", magic.c_str(), w, h, scale);
    bytes.insert(bytes.end(), header, header + std::strlen(header));
    for (float v : samples) append_float(bytes, v, little);
    return bytes;
}

const SpadConfig kPaper{0.4, 149.7e-9, 100.0, 0.01, 0.0};
const SpadConfig kClean{0.4, 149.7e-9, 0.0, 0.0, 0.0};

}  // namespace

TEST_CASE("pfm: one-pixel grayscale identity") {
    const fs::path path = temp_dir() / "one.pfm";
    write_bytes(path, build_pfm("Pf", 1, 1, -1.0, {1.0f}, true));
    const PfmLoadResult loaded = load_pfm(path.string());
    CHECK(loaded.image.width == 1);
    CHECK(loaded.image.height == 1);
    CHECK(loaded.image.channels == 1);
    CHECK(loaded.image.data[0] == 1.0);
    CHECK(loaded.negatives_clamped == 0);
}

TEST_CASE("pfm: byte order symmetric") {
    const std::vector<float> samples{0.5f, 2.0f, 8.25f, 1e6f, 0.0f, 3.5f};
    const fs::path le = temp_dir() / "le.pfm";
    const fs::path be = temp_dir() / "be.pfm";
    write_bytes(le, build_pfm("Pf", 3, 2, -1.0, samples, true));
    write_bytes(be, build_pfm("Pf", 3, 2, 1.0, samples, false));
    const PfmLoadResult a = load_pfm(le.string());
    const PfmLoadResult b = load_pfm(be.string());
    CHECK(a.image.data == b.image.data);
}

TEST_CASE("pfm: 2x2 color ramp matches an independent reference decode") {
    // Reference decoder: manual row flip and channel walk, written against
    // the format description, not the production code.
    const std::vector<float> samples{
        // bottom row first in the file
        10.f, 11.f, 12.f, 20.f, 21.f, 22.f,   // image row y=1: (x=0),(x=1)
        30.f, 31.f, 32.f, 40.f, 41.f, 42.f};  // image row y=0
    const fs::path path = temp_dir() / "ramp.pfm";
    write_bytes(path, build_pfm("PF", 2, 2, -1.0, samples, true));

    std::vector<double> reference(12);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x)
            for (int c = 0; c < 3; ++c)
                reference[static_cast<std::size_t>((y * 2 + x) * 3 + c)] =
                    samples[static_cast<std::size_t>(((1 - y) * 2 + x) * 3 + c)];

    const PfmLoadResult loaded = load_pfm(path.string());
    CHECK(loaded.image.channels == 3);
    CHECK(loaded.image.data == reference);
    CHECK(loaded.image.at(1, 0, 2) == 42.0);
}

TEST_CASE("pfm: negative clamping, nan rejection, truncation, bad magic") {
    const fs::path neg = temp_dir() / "neg.pfm";
    write_bytes(neg, build_pfm("Pf", 2, 1, -1.0, {-3.0f, 5.0f}, true));
    const PfmLoadResult loaded = load_pfm(neg.string());
    CHECK(loaded.negatives_clamped == 1);
    CHECK(loaded.image.data[0] == 0.0);
    CHECK(loaded.image.data[1] == 5.0);

    const fs::path nan_path = temp_dir() / "nan.pfm";
    write_bytes(nan_path, build_pfm("Pf", 1, 1, -1.0, {std::nanf("")}, true));
    CHECK_THROWS_AS((void)load_pfm(nan_path.string()), IoError);

    const fs::path trunc = temp_dir() / "trunc.pfm";
    auto bytes = build_pfm("Pf", 4, 4, -1.0, std::vector<float>(16, 1.0f), true);
    bytes.resize(bytes.size() - 9);
    write_bytes(trunc, bytes);
    CHECK_THROWS_AS((void)load_pfm(trunc.string()), IoError);

    const fs::path bad = temp_dir() / "bad.pfm";
    write_bytes(bad, build_pfm("P6", 1, 1, -1.0, {1.0f}, true));
    CHECK_THROWS_AS((void)load_pfm(bad.string()), IoError);

    CHECK_THROWS_AS((void)load_pfm((temp_dir() / "missing.pfm").string()), IoError);
}

TEST_CASE("pfm: write/load round trip is float32-exact") {
    std::vector<double> data;
    for (int i = 0; i < 2 * 3 * 3; ++i)
        data.push_back(static_cast<double>(static_cast<float>(std::pow(1.7, i))));
    const FluxImage image = make_flux_image(2, 3, 3, data);
    const fs::path path = temp_dir() / "roundtrip.pfm";
    write_pfm(image, path.string());
    const PfmLoadResult back = load_pfm(path.string());
    CHECK(back.image.width == image.width);
    CHECK(back.image.height == image.height);
    CHECK(back.image.data == image.data);
}

TEST_CASE("rescale: ratio arithmetic and idempotence") {
    FluxImage image = make_flux_image(2, 2, 1, {0.0, 1.0, 50.0, 100.0});
    const FluxImage scaled = rescale_dynamic_range(image, 1e6, 1e10);
    CHECK(scaled.data[0] == 0.0);
    CHECK(scaled.data[3] == doctest::Approx(1e10).epsilon(1e-12));
    CHECK(scaled.data[1] == doctest::Approx(1e4).epsilon(1e-12));

    const FluxImage again = rescale_dynamic_range(scaled, 1e6, 1e10);
    for (std::size_t i = 0; i < again.data.size(); ++i)
        CHECK(again.data[i] == doctest::Approx(scaled.data[i]).epsilon(1e-12));
}

TEST_CASE("rescale: preserves ordering on random images") {
    Rng rng(SeedSpec{55, 0});
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> data(64);
        for (double& v : data) v = std::pow(10.0, 8.0 * rng.next_unit());
        const FluxImage image = make_flux_image(8, 8, 1, data);
        const FluxImage scaled = rescale_dynamic_range(image, 1e5, 1e9);
        for (std::size_t i = 0; i < data.size(); ++i)
            for (std::size_t j = i + 1; j < data.size(); ++j)
                CHECK((data[i] < data[j]) == (scaled.data[i] < scaled.data[j]));
    }
}

TEST_CASE("rescale: constant image rejected") {
    const FluxImage flat = make_flux_image(2, 1, 1, {5.0, 5.0});
    CHECK_THROWS_AS((void)rescale_dynamic_range(flat, 1e6, 1e10), std::invalid_argument);
}

TEST_CASE("capture: uniform spad image matches the response curve") {
    const Exposure exposure{5e-3};
    const FluxImage uniform = make_flux_image(8, 8, 1, std::vector<double>(64, 1e8));
    SensorBundle bundle;
    bundle.sensor = Sensor::spad;
    bundle.spad = kClean;
    const CountImage counts = simulate_capture(uniform, bundle, exposure, SeedSpec{10, 0});
    double sum = 0.0;
    for (long long n : counts.counts) sum += static_cast<double>(n);
    const double mean = sum / 64.0;
    const double model = expected_counts(FluxLevel{1e8}, kClean, exposure);
    const double se = std::sqrt(count_variance(FluxLevel{1e8}, kClean, exposure) / 64.0);
    CHECK(std::abs(mean - model) <= 3.0 * se);
}

TEST_CASE("capture: deterministic and thread-count invariant") {
    const Exposure exposure{2e-4};
    std::vector<double> data(48);
    for (std::size_t i = 0; i < data.size(); ++i)
        data[i] = 1e6 * static_cast<double>(i + 1);
    const FluxImage image = make_flux_image(4, 4, 3, data);
    SensorBundle bundle;
    bundle.sensor = Sensor::spad;
    bundle.spad = kPaper;
    const CountImage a = simulate_capture(image, bundle, exposure, SeedSpec{3, 0}, false, 1);
    const CountImage b = simulate_capture(image, bundle, exposure, SeedSpec{3, 0}, false, 3);
    CHECK(a.counts == b.counts);
    const CountImage c = simulate_capture(image, bundle, exposure, SeedSpec{4, 0});
    CHECK(a.counts != c.counts);
}

TEST_CASE("capture: conventional saturates everywhere above the well") {
    const Exposure exposure{5e-3};
    const FluxImage bright = make_flux_image(4, 4, 1, std::vector<double>(16, 1e9));
    SensorBundle bundle;
    bundle.sensor = Sensor::conventional;
    bundle.conventional = ConventionalConfig{0.9, 33400, 5.0};
    const CountImage counts = simulate_capture(bright, bundle, exposure, SeedSpec{0, 0});
    for (long long n : counts.counts) CHECK(n == 33400);
}

TEST_CASE("capture: fast sampler agrees with the event loop in distribution") {
    const Exposure exposure{5e-3};
    const FluxImage uniform = make_flux_image(16, 16, 1, std::vector<double>(256, 1e8));
    SensorBundle bundle;
    bundle.sensor = Sensor::spad;
    bundle.spad = kClean;
    const CountImage slow = simulate_capture(uniform, bundle, exposure, SeedSpec{1, 0}, false);
    const CountImage fast = simulate_capture(uniform, bundle, exposure, SeedSpec{1, 0}, true);
    auto mean = [](const CountImage& img) {
        double s = 0.0;
        for (long long n : img.counts) s += static_cast<double>(n);
        return s / static_cast<double>(img.counts.size());
    };
    const double se = std::sqrt(count_variance(FluxLevel{1e8}, kClean, exposure) / 256.0);
    CHECK(std::abs(mean(slow) - mean(fast)) <= 4.0 * se);

    SpadConfig with_ap = kClean;
    with_ap.afterpulse_prob = 0.01;
    SensorBundle bad;
    bad.sensor = Sensor::spad;
    bad.spad = with_ap;
    CHECK_THROWS_AS(
        (void)simulate_capture(uniform, bad, exposure, SeedSpec{1, 0}, true),
        std::invalid_argument);
}

TEST_CASE("reconstruct: zero counts give zero flux; round trip within 1 percent") {
    const Exposure exposure{5e-3};
    SensorBundle bundle;
    bundle.sensor = Sensor::spad;
    bundle.spad = kClean;

    CountImage zeros;
    zeros.width = 2;
    zeros.height = 2;
    zeros.channels = 1;
    zeros.counts = {0, 0, 0, 0};
    zeros.sensor = bundle;
    zeros.exposure = exposure;
    const ReconResult zero_recon = reconstruct_flux(zeros);
    for (double v : zero_recon.flux.data) CHECK(v == 0.0);

    const FluxImage uniform = make_flux_image(8, 8, 1, std::vector<double>(64, 1e8));
    const CountImage counts = simulate_capture(uniform, bundle, exposure, SeedSpec{8, 0});
    const ReconResult recon = reconstruct_flux(counts);
    double sum = 0.0;
    for (double v : recon.flux.data) sum += v;
    CHECK(sum / 64.0 == doctest::Approx(1e8).epsilon(0.01));
}

TEST_CASE("reconstruct: conventional saturated pixels flagged at saturation flux") {
    const Exposure exposure{5e-3};
    SensorBundle bundle;
    bundle.sensor = Sensor::conventional;
    bundle.conventional = ConventionalConfig{0.9, 1000, 0.0};

    CountImage counts;
    counts.width = 2;
    counts.height = 1;
    counts.channels = 1;
    counts.counts = {1000, 500};
    counts.sensor = bundle;
    counts.exposure = exposure;
    const ReconResult recon = reconstruct_flux(counts);
    CHECK(recon.saturated[0] == 1);
    CHECK(recon.saturated[1] == 0);
    CHECK(recon.flux.data[0] ==
          doctest::Approx(conventional_saturation_flux(bundle.conventional, exposure)));
}

TEST_CASE("reconstruct: qis all-bins-full flagged") {
    const Exposure exposure{1e-3};
    SensorBundle bundle;
    bundle.sensor = Sensor::qis;
    bundle.qis = QisConfig{0.4, 1e-6, 0.0};

    CountImage counts;
    counts.width = 1;
    counts.height = 1;
    counts.channels = 1;
    counts.counts = {1000};
    counts.sensor = bundle;
    counts.exposure = exposure;
    const ReconResult recon = reconstruct_flux(counts);
    CHECK(recon.saturated[0] == 1);
    CHECK(std::isfinite(recon.flux.data[0]));
}

TEST_CASE("tone map: anchors and monotonicity") {
    const FluxImage zeros = make_flux_image(2, 2, 1, {0.0, 0.0, 0.0, 0.0});
    const auto black = tone_map(zeros, 0.18);
    CHECK(std::all_of(black.begin(), black.end(), [](std::uint8_t v) { return v == 0; }));

    std::vector<double> ramp;
    for (int i = 0; i < 16; ++i) ramp.push_back(std::pow(10.0, i));
    const FluxImage image = make_flux_image(4, 4, 1, ramp);
    const auto toned = tone_map(image, 0.18);
    CHECK(toned[0] == 0);  // far below the mean luminance
    CHECK(toned[15] == 255);
    for (std::size_t i = 1; i < toned.size(); ++i) CHECK(toned[i] >= toned[i - 1]);

    CHECK_THROWS_AS((void)tone_map(image, 0.0), std::invalid_argument);
}

TEST_CASE("tone map: zero maps to zero even among bright pixels") {
    const FluxImage image = make_flux_image(2, 1, 1, {0.0, 1e9});
    const auto toned = tone_map(image, 0.18);
    CHECK(toned[0] == 0);
    CHECK(toned[1] == 255);
}

TEST_CASE("png writer: output decodes back to the input scanlines") {
    std::vector<std::uint8_t> pixels(6 * 4 * 3);
    for (std::size_t i = 0; i < pixels.size(); ++i)
        pixels[i] = static_cast<std::uint8_t>((i * 37) & 0xFF);
    const fs::path path = temp_dir() / "probe.png";
    write_png8(path.string(), 6, 4, 3, pixels);

    const auto bytes = read_bytes(path);
    REQUIRE(bytes.size() > 45);
    // Signature and IHDR dimensions.
    CHECK(bytes[1] == 'P');
    auto be32 = [&](std::size_t off) {
        return (static_cast<std::uint32_t>(bytes[off]) << 24) |
               (static_cast<std::uint32_t>(bytes[off + 1]) << 16) |
               (static_cast<std::uint32_t>(bytes[off + 2]) << 8) |
               static_cast<std::uint32_t>(bytes[off + 3]);
    };
    CHECK(be32(16) == 6);
    CHECK(be32(20) == 4);

    // IDAT payload starts after the 8-byte signature, 25-byte IHDR chunk, and
    // the IDAT length/type; inflate it and strip filter bytes.
    const std::uint32_t idat_len = be32(33);
    const std::size_t idat_off = 41;
    std::vector<std::uint8_t> inflated((6 * 3 + 1) * 4);
    uLongf out_len = inflated.size();
    REQUIRE(uncompress(inflated.data(), &out_len, bytes.data() + idat_off, idat_len) == Z_OK);
    REQUIRE(out_len == inflated.size());
    for (int y = 0; y < 4; ++y) {
        CHECK(inflated[static_cast<std::size_t>(y) * 19] == 0);  // filter byte
        for (int i = 0; i < 18; ++i)
            CHECK(inflated[static_cast<std::size_t>(y) * 19 + 1 + static_cast<std::size_t>(i)] ==
                  pixels[static_cast<std::size_t>(y) * 18 + static_cast<std::size_t>(i)]);
    }
}

TEST_CASE("write outputs: files exist, pfm round-trips, saturation count matches") {
    const Exposure exposure{5e-3};
    SensorBundle bundle;
    bundle.sensor = Sensor::conventional;
    bundle.conventional = ConventionalConfig{0.9, 1000, 0.0};

    CountImage counts;
    counts.width = 2;
    counts.height = 2;
    counts.channels = 1;
    counts.counts = {1000, 1000, 200, 100};
    counts.sensor = bundle;
    counts.exposure = exposure;
    const ReconResult recon = reconstruct_flux(counts);
    const auto toned = tone_map(recon.flux, 0.18);

    const std::string prefix = (temp_dir() / "out").string();
    const OutputPaths paths = outputs_for_prefix(prefix);
    write_outputs(recon, toned, recon.flux.channels, paths);

    const PfmLoadResult back = load_pfm(paths.flux_pfm);
    CHECK(back.image.data == recon.flux.data);

    std::ifstream csv(paths.summary_csv);
    std::string header, row;
    std::getline(csv, header);
    std::getline(csv, row);
    CHECK(header == "channel,min_flux,max_flux,mean_flux,saturated_pixels");
    CHECK(row.substr(row.rfind(',') + 1) == "2");

    const auto png = read_bytes(paths.toned_png);
    CHECK(png.size() > 8);
}
