/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "core/pfm.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

namespace spadsim {

namespace {

/// Next whitespace-delimited token; PFM headers allow any blank separators.
std::string next_token(std::istream& in) {
    std::string token;
    if (!(in >> token)) throw IoError("truncated pfm header");
    return token;
}

float byteswap_float(float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    bits = ((bits & 0x000000FFu) << 24) | ((bits & 0x0000FF00u) << 8) |
           ((bits & 0x00FF0000u) >> 8) | ((bits & 0xFF000000u) >> 24);
    std::memcpy(&v, &bits, 4);
    return v;
}

}  // namespace

PfmLoadResult load_pfm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);

    const std::string magic = next_token(in);
    int channels;
    if (magic == "PF") channels = 3;
    else if (magic == "Pf") channels = 1;
    else throw IoError("not a pfm file (bad magic): " + path);

    int width, height;
    double scale;
    try {
        width = std::stoi(next_token(in));
        height = std::stoi(next_token(in));
        scale = std::stod(next_token(in));
    } catch (const std::exception&) {
        throw IoError("malformed pfm header: " + path);
    }
    if (width <= 0 || height <= 0) throw IoError("bad pfm dimensions: " + path);
    if (scale == 0.0 || !std::isfinite(scale)) throw IoError("bad pfm scale: " + path);

    // Exactly one whitespace byte separates the header from the payload.
    in.get();
    if (!in) throw IoError("truncated pfm header: " + path);

    const bool file_little = scale < 0.0;
    const bool host_little = std::endian::native == std::endian::little;
    const bool swap = file_little != host_little;

    const std::size_t values = static_cast<std::size_t>(width) *
                               static_cast<std::size_t>(height) *
                               static_cast<std::size_t>(channels);
    std::vector<float> raw(values);
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(values * sizeof(float)));
    if (static_cast<std::size_t>(in.gcount()) != values * sizeof(float))
        throw IoError("truncated pfm payload: " + path);

    PfmLoadResult result;
    result.image.width = width;
    result.image.height = height;
    result.image.channels = channels;
    result.image.data.resize(values);

    // PFM rows run bottom to top; flip into top-down storage.
    for (int y = 0; y < height; ++y) {
        const int src_row = height - 1 - y;
        for (int x = 0; x < width; ++x) {
            for (int c = 0; c < channels; ++c) {
                const std::size_t src =
                    (static_cast<std::size_t>(src_row) * static_cast<std::size_t>(width) +
                     static_cast<std::size_t>(x)) *
                        static_cast<std::size_t>(channels) +
                    static_cast<std::size_t>(c);
                float v = raw[src];
                if (swap) v = byteswap_float(v);
                if (std::isnan(v)) throw IoError("nan sample in pfm payload: " + path);
                if (!std::isfinite(v)) throw IoError("non-finite sample in pfm payload: " + path);
                double d = static_cast<double>(v);
                if (d < 0.0) {
                    d = 0.0;
                    ++result.negatives_clamped;
                }
                result.image.at(x, y, c) = d;
            }
        }
    }
    return result;
}

void write_pfm(const FluxImage& image, const std::string& path) {
    if (image.width <= 0 || image.height <= 0 || image.data.empty())
        throw std::invalid_argument("empty image");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);

    out << (image.channels == 3 ? "PF" : "Pf") << "\n"
        << image.width << " " << image.height << "\n"
        << "-1.0\n";

    const bool host_little = std::endian::native == std::endian::little;
    std::vector<float> row(static_cast<std::size_t>(image.width) *
                           static_cast<std::size_t>(image.channels));
    for (int y = image.height - 1; y >= 0; --y) {
        std::size_t i = 0;
        for (int x = 0; x < image.width; ++x) {
            for (int c = 0; c < image.channels; ++c) {
                float v = static_cast<float>(image.at(x, y, c));
                if (!host_little) v = byteswap_float(v);
                row[i++] = v;
            }
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!out.good()) throw IoError("write failed: " + path);
}

}  // namespace spadsim
