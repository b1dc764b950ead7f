/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "core/png_writer.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <stdexcept>

#include "core/types.hpp"

namespace spadsim {

namespace {

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_chunk(std::vector<std::uint8_t>& out, const char type[5],
               const std::vector<std::uint8_t>& payload) {
    put_be32(out, static_cast<std::uint32_t>(payload.size()));
    const std::size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), payload.begin(), payload.end());
    const uLong crc =
        crc32(0L, out.data() + crc_start, static_cast<uInt>(out.size() - crc_start));
    put_be32(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

void write_png8(const std::string& path, int width, int height, int channels,
                const std::vector<std::uint8_t>& pixels) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("png dimensions must be positive");
    if (channels != 1 && channels != 3) throw std::invalid_argument("png channels must be 1 or 3");
    const std::size_t expected = static_cast<std::size_t>(width) *
                                 static_cast<std::size_t>(height) *
                                 static_cast<std::size_t>(channels);
    if (pixels.size() != expected) throw std::invalid_argument("png pixel buffer size mismatch");

    // Raw scanlines, each prefixed with filter byte 0.
    const std::size_t stride = static_cast<std::size_t>(width) * static_cast<std::size_t>(channels);
    std::vector<std::uint8_t> raw((stride + 1) * static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) {
        std::uint8_t* row = raw.data() + static_cast<std::size_t>(y) * (stride + 1);
        row[0] = 0;
        std::memcpy(row + 1, pixels.data() + static_cast<std::size_t>(y) * stride, stride);
    }

    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> deflated(bound);
    if (compress2(deflated.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw std::runtime_error("zlib compression failed");
    deflated.resize(bound);

    std::vector<std::uint8_t> file;
    static const std::uint8_t signature[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    file.insert(file.end(), signature, signature + 8);

    std::vector<std::uint8_t> ihdr;
    put_be32(ihdr, static_cast<std::uint32_t>(width));
    put_be32(ihdr, static_cast<std::uint32_t>(height));
    ihdr.push_back(8);                                   // bit depth
    ihdr.push_back(channels == 3 ? 2 : 0);               // color type
    ihdr.push_back(0);                                   // compression
    ihdr.push_back(0);                                   // filter method
    ihdr.push_back(0);                                   // no interlace
    put_chunk(file, "IHDR", ihdr);
    put_chunk(file, "IDAT", deflated);
    put_chunk(file, "IEND", {});

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(file.data()),
              static_cast<std::streamsize>(file.size()));
    if (!out.good()) throw IoError("write failed: " + path);
}

}  // namespace spadsim
