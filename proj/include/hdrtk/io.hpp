#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hdrtk/image.hpp"

namespace hdrtk::io {

using Bytes = std::vector<std::uint8_t>;

enum class FileFormat { RadianceRGBE, PFM, PPM6 };

const char* to_string(FileFormat f) noexcept;

/// Identifies a stream by its magic bytes. Throws UnsupportedFormat otherwise.
FileFormat detect_format(std::span<const std::uint8_t> bytes);

// Radiance RGBE (.hdr / .pic). Flat and new-style RLE scanlines are decoded;
// the writer emits RLE whenever the width is in [8, 32767].
HdrImage read_rgbe(std::span<const std::uint8_t> bytes);
Bytes write_rgbe(const HdrImage& img);

/// Shared-exponent encoding of one pixel, truncating mantissas.
std::array<std::uint8_t, 4> encode_rgbe_pixel(double r, double g, double b);
std::array<double, 3> decode_rgbe_pixel(std::span<const std::uint8_t, 4> rgbe);

// Portable float map, colour ("PF") only. Rows are stored bottom-to-top.
HdrImage read_pfm(std::span<const std::uint8_t> bytes);
/// Writes little-endian float32 (scale -1.0).
Bytes write_pfm(const HdrImage& img);

// Binary PPM, maxval 255.
LdrImage read_ppm(std::span<const std::uint8_t> bytes);
Bytes write_ppm(const LdrImage& img);

Bytes read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Loads any supported HDR container. A PPM is decoded through the sRGB curve.
HdrImage load_hdr(const std::filesystem::path& path);
/// Loads an 8-bit image; only PPM is accepted.
LdrImage load_ldr(const std::filesystem::path& path);
/// Chooses RGBE for .hdr/.pic, PFM for .pfm. Other extensions are rejected.
void save_hdr(const std::filesystem::path& path, const HdrImage& img);
void save_ldr(const std::filesystem::path& path, const LdrImage& img);

}  // namespace hdrtk::io
