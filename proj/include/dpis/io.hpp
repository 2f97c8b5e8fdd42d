#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "dpis/core.hpp"
#include "dpis/integrity.hpp"

namespace dpis {

// ---- Images ---------------------------------------------------------------
// Only lossless 8-bit RGB rasters go in or out: PNG (color type RGB, depth 8)
// and binary PPM (P6, maxval 255). Palette, grayscale, alpha, 16-bit and lossy
// files are refused with UnsupportedFormat; a payload in the low bits would
// not survive any of them.

ImageBuffer load_image(const std::filesystem::path& path);

// Format picked from the extension (.png or .ppm).
void save_image(const ImageBuffer& image, const std::filesystem::path& path);

ImageBuffer decode_image(std::span<const std::uint8_t> bytes);
ImageBuffer decode_png(std::span<const std::uint8_t> bytes);
Bytes encode_png(const ImageBuffer& image);
ImageBuffer decode_ppm(std::span<const std::uint8_t> bytes);
Bytes encode_ppm(const ImageBuffer& image);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// ---- Key file -------------------------------------------------------------
//   DPISKEY v1
//   indicator=<R/G/B string, length >= 3>
//   threshold=<0..255>

inline constexpr std::string_view kKeyMagic = "DPISKEY v1";

std::string serialize_key(const StegoKey& key);
// Throws ParseError naming the offending line.
StegoKey parse_key(std::string_view text);

// ---- Manifest file --------------------------------------------------------
//   DPISMANIFEST v1
//   dims=<w>x<h>
//   count=<M>
//   <x> <y> <r> <g> <b>      (M lines)
//
// The sampling seed is not part of the file; parsed manifests carry seed 0.

inline constexpr std::string_view kManifestMagic = "DPISMANIFEST v1";

std::string serialize_manifest(const IntegrityManifest& manifest);
IntegrityManifest parse_manifest(std::string_view text);

}  // namespace dpis
