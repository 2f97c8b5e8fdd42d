#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dpis/core.hpp"

namespace dpis {

struct ManifestEntry {
  Position position;
  Pixel value;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

// Positions and exact RGB values of pixels the embedder left alone. Travels
// with the key; a receiver checks it before extracting.
struct IntegrityManifest {
  static constexpr int kVersion = 1;

  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<ManifestEntry> entries;  // row-major order, unique positions
  std::uint64_t sample_seed = 0;       // not serialized; see io.hpp
};

inline constexpr std::size_t kDefaultManifestSample = 64;

// Samples min(sample_size, distinct positions) entries from skipped_positions.
// sample_size = nullopt tracks every position. Throws std::out_of_range if a
// position lies outside the image.
IntegrityManifest build_manifest(const ImageBuffer& stego, std::span<const Position> skipped_positions,
                                 std::optional<std::size_t> sample_size, std::uint64_t seed);

struct VerifyResult {
  std::vector<Position> mismatches;

  bool ok() const noexcept { return mismatches.empty(); }
};

// Throws DimensionMismatch when the image size differs from the manifest's.
VerifyResult verify_manifest(const ImageBuffer& image, const IntegrityManifest& manifest);

}  // namespace dpis
