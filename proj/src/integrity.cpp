#include "dpis/integrity.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "dpis/errors.hpp"
#include "dpis/random.hpp"

namespace dpis {

IntegrityManifest build_manifest(const ImageBuffer& stego, std::span<const Position> skipped_positions,
                                 std::optional<std::size_t> sample_size, std::uint64_t seed) {
  std::vector<Position> pool(skipped_positions.begin(), skipped_positions.end());
  for (const auto& p : pool) {
    if (!stego.contains(p)) throw std::out_of_range("skipped position outside the image");
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  const std::size_t take = std::min(sample_size.value_or(pool.size()), pool.size());
  Rng rng(seed);
  // Partial Fisher-Yates over the sorted pool.
  for (std::size_t i = 0; i < take; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(take);
  std::sort(pool.begin(), pool.end());

  IntegrityManifest manifest;
  manifest.width = stego.width();
  manifest.height = stego.height();
  manifest.sample_seed = seed;
  manifest.entries.reserve(take);
  for (const auto& p : pool) manifest.entries.push_back({p, stego.at(p.x, p.y)});
  return manifest;
}

VerifyResult verify_manifest(const ImageBuffer& image, const IntegrityManifest& manifest) {
  if (image.width() != manifest.width || image.height() != manifest.height) {
    throw DimensionMismatch("image is " + std::to_string(image.width()) + "x" + std::to_string(image.height()) +
                            ", manifest expects " + std::to_string(manifest.width) + "x" +
                            std::to_string(manifest.height));
  }
  VerifyResult result;
  for (const auto& e : manifest.entries) {
    if (!image.contains(e.position) || image.at(e.position.x, e.position.y) != e.value)
      result.mismatches.push_back(e.position);
  }
  return result;
}

}  // namespace dpis
