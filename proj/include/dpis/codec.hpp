#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dpis/core.hpp"

namespace dpis {

// Every scheme prefixes the message with its byte length as a 32-bit
// big-endian integer, MSB-first like the message bits that follow.
inline constexpr std::size_t kHeaderBits = 32;

// Header followed by message bytes.
Bytes build_payload(std::span<const std::uint8_t> message);

// Pixel usage of one scheme over one image. A pixel is "utilized" when at
// least one payload bit was written into it.
struct CapacityReport {
  std::uint64_t total_pixels = 0;
  std::uint64_t utilized_pixels = 0;
  std::uint64_t skipped_pixels = 0;
  std::uint64_t capacity_bits = 0;  // bits the whole image can carry
  std::uint64_t used_bits = 0;      // header + message bits
  std::uint64_t carried_bits = 0;   // bit slots written, including padding in the last chunk

  double utilization_percent() const {
    return total_pixels == 0 ? 0.0 : 100.0 * static_cast<double>(utilized_pixels) / static_cast<double>(total_pixels);
  }
  // Pixels after the payload ended, left as they were.
  std::uint64_t untouched_pixels() const { return total_pixels - utilized_pixels - skipped_pixels; }

  friend bool operator==(const CapacityReport&, const CapacityReport&) = default;
};

// Random key drawn from the pattern space (see keyspace.hpp). Deterministic
// per seed. Throws std::invalid_argument for length < 3.
StegoKey keygen(std::size_t length, std::uint64_t seed, std::uint8_t threshold = kDefaultThreshold);

struct ScheduledPixel {
  std::size_t index;
  Channel indicator;
  PixelPlan plan;
};

// The embedding plan of every pixel. The indicator for pixel i is
// key[i mod n]; skipped pixels advance the schedule like any other.
std::vector<ScheduledPixel> schedule(const ImageBuffer& image, const StegoKey& key);

// Dry run. utilized_pixels counts every embeddable pixel, used_bits is 0.
CapacityReport capacity_scan(const ImageBuffer& image, const StegoKey& key);

struct EmbedResult {
  ImageBuffer stego;
  std::vector<Position> skipped_positions;  // skips before the payload ran out
  CapacityReport report;
};

// Throws CapacityError when header + message exceed capacity_scan().capacity_bits.
EmbedResult embed(const ImageBuffer& cover, const StegoKey& key, std::span<const std::uint8_t> message);

// Throws MalformedPayload when the header claims more bytes than the image can yield.
Bytes extract(const ImageBuffer& stego, const StegoKey& key);

// How a PayloadReader walks a stego image. The defaults are the real
// extraction rules; the attacks switch pieces of them off.
struct ReadPolicy {
  bool honor_skip = true;  // false: treat every pixel as carrying data
  int fixed_bit_count = 0; // 1..4 forces that many bits per pixel; 0 reads the flag LSB
};

// Streams payload bits out of a stego image in embedding order.
class PayloadReader {
 public:
  PayloadReader(const ImageBuffer& image, const StegoKey& key, ReadPolicy policy = {});

  // Next k bits (k <= 32), or nullopt once the image has no pixels left.
  std::optional<std::uint32_t> take(int k);

  // Reads up to n bytes, stopping early if the image runs out.
  Bytes take_bytes(std::size_t n);

  // No more than this many bits can still come out.
  std::uint64_t max_remaining_bits() const;

 private:
  bool refill();

  const ImageBuffer& image_;
  const StegoKey& key_;
  ReadPolicy policy_;
  std::size_t next_pixel_ = 0;
  std::uint64_t buffer_ = 0;
  int buffered_ = 0;
};

}  // namespace dpis
