#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dpis/codec.hpp"
#include "dpis/core.hpp"

namespace dpis {

// Two fixed-rule RGB schemes the DPIS codec is compared against. Both rotate
// the indicator through R, G, B (pixel i uses channel i mod 3), call the two
// other channels channel 1 = succ(indicator) and channel 2 = succ(channel 1),
// never write the indicator, and share the 32-bit length header.

struct BaselineResult {
  ImageBuffer stego;
  CapacityReport report;
};

// ---- Pixel Indicator ------------------------------------------------------
// The low two bits of the indicator select what the pixel carries:
//   00 nothing, 01 two bits in channel 2, 10 two bits in channel 1,
//   11 two bits in channel 1 then two in channel 2.

CapacityReport pi_capacity(const ImageBuffer& image);
BaselineResult pi_embed(const ImageBuffer& cover, std::span<const std::uint8_t> message);
Bytes pi_extract(const ImageBuffer& stego);

// ---- RGB intensity variable bits -----------------------------------------

struct PartitionRange {
  std::uint8_t low;
  std::uint8_t high;  // inclusive
  int bits;

  friend bool operator==(const PartitionRange&, const PartitionRange&) = default;
};

// Static intensity -> bit-count table. Ranges must be disjoint, cover 0..255,
// carry 1..4 bits, and never give a higher range more bits than a lower one.
// Lookups use the value with its low max_bits() bits cleared, so the table
// reads the same before and after embedding.
class PartitionSchema {
 public:
  // Throws std::invalid_argument when the ranges break an invariant.
  explicit PartitionSchema(std::vector<PartitionRange> ranges);

  // [(0..63) -> 4, (64..127) -> 3, (128..255) -> 2]. A stand-in: the
  // original scheme's table was never published.
  static PartitionSchema default_schema();

  // "low-high:bits,low-high:bits,..." e.g. "0-63:4,64-127:3,128-255:2".
  static PartitionSchema parse(std::string_view text);
  std::string to_string() const;

  const std::vector<PartitionRange>& ranges() const noexcept { return ranges_; }
  int max_bits() const noexcept { return max_bits_; }
  int bits_for(std::uint8_t value) const;

  friend bool operator==(const PartitionSchema&, const PartitionSchema&) = default;

 private:
  std::vector<PartitionRange> ranges_;
  int max_bits_ = 0;
};

CapacityReport ivb_capacity(const ImageBuffer& image, const PartitionSchema& schema);
BaselineResult ivb_embed(const ImageBuffer& cover, const PartitionSchema& schema,
                         std::span<const std::uint8_t> message);
Bytes ivb_extract(const ImageBuffer& stego, const PartitionSchema& schema);

}  // namespace dpis
