#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpis/core.hpp"
#include "dpis/keyspace.hpp"

namespace dpis {

// ---- Histograms -----------------------------------------------------------

struct Histogram {
  std::array<std::uint64_t, 256> bins{};

  std::uint64_t total() const;
  friend bool operator==(const Histogram&, const Histogram&) = default;
};

Histogram channel_histogram(const ImageBuffer& image, Channel c);

struct HistogramDistance {
  std::uint64_t l1 = 0;
  std::uint64_t max_bin_delta = 0;

  friend bool operator==(const HistogramDistance&, const HistogramDistance&) = default;
};

// Throws DimensionMismatch when the histograms count different pixel totals.
HistogramDistance histogram_distance(const Histogram& a, const Histogram& b);

// Pixels whose value in channel c differs between the two images.
std::uint64_t changed_value_count(const ImageBuffer& a, const ImageBuffer& b, Channel c);

// ---- Attacks --------------------------------------------------------------

// Fraction of bytes in 0x20..0x7E; 0 for an empty sequence.
double printable_ratio(std::span<const std::uint8_t> bytes);

// Attacks skip the 32 header bits and read expected_len message bytes. When
// the true message is supplied, match reports whether it was recovered.
struct AttackReport {
  std::string attack;
  Bytes recovered;
  double printable_ratio = 0.0;
  bool match = false;
};

using Truth = std::optional<std::span<const std::uint8_t>>;

// Reads with the key but as if no pixel were ever skipped.
AttackReport attack_sequential(const ImageBuffer& stego, const StegoKey& key, std::size_t expected_len,
                               Truth truth = std::nullopt);

// Reads exactly bits_per_pixel (1..4) bits from every data channel, ignoring
// the flag LSB.
AttackReport attack_uniform(const ImageBuffer& stego, const StegoKey& key, int bits_per_pixel,
                            std::size_t expected_len, Truth truth = std::nullopt);

struct BruteForceCandidate {
  StegoKey key;
  double printable_ratio = 0.0;
  bool match = false;
};

struct BruteForceResult {
  bool exhaustive = false;
  std::uint64_t trials = 0;
  std::vector<BruteForceCandidate> candidates;  // score desc, then key string asc

  std::size_t match_count() const;
};

// Tries `budget` distinct candidate indicator sequences of length n drawn
// from the pattern space (all of them when the space is no larger than the
// budget), extracting with each. Deterministic per seed.
BruteForceResult attack_bruteforce(const ImageBuffer& stego, std::size_t n, std::uint64_t budget,
                                   std::size_t expected_len, std::uint64_t seed, Truth truth = std::nullopt);

}  // namespace dpis
