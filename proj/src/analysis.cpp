#include "dpis/analysis.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "dpis/codec.hpp"
#include "dpis/errors.hpp"
#include "dpis/random.hpp"

namespace dpis {
namespace {

AttackReport read_as_attacker(std::string name, const ImageBuffer& stego, const StegoKey& key, ReadPolicy policy,
                              std::size_t expected_len, Truth truth) {
  PayloadReader reader(stego, key, policy);
  AttackReport report;
  report.attack = std::move(name);
  if (reader.take(static_cast<int>(kHeaderBits))) report.recovered = reader.take_bytes(expected_len);
  report.printable_ratio = printable_ratio(report.recovered);
  report.match = truth && std::equal(report.recovered.begin(), report.recovered.end(), truth->begin(), truth->end());
  return report;
}

}  // namespace

std::uint64_t Histogram::total() const {
  std::uint64_t t = 0;
  for (auto b : bins) t += b;
  return t;
}

Histogram channel_histogram(const ImageBuffer& image, Channel c) {
  Histogram h;
  for (const Pixel& p : image.pixels()) ++h.bins[p[c]];
  return h;
}

HistogramDistance histogram_distance(const Histogram& a, const Histogram& b) {
  if (a.total() != b.total()) throw DimensionMismatch("histograms count different numbers of pixels");
  HistogramDistance d;
  for (std::size_t v = 0; v < 256; ++v) {
    const auto delta = a.bins[v] > b.bins[v] ? a.bins[v] - b.bins[v] : b.bins[v] - a.bins[v];
    d.l1 += delta;
    d.max_bin_delta = std::max(d.max_bin_delta, delta);
  }
  return d;
}

std::uint64_t changed_value_count(const ImageBuffer& a, const ImageBuffer& b, Channel c) {
  if (a.width() != b.width() || a.height() != b.height()) throw DimensionMismatch("images differ in size");
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a[i][c] != b[i][c] ? 1 : 0;
  return n;
}

double printable_ratio(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) return 0.0;
  const auto printable = std::count_if(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b >= 0x20 && b <= 0x7E; });
  return static_cast<double>(printable) / static_cast<double>(bytes.size());
}

AttackReport attack_sequential(const ImageBuffer& stego, const StegoKey& key, std::size_t expected_len, Truth truth) {
  return read_as_attacker("sequential", stego, key, ReadPolicy{.honor_skip = false, .fixed_bit_count = 0},
                          expected_len, truth);
}

AttackReport attack_uniform(const ImageBuffer& stego, const StegoKey& key, int bits_per_pixel,
                            std::size_t expected_len, Truth truth) {
  if (bits_per_pixel < 1 || bits_per_pixel > 4) throw std::invalid_argument("uniform attack bit count must be in 1..4");
  return read_as_attacker("uniform", stego, key, ReadPolicy{.honor_skip = true, .fixed_bit_count = bits_per_pixel},
                          expected_len, truth);
}

std::size_t BruteForceResult::match_count() const {
  return static_cast<std::size_t>(std::count_if(candidates.begin(), candidates.end(), [](const auto& c) { return c.match; }));
}

BruteForceResult attack_bruteforce(const ImageBuffer& stego, std::size_t n, std::uint64_t budget,
                                   std::size_t expected_len, std::uint64_t seed, Truth truth) {
  if (budget == 0) throw std::invalid_argument("brute force budget must be >= 1");
  const auto space = keyspace_count_u64(n);  // also rejects n < 3

  std::vector<std::vector<Channel>> patterns;
  BruteForceResult result;
  if (space && *space <= budget) {
    result.exhaustive = true;
    patterns.reserve(*space);
    for (std::uint64_t i = 0; i < *space; ++i) patterns.push_back(pattern_at(n, i));
  } else {
    Rng rng(seed);
    std::unordered_set<std::string> seen;
    patterns.reserve(budget);
    while (patterns.size() < budget) {
      auto p = random_pattern(n, rng);
      std::string s;
      for (Channel c : p) s.push_back(channel_letter(c));
      if (seen.insert(std::move(s)).second) patterns.push_back(std::move(p));
    }
  }

  result.trials = patterns.size();
  result.candidates.reserve(patterns.size());
  for (auto& pattern : patterns) {
    StegoKey key(std::move(pattern));
    const auto report = read_as_attacker("bruteforce", stego, key, {}, expected_len, truth);
    result.candidates.push_back({std::move(key), report.printable_ratio, report.match});
  }

  std::sort(result.candidates.begin(), result.candidates.end(), [](const auto& a, const auto& b) {
    if (a.printable_ratio != b.printable_ratio) return a.printable_ratio > b.printable_ratio;
    return a.key.sequence_string() < b.key.sequence_string();
  });
  return result;
}

}  // namespace dpis
