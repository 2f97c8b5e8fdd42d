#include "dpis/keyspace.hpp"

#include <array>
#include <limits>
#include <stdexcept>

namespace dpis {
namespace {

constexpr std::array<std::array<Channel, 3>, 6> kPermutations = {{
    {Channel::R, Channel::G, Channel::B},
    {Channel::R, Channel::B, Channel::G},
    {Channel::G, Channel::R, Channel::B},
    {Channel::G, Channel::B, Channel::R},
    {Channel::B, Channel::R, Channel::G},
    {Channel::B, Channel::G, Channel::R},
}};

void require_length(std::size_t n) {
  if (n < kMinIndicatorLength) throw std::invalid_argument("indicator length must be >= 3");
}

}  // namespace

BigInt keyspace_count(std::size_t n) {
  require_length(n);
  BigInt count = 2;
  for (std::size_t i = 2; i < n; ++i) count *= 3;
  return count;
}

BigInt keyspace_count_squared_reading(std::size_t n) {
  require_length(n);
  BigInt count = 1;
  for (std::size_t i = 0; i < (n - 2) * 2; ++i) count *= 3;
  return count;
}

std::optional<std::uint64_t> keyspace_count_u64(std::size_t n) {
  const BigInt count = keyspace_count(n);
  if (count > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return count.convert_to<std::uint64_t>();
}

bool is_canonical_pattern(std::span<const Channel> pattern) {
  if (pattern.size() < kMinIndicatorLength) return false;
  return pattern[0] != pattern[1] && pattern[0] != pattern[2] && pattern[1] != pattern[2];
}

std::vector<Channel> pattern_at(std::size_t n, std::uint64_t index) {
  const auto count = keyspace_count_u64(n);
  if (!count || index >= *count) throw std::out_of_range("pattern index outside the keyspace");

  const auto& lead = kPermutations[index % 6];
  std::vector<Channel> pattern(lead.begin(), lead.end());
  index /= 6;
  for (std::size_t i = 3; i < n; ++i) {
    pattern.push_back(static_cast<Channel>(index % 3));
    index /= 3;
  }
  return pattern;
}

std::vector<Channel> random_pattern(std::size_t n, Rng& rng) {
  require_length(n);
  const auto& lead = kPermutations[rng.below(6)];
  std::vector<Channel> pattern(lead.begin(), lead.end());
  for (std::size_t i = 3; i < n; ++i) pattern.push_back(static_cast<Channel>(rng.below(3)));
  return pattern;
}

}  // namespace dpis
