#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dpis/core.hpp"
#include "dpis/random.hpp"

namespace dpis {

using BigInt = boost::multiprecision::cpp_int;

// Indicator patterns of length n: the first three entries are a permutation
// of {R, G, B}, the remaining n - 3 entries are free. There are
// 3! * 3^(n-3) = 2 * 3^(n-2) of them.
//
// Throws std::invalid_argument for n < 3.
BigInt keyspace_count(std::size_t n);

// The alternative reading 3^((n-2)*2). Reported by `dpis analyze keyspace
// --explain` for comparison; it does not match the tabulated counts.
BigInt keyspace_count_squared_reading(std::size_t n);

// keyspace_count(n) when it fits in 64 bits.
std::optional<std::uint64_t> keyspace_count_u64(std::size_t n);

bool is_canonical_pattern(std::span<const Channel> pattern);

// Bijection [0, keyspace_count(n)) -> patterns. The low base-6 digit picks the
// leading permutation (lexicographic), then base-3 digits fill positions 3..n-1.
std::vector<Channel> pattern_at(std::size_t n, std::uint64_t index);

// Uniform draw from the pattern space.
std::vector<Channel> random_pattern(std::size_t n, Rng& rng);

}  // namespace dpis
