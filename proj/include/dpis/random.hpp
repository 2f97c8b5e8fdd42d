#pragma once

#include <cstdint>
#include <random>

namespace dpis {

// Seeded generator whose output sequence is identical on every standard library.
// std::mt19937_64 is fully specified; the std distributions are not, so bounded
// draws go through below().
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound). bound must be non-zero.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t reject_under = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= reject_under) return r % bound;
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dpis
