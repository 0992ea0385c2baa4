#pragma once

#include <cstdint>

#include "cyclesim/intmath.hpp"

namespace cyclesim {

// splitmix64. The standard library's distributions are not bit-stable across
// implementations, and result files are compared byte for byte, so the
// generator and the bounded-draw scheme are pinned here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased draw in [0, bound) by rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    sim_check(bound > 0, "rng: empty range");
    std::uint64_t min = (0ULL - bound) % bound;
    for (;;) {
      std::uint64_t x = next_u64();
      if (x >= min) return x % bound;
    }
  }

  // Inclusive bounds; hi - lo must fit in int64.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    sim_check(lo <= hi, "rng: inverted range");
    return lo + static_cast<std::int64_t>(
                    next_below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  double uniform_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Stream derivation: one run's generator depends only on (seed, a, b), never
// on how many draws other runs made, so sweeps can be reordered or
// parallelized without perturbing results.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a,
                              std::uint64_t b) {
  Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (a + 1)) ^
        (0xc2b2ae3d27d4eb4fULL * (b + 1)));
  r.next_u64();
  return r.next_u64();
}

}  // namespace cyclesim
