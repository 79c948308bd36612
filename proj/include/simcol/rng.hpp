#pragma once

#include <cstdint>
#include <random>

namespace simcol {

/// Seeded generator with a platform-independent draw contract.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. std::uniform_int_distribution is not (it is implementation
/// defined), so bounded draws use rejection sampling on the raw 64-bit words:
/// `below(n)` discards words >= the largest multiple of n and returns word % n.
/// Every chain step documents which draws it makes and in what order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Uniform double in [0, 1) from the top 53 bits of one word.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace simcol
