#pragma once

#include <cstdint>
#include <random>

namespace ert {

/// Explicitly seeded, splittable generator.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard, so runs are reproducible across toolchains. Integer draws use
/// rejection sampling and are exactly uniform; std distributions are avoided
/// because their algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream keyed by (this generator's seed, stream id). Does not
  /// depend on how many values have been drawn from *this.
  [[nodiscard]] Rng split(std::uint64_t stream) const;

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform integer in [lo, hi], inclusive.
  std::uint64_t uniform_in(std::uint64_t lo, std::uint64_t hi) {
    return lo + uniform_below(hi - lo + 1);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  bool bernoulli(double p) { return uniform01() < p; }

  [[nodiscard]] std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace ert
