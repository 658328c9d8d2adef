#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace sclkin {

/// Deterministic per-path random stream (xoshiro256++ seeded through
/// splitmix64).  A given (master seed, path index) pair yields the same
/// draw sequence regardless of worker count or execution order, which is
/// what makes every Monte Carlo artifact bitwise reproducible.
class PathRng {
 public:
  PathRng(std::uint64_t master_seed, std::uint64_t path_index) {
    std::uint64_t x = master_seed + 0x9E3779B97F4A7C15ULL * (path_index + 1);
    for (auto& word : s_) {
      x += 0x9E3779B97F4A7C15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Exponential with the given rate; rate <= 0 never fires (returns inf).
  double exponential(double rate) {
    if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
    return -std::log1p(-uniform01()) / rate;
  }

  /// Poisson count by accumulating unit-exponential gaps (fine at the
  /// small means used here).
  std::uint64_t poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    std::uint64_t count = 0;
    double acc = exponential(1.0);
    while (acc < mean) {
      ++count;
      acc += exponential(1.0);
    }
    return count;
  }

  /// Index draw proportional to nonnegative weights; throws if the total
  /// weight is not positive.
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw std::runtime_error("categorical: nonpositive total weight");
    const double u = uniform01() * total;
    double acc = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      acc += weights[k];
      if (u < acc) return k;
    }
    // Rounding can leave u marginally above the final cumulative value.
    for (std::size_t k = weights.size(); k-- > 0;) {
      if (weights[k] > 0.0) return k;
    }
    throw std::runtime_error("categorical: no positive weight");
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

/// Master seed plus the path->substream derivation rule.
struct RandomStreamPolicy {
  std::uint64_t master_seed = 0;
  PathRng stream(std::uint64_t path_index) const { return PathRng(master_seed, path_index); }
};

}  // namespace sclkin
