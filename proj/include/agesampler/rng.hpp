#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace agesampler {

/// Seedable random stream. The engine is std::mt19937_64, whose output
/// sequence is fixed by the C++ standard; seeds are expanded with SplitMix64
/// and uniforms are built from the top 53 bits, so draws reproduce on any
/// conforming platform. Independent streams come from split().
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  /// A new generator whose stream is a deterministic function of this
  /// generator's seed and `stream`, and does not consume from this one.
  [[nodiscard]] Rng split(std::uint64_t stream) const {
    return Rng(mix(seed_ ^ mix(stream + 0x632be59bd9b4e019ULL)));
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Inverse-CDF draw from a discrete distribution. Any rounding deficit in
  /// the weights falls on the last index with positive weight.
  std::size_t categorical(std::span<const double> weights) {
    const double u = uniform();
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      last = i;
      acc += weights[i];
      if (u < acc) return i;
    }
    return last;
  }

  [[nodiscard]] std::uint64_t seed() const { return seed_; }

  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace agesampler
