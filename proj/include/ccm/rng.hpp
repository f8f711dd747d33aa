#pragma once

#include <cstdint>
#include <optional>

namespace ccm {

/// SplitMix64 stream generator ("ccm-splitmix64-v1").
///
/// state += 0x9E3779B97F4A7C15, then the output is the Stafford variant-13
/// finalizer of the new state. Uniform doubles take the top 53 bits.
/// Gaussian draws use the Box-Muller transform and consume two uniforms per
/// pair; the second value of each pair is cached.
///
/// Child seeds are derived with split(seed, k) = mix64(seed + (k + 1) * golden),
/// so every consumer that needs an independent stream gets one from the
/// top-level seed without touching ambient entropy.
class SplitMix64 {
 public:
  static constexpr const char* kAlgorithm = "ccm-splitmix64-v1";

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in (0, 1]; safe as a logarithm argument.
  double uniform_open_low();
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double gaussian();
  double gaussian(double mean, double stddev) {
    return mean + stddev * gaussian();
  }
  double exponential(double rate);
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
  std::optional<double> cached_gaussian_;
};

std::uint64_t mix64(std::uint64_t z);
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace ccm
