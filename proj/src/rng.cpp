#include "ccm/rng.hpp"

#include <cmath>
#include <numbers>

#include "ccm/error.hpp"

namespace ccm {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;
}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + (index + 1) * kGolden);
}

std::uint64_t SplitMix64::next() {
  state_ += kGolden;
  return mix64(state_);
}

double SplitMix64::uniform() {
  return static_cast<double>(next() >> 11) * kTwoPow53Inv;
}

double SplitMix64::uniform_open_low() {
  return static_cast<double>((next() >> 11) + 1) * kTwoPow53Inv;
}

double SplitMix64::gaussian() {
  if (cached_gaussian_) {
    double g = *cached_gaussian_;
    cached_gaussian_.reset();
    return g;
  }
  const double u1 = uniform_open_low();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_gaussian_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

double SplitMix64::exponential(double rate) {
  if (!(rate > 0.0)) throw ConfigError("exponential rate must be positive");
  return -std::log(uniform_open_low()) / rate;
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  if (bound == 0) throw DomainError("below(0) has no valid outcome");
  // Reject the short final range so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace ccm
