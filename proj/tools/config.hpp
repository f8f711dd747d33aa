#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccm/analysis.hpp"
#include "ccm/scheme.hpp"
#include "ccm/serialize.hpp"
#include "ccm/sim.hpp"

namespace ccm::cli {

inline constexpr int kConfigVersion = 1;

struct PayloadConfig {
  // Generated payload: A is t x r, B is t x w (x is t x w for matrix-vector).
  std::size_t r = 0, t = 0, w = 0;
  std::optional<std::string> a_path, b_path;
  bool generated() const { return !a_path; }
};

struct VerifyConfig {
  PatternMode mode = PatternMode::Subset;
  std::optional<std::size_t> budget;  // default: the plan's threshold
  std::uint64_t guard = 1'000'000;
};

struct CondConfig {
  PatternMode mode = PatternMode::Subset;
  std::optional<std::size_t> budget;
  std::uint64_t guard = 1'000'000;
  std::optional<std::uint64_t> samples;
  bool per_pattern = false;
};

struct SimulateConfig {
  DelayModel delay;
  std::size_t trials = 1;
  std::optional<std::string> trace_path;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  SchemeParams scheme;
  std::optional<PayloadConfig> payload;
  VerifyConfig verify;
  CondConfig cond;
  SimulateConfig simulate;
  std::vector<std::size_t> stragglers;  // workers treated as failed by multiply
  std::optional<std::string> out;
  std::string format = "json";
};

/// Parses and validates a config document. Unknown keys, a missing or
/// unsupported version and malformed values raise ConfigError.
ExperimentConfig parse_config(const Json& doc);
/// The "scheme" and "simulate.delay" sections on their own.
SchemeParams parse_scheme(const Json& j);
DelayModel parse_delay(const Json& j);
ExperimentConfig load_config(const std::string& path);

/// Seeds derived from the single top-level seed.
enum class SeedStream : std::uint64_t { Scheme = 0, PayloadA = 1, PayloadB = 2, Simulate = 3, Sampling = 4 };
std::uint64_t derived_seed(std::uint64_t seed, SeedStream stream);

/// "0,3" -> {0, 3}
std::vector<std::size_t> parse_index_list(const std::string& text);

/// Required parameters per scheme kind, for --help.
std::string scheme_help();

}  // namespace ccm::cli
