#pragma once

#include "config.hpp"

namespace ccm::cli {

// Exit codes. Library errors print one JSON object on stderr.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNotMet = 3;  // verify found a counterexample

int run_multiply(const ExperimentConfig& cfg);
int run_verify(const ExperimentConfig& cfg);
int run_cond(const ExperimentConfig& cfg);
int run_cond_presets(const ExperimentConfig& cfg);
int run_simulate(const ExperimentConfig& cfg);
int run_demo(const ExperimentConfig& cfg);

/// {"error": {"kind": ..., "message": ...}}
std::string error_json(std::string_view kind, std::string_view message);

}  // namespace ccm::cli
