#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ccm/scheme.hpp"

namespace ccm {

/// Which computations the master has received: whole workers (subset mode)
/// or the first c_i tasks of each worker (prefix mode).
struct CompletionPattern {
  enum class Mode { Subset, Prefix };

  Mode mode = Mode::Subset;
  std::vector<std::size_t> workers;  // subset mode, ascending
  std::vector<std::size_t> counts;   // prefix mode, one entry per worker

  static CompletionPattern subset(std::vector<std::size_t> workers);
  static CompletionPattern prefix(std::vector<std::size_t> counts);
  static CompletionPattern everything(const EncodingPlan& plan);

  friend bool operator==(const CompletionPattern&,
                         const CompletionPattern&) = default;
};

/// Flat task indices covered by the pattern, ascending. Throws PatternError
/// when the pattern names workers or tasks the plan does not have.
std::vector<std::size_t> completed_tasks(const EncodingPlan& plan,
                                         const CompletionPattern& pattern);

/// Per-worker completed-task counts implied by the pattern.
std::vector<std::size_t> completed_counts(const EncodingPlan& plan,
                                          const CompletionPattern& pattern);

std::string describe(const CompletionPattern& pattern);

}  // namespace ccm
