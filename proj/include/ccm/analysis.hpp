#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccm/matrix.hpp"
#include "ccm/pattern.hpp"
#include "ccm/scheme.hpp"

namespace ccm {

/// sigma_max / sigma_min over all min(rows, cols) singular values; +inf when
/// sigma_min falls below the rank cutoff. Throws DomainError for a zero matrix.
double condition_number(const Matrix& m);

/// Condition number of a recovery matrix: +inf unless it has full column rank.
double recovery_condition(const Matrix& m);

using PatternMode = CompletionPattern::Mode;

struct EnumerationOptions {
  PatternMode mode = PatternMode::Subset;
  std::uint64_t guard = 1'000'000;  // largest exhaustive enumeration
  /// When set, draw this many uniform random patterns instead of failing on
  /// enumerations larger than the guard.
  std::optional<std::uint64_t> samples;
  std::uint64_t seed = 0;
  bool keep_per_pattern = false;
};

struct PatternCondition {
  CompletionPattern pattern;
  double condition;
};

struct ConditionReport {
  PatternMode mode = PatternMode::Subset;
  std::size_t budget = 0;        // tau (workers) or tau' (task groups)
  double worst = 1.0;            // >= 1 or +inf
  CompletionPattern argmax;
  std::uint64_t patterns_total = 0;
  std::uint64_t patterns_evaluated = 0;
  bool sampled = false;
  std::string label;             // "exhaustive" or "sampled lower bound on worst case"
  std::vector<PatternCondition> per_pattern;
};

/// Patterns a budget admits: C(N, tau) in subset mode, or the number of
/// prefix count vectors summing to tau' (in units of plan.task_group).
std::uint64_t count_patterns(const EncodingPlan& plan, PatternMode mode,
                             std::size_t budget);

/// Pattern `index` in the canonical enumeration order (lexicographic).
CompletionPattern pattern_at(const EncodingPlan& plan, PatternMode mode,
                             std::size_t budget, std::uint64_t index);

/// Worst condition number over every pattern of the budget. Prefix budgets
/// count task groups, so a UDM worker's k-row block is one unit.
ConditionReport worst_case_condition(const EncodingPlan& plan, std::size_t budget,
                                     const EnumerationOptions& options = {});

struct ThresholdReport {
  PatternMode mode = PatternMode::Subset;
  std::size_t budget = 0;
  bool holds = false;
  std::optional<CompletionPattern> counterexample;  // lowest failing pattern
  std::optional<std::size_t> counterexample_rank;
  std::uint64_t patterns_checked = 0;
};

/// Every size-tau worker subset has full column rank.
ThresholdReport verify_threshold(const EncodingPlan& plan, std::size_t tau,
                                 std::uint64_t guard = 1'000'000);
/// Every prefix pattern totalling tau' task groups has full column rank.
ThresholdReport verify_threshold2(const EncodingPlan& plan, std::size_t tau2,
                                  std::uint64_t guard = 1'000'000);

struct LoadReport {
  std::vector<Rational> gamma_a;
  std::vector<Rational> gamma_b;
  /// Worker multiply-add count over the 2rtw cost of the whole product.
  std::vector<Rational> comp_fraction;
  /// Values a worker returns over the rw entries of the product.
  std::vector<Rational> comm_load;
};

/// Per-worker loads for A in R^{t x r} and B in R^{t x w} (w = columns of x
/// for matrix-vector kinds).
LoadReport loads(const EncodingPlan& plan, std::size_t r, std::size_t t,
                 std::size_t w);

}  // namespace ccm
