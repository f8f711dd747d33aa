#include "ccm/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "ccm/decoder.hpp"
#include "ccm/error.hpp"
#include "ccm/parallel.hpp"
#include "ccm/rng.hpp"

namespace ccm {

namespace {

using EMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::string str(std::uint64_t v) { return std::to_string(v); }

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

double condition_from_singular(const Eigen::VectorXd& s, std::size_t rows,
                               std::size_t cols) {
  const double top = s(0);
  if (top == 0.0) throw DomainError("condition number of a zero matrix");
  const double tol = static_cast<double>(std::max(rows, cols)) * top *
                     std::numeric_limits<double>::epsilon();
  const double bottom = s(s.size() - 1);
  if (!(bottom > tol)) return std::numeric_limits<double>::infinity();
  return top / bottom;
}

/// Units each worker offers in prefix mode.
std::vector<std::size_t> unit_caps(const EncodingPlan& plan) {
  std::vector<std::size_t> caps(plan.workers());
  for (std::size_t w = 0; w < plan.workers(); ++w)
    caps[w] = plan.tasks_of(w) / plan.task_group;
  return caps;
}

/// ways[w][s]: prefix count vectors for workers w.. summing to s.
std::vector<std::vector<std::uint64_t>> prefix_ways(
    const std::vector<std::size_t>& caps, std::size_t budget) {
  const std::size_t n = caps.size();
  std::vector<std::vector<std::uint64_t>> ways(
      n + 1, std::vector<std::uint64_t>(budget + 1, 0));
  ways[n][0] = 1;
  for (std::size_t w = n; w-- > 0;)
    for (std::size_t s = 0; s <= budget; ++s)
      for (std::size_t c = 0; c <= std::min(caps[w], s); ++c)
        ways[w][s] = sat_add(ways[w][s], ways[w + 1][s - c]);
  return ways;
}

std::vector<std::vector<std::uint64_t>> binomials(std::size_t n) {
  std::vector<std::vector<std::uint64_t>> c(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) {
    c[i][0] = 1;
    for (std::size_t j = 1; j <= i; ++j) c[i][j] = sat_add(c[i - 1][j - 1], c[i - 1][j]);
  }
  return c;
}

/// Shared enumeration state: counts plus an index -> pattern decoder.
class Enumerator {
 public:
  Enumerator(const EncodingPlan& plan, PatternMode mode, std::size_t budget)
      : plan_(plan), mode_(mode), budget_(budget) {
    const std::size_t n = plan.workers();
    if (mode == PatternMode::Subset) {
      if (budget > n)
        throw PatternError("budget " + str(budget) + " exceeds the " + str(n) +
                           " workers");
      binom_ = binomials(n);
      total_ = binom_[n][budget];
    } else {
      caps_ = unit_caps(plan);
      ways_ = prefix_ways(caps_, budget);
      total_ = ways_[0][budget];
      if (total_ == 0)
        throw PatternError("no prefix pattern totals " + str(budget) + " units");
    }
  }

  std::uint64_t total() const { return total_; }

  CompletionPattern at(std::uint64_t index) const {
    const std::size_t n = plan_.workers();
    if (index >= total_) throw PatternError("pattern index out of range");
    if (mode_ == PatternMode::Subset) {
      std::vector<std::size_t> chosen;
      std::size_t left = budget_;
      for (std::size_t w = 0; w < n && left > 0; ++w) {
        // Subsets that include w come first.
        const std::uint64_t with = binom_[n - w - 1][left - 1];
        if (index < with) {
          chosen.push_back(w);
          --left;
        } else {
          index -= with;
        }
      }
      return CompletionPattern::subset(std::move(chosen));
    }
    std::vector<std::size_t> counts(n, 0);
    std::size_t left = budget_;
    for (std::size_t w = 0; w < n; ++w) {
      for (std::size_t c = 0; c <= std::min(caps_[w], left); ++c) {
        const std::uint64_t block = ways_[w + 1][left - c];
        if (index < block) {
          counts[w] = c;
          left -= c;
          break;
        }
        index -= block;
      }
    }
    return CompletionPattern::prefix(std::move(counts));
  }

  /// Flat task indices of a pattern, with prefix counts scaled to tasks.
  std::vector<std::size_t> tasks(const CompletionPattern& p) const {
    if (mode_ == PatternMode::Subset) return completed_tasks(plan_, p);
    std::vector<std::size_t> counts = p.counts;
    for (auto& c : counts) c *= plan_.task_group;
    return completed_tasks(plan_, CompletionPattern::prefix(std::move(counts)));
  }

  Matrix system(const CompletionPattern& p) const {
    const auto t = tasks(p);
    const std::size_t u = plan_.unknown_count();
    if (t.empty()) return Matrix(1, u);  // zero row: rank 0
    Matrix m(t.size(), u);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto row = plan_.task_rows.row(t[i]);
      std::copy(row.begin(), row.end(), m.data().begin() + i * u);
    }
    return m;
  }

 private:
  const EncodingPlan& plan_;
  PatternMode mode_;
  std::size_t budget_;
  std::uint64_t total_ = 0;
  std::vector<std::vector<std::uint64_t>> binom_;
  std::vector<std::size_t> caps_;
  std::vector<std::vector<std::uint64_t>> ways_;
};

ThresholdReport verify(const EncodingPlan& plan, PatternMode mode,
                       std::size_t budget, std::uint64_t guard) {
  const Enumerator en(plan, mode, budget);
  if (en.total() > guard) {
    throw EnumerationTooLarge(str(en.total()) + " patterns exceed the guard of " +
                                  str(guard),
                              static_cast<double>(en.total()));
  }
  const std::size_t unknowns = plan.unknown_count();
  std::atomic<std::uint64_t> first_fail{kSaturated};
  parallel_for(en.total(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (i >= first_fail.load(std::memory_order_relaxed)) return;
      const Matrix m = en.system(en.at(i));
      if (m.rows() < unknowns || numerical_rank(m) < unknowns) {
        std::uint64_t seen = first_fail.load();
        while (i < seen && !first_fail.compare_exchange_weak(seen, i)) {
        }
        return;
      }
    }
  });
  ThresholdReport report;
  report.mode = mode;
  report.budget = budget;
  report.patterns_checked = en.total();
  report.holds = first_fail.load() == kSaturated;
  if (!report.holds) {
    const auto p = en.at(first_fail.load());
    const Matrix m = en.system(p);
    report.counterexample = p;
    report.counterexample_rank = en.tasks(p).empty() ? 0 : numerical_rank(m);
  }
  return report;
}

}  // namespace

double condition_number(const Matrix& m) {
  Eigen::Map<const EMatrix> view(m.data().data(), m.rows(), m.cols());
  // Jacobi keeps tiny singular values relatively accurate; past 64 columns
  // divide and conquer is several times faster.
  if (m.cols() <= 64) {
    Eigen::JacobiSVD<EMatrix> svd(view);
    return condition_from_singular(svd.singularValues(), m.rows(), m.cols());
  }
  Eigen::BDCSVD<EMatrix> svd(view);
  return condition_from_singular(svd.singularValues(), m.rows(), m.cols());
}

double recovery_condition(const Matrix& m) {
  if (m.rows() < m.cols()) return std::numeric_limits<double>::infinity();
  bool zero = std::all_of(m.data().begin(), m.data().end(),
                          [](double v) { return v == 0.0; });
  if (zero) return std::numeric_limits<double>::infinity();
  return condition_number(m);
}

std::uint64_t count_patterns(const EncodingPlan& plan, PatternMode mode,
                             std::size_t budget) {
  return Enumerator(plan, mode, budget).total();
}

CompletionPattern pattern_at(const EncodingPlan& plan, PatternMode mode,
                             std::size_t budget, std::uint64_t index) {
  return Enumerator(plan, mode, budget).at(index);
}

ConditionReport worst_case_condition(const EncodingPlan& plan, std::size_t budget,
                                     const EnumerationOptions& options) {
  const Enumerator en(plan, options.mode, budget);
  ConditionReport report;
  report.mode = options.mode;
  report.budget = budget;
  report.patterns_total = en.total();

  std::vector<std::uint64_t> indices;
  if (en.total() <= options.guard) {
    report.label = "exhaustive";
  } else if (options.samples) {
    if (en.total() == kSaturated)
      throw EnumerationTooLarge("pattern count overflows 64 bits",
                                std::numeric_limits<double>::infinity());
    report.sampled = true;
    report.label = "sampled lower bound on worst case";
    SplitMix64 rng(split_seed(options.seed, 0));
    indices.reserve(*options.samples);
    for (std::uint64_t s = 0; s < *options.samples; ++s)
      indices.push_back(rng.below(en.total()));
  } else {
    throw EnumerationTooLarge(
        str(en.total()) + " patterns exceed the guard of " + str(options.guard) +
            "; raise the guard or enable sampling",
        static_cast<double>(en.total()));
  }
  const std::uint64_t count = report.sampled ? indices.size() : en.total();
  std::vector<double> cond(count);
  parallel_for(count, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint64_t idx = report.sampled ? indices[i] : i;
      cond[i] = recovery_condition(en.system(en.at(idx)));
    }
  });
  // First maximum in enumeration order keeps the argmax schedule-independent.
  std::size_t best = 0;
  for (std::size_t i = 1; i < count; ++i)
    if (cond[i] > cond[best]) best = i;
  report.patterns_evaluated = count;
  report.worst = cond[best];
  report.argmax = en.at(report.sampled ? indices[best] : best);
  if (options.keep_per_pattern) {
    report.per_pattern.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
      report.per_pattern.push_back({en.at(report.sampled ? indices[i] : i), cond[i]});
  }
  return report;
}

ThresholdReport verify_threshold(const EncodingPlan& plan, std::size_t tau,
                                 std::uint64_t guard) {
  return verify(plan, PatternMode::Subset, tau, guard);
}

ThresholdReport verify_threshold2(const EncodingPlan& plan, std::size_t tau2,
                                  std::uint64_t guard) {
  return verify(plan, PatternMode::Prefix, tau2, guard);
}

LoadReport loads(const EncodingPlan& plan, std::size_t r, std::size_t t,
                 std::size_t w) {
  const std::size_t p = plan.params.p;
  const bool matvec = is_matvec(plan.params.kind);
  if (r == 0 || t == 0 || w == 0) throw DimensionError("loads: dimensions must be >= 1");
  if (r % plan.a_col_blocks != 0)
    throw DimensionError("loads: r=" + str(r) + " is not divisible by " +
                         str(plan.a_col_blocks) + " column blocks of A");
  if (t % p != 0)
    throw DimensionError("loads: t=" + str(t) + " is not divisible by p=" + str(p));
  if (!matvec && w % plan.b_col_blocks != 0)
    throw DimensionError("loads: w=" + str(w) + " is not divisible by " +
                         str(plan.b_col_blocks) + " column blocks of B");
  const auto block_r = static_cast<std::int64_t>(r / plan.a_col_blocks);
  const auto block_t = static_cast<std::int64_t>(t / p);
  const auto block_w = static_cast<std::int64_t>(matvec ? w : w / plan.b_col_blocks);
  const auto total_values = static_cast<std::int64_t>(r) * static_cast<std::int64_t>(w);
  const std::int64_t cost = 2 * total_values * static_cast<std::int64_t>(t);

  LoadReport report;
  report.gamma_a = plan.gamma_a;
  report.gamma_b = plan.gamma_b;
  for (std::size_t k = 0; k < plan.workers(); ++k) {
    const auto tasks = static_cast<std::int64_t>(plan.tasks_of(k));
    report.comp_fraction.emplace_back(tasks * 2 * block_r * block_t * block_w, cost);
    report.comm_load.emplace_back(tasks * block_r * block_w, total_values);
  }
  return report;
}

}  // namespace ccm
