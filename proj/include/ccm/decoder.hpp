#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccm/matrix.hpp"
#include "ccm/pattern.hpp"
#include "ccm/scheme.hpp"

namespace ccm {

/// Observations x unknowns linear map from unknown blocks to received
/// results. May have zero rows (nothing received yet).
class RecoverySystem {
 public:
  RecoverySystem(std::size_t unknowns, std::vector<std::string> unknown_labels);

  void add_observation(std::span<const double> row, const CodedTask& label);

  std::size_t observation_count() const noexcept { return labels_.size(); }
  std::size_t unknown_count() const noexcept { return unknowns_; }
  double at(std::size_t obs, std::size_t unknown) const {
    return coefficients_[obs * unknowns_ + unknown];
  }
  std::span<const double> row(std::size_t obs) const {
    return std::span<const double>(coefficients_).subspan(obs * unknowns_,
                                                          unknowns_);
  }
  const std::vector<std::string>& unknown_labels() const { return unknown_labels_; }
  const std::vector<CodedTask>& observation_labels() const { return labels_; }

  /// Dense copy; throws DimensionError when there are no observations.
  Matrix matrix() const;
  std::size_t rank() const;
  bool decodable() const { return rank() == unknowns_; }

 private:
  std::size_t unknowns_;
  std::vector<std::string> unknown_labels_;
  std::vector<double> coefficients_;
  std::vector<CodedTask> labels_;
};

/// Singular values in descending order.
std::vector<double> singular_values(const Matrix& m);
/// Tolerance max(rows, cols) * sigma_max * 2^-52.
double rank_tolerance(std::span<const double> singular, std::size_t rows,
                      std::size_t cols);
std::size_t numerical_rank(const Matrix& m);

/// Rows of the tasks in `tasks` (flat indices) of `plan`.
RecoverySystem recovery_system_for_tasks(const EncodingPlan& plan,
                                         std::span<const std::size_t> tasks);
/// Recovery system of a completion pattern: Vandermonde (or confluent
/// Vandermonde) rows for polynomial kinds, rows of G for the others.
RecoverySystem build_recovery_system(const EncodingPlan& plan,
                                     const CompletionPattern& pattern);

/// Coefficients c_0..c_d of the unique degree-d polynomial through
/// (points[i], values[i]), computed from barycentric Lagrange weights.
std::vector<Matrix> interpolate(std::span<const double> points,
                                std::span<const Matrix> values);
std::vector<double> interpolate(std::span<const double> points,
                                std::span<const double> values);

struct HermiteNode {
  double point;
  std::size_t multiplicity;
};

/// Samples are node-major: for each node, u(z), u'(z), ... up to
/// multiplicity - 1, with derivatives in the ordinary sense (the j-th
/// derivative carries the j! factor). Degree defaults to sum(k_i) - 1.
std::vector<Matrix> hermite_interpolate(std::span<const HermiteNode> nodes,
                                        std::span<const Matrix> samples,
                                        std::optional<std::size_t> degree = {});
std::vector<double> hermite_interpolate(std::span<const HermiteNode> nodes,
                                        std::span<const double> samples,
                                        std::optional<std::size_t> degree = {});

/// Observation matrix of Hermite data: the row for (z, l) holds
/// C(k, l) l! z^(k-l) in column k.
Matrix confluent_vandermonde(std::span<const HermiteNode> nodes,
                             std::size_t degree);

/// Pivoted elimination. Square or tall full-column-rank systems.
std::vector<Matrix> solve_dense(const RecoverySystem& system,
                                std::span<const Matrix> observations);
std::vector<Matrix> solve_least_squares(const RecoverySystem& system,
                                        std::span<const Matrix> observations);

struct PeelStep {
  std::size_t equation;
  std::size_t unknown;
};

struct PeelResult {
  /// Present iff every unknown was resolved.
  std::optional<std::vector<Matrix>> solution;
  /// Resolution order, one step per resolved unknown.
  std::vector<PeelStep> steps;
  bool stuck() const { return !solution.has_value(); }
};

/// Structural peeling over the nonzero pattern of a system. Equations are
/// added one at a time; after each addition every equation left with a
/// single unresolved unknown is consumed, lowest equation index first.
class Peeler {
 public:
  explicit Peeler(std::size_t unknowns);

  /// Returns the number of unknowns resolved so far.
  std::size_t add_equation(std::span<const double> row);
  std::size_t resolved() const noexcept { return resolved_count_; }
  bool complete() const noexcept { return resolved_count_ == unknowns_; }
  const std::vector<PeelStep>& steps() const noexcept { return steps_; }

 private:
  void drain();

  std::size_t unknowns_;
  std::size_t resolved_count_ = 0;
  std::vector<std::vector<std::size_t>> equation_vars_;
  std::vector<std::vector<std::size_t>> var_equations_;
  std::vector<std::size_t> degree_;
  std::vector<bool> resolved_;
  std::vector<std::size_t> ready_;  // min-heap of equation indices
  std::vector<PeelStep> steps_;
};

PeelResult peel(const RecoverySystem& system, std::span<const Matrix> observations);

/// Number of stream symbols a fountain plan needs before peeling resolves
/// every block. Throws OverheadExceeded if the stream runs out first.
std::size_t fountain_symbols_to_peel(const EncodingPlan& plan);

struct DecodeOutcome {
  Matrix value;
  DecodeStrategy strategy;
  std::size_t observations_used;
};

struct UnknownSolution {
  std::vector<Matrix> blocks;  // plan.unknowns order
  DecodeStrategy strategy;     // what actually produced the blocks
  std::size_t observations_used;
};

/// Solves for every unknown, interference terms included.
UnknownSolution decode_unknowns(const EncodingPlan& plan,
                                std::span<const TaskResult> results);

/// Assembled A^T B (or A^T x) from any recoverable set of task results.
Matrix decode(const EncodingPlan& plan, std::span<const TaskResult> results);
DecodeOutcome decode_detailed(const EncodingPlan& plan,
                              std::span<const TaskResult> results);

}  // namespace ccm
