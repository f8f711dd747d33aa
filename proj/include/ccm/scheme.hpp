#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "ccm/matrix.hpp"

namespace ccm {

using Rational = boost::rational<std::int64_t>;

enum class SchemeKind {
  Repetition,
  MdsMatvec,
  DerivativeMatvec,
  UdmMatvec,
  ConvMatvec,
  FountainMatvec,
  PolyMatmul,
  MatDot,
  Entangled,
};

std::string_view to_string(SchemeKind kind);
SchemeKind scheme_kind_from_string(std::string_view name);
/// Every kind, in declaration order.
std::span<const SchemeKind> all_scheme_kinds();
/// True for the kinds that multiply A^T by a fixed right-hand side x.
bool is_matvec(SchemeKind kind);

enum class GeneratorKind { Vandermonde, Random };
enum class ConvMode { Ones, Random };

struct UdmOptions {
  std::size_t field_degree = 3;  // k: GF(q^k), blocks are k x k
  std::size_t field_base = 2;    // q: 2 or 3
  std::size_t poly_rows = 3;     // block rows of G (message polynomial length)
  bool derivative = false;       // second block per worker: first Hasse derivative
};

struct ConvOptions {
  std::size_t inputs = 2;          // message polynomials (worker threshold)
  std::size_t blocks_per_input = 0;  // 0: m / inputs
  ConvMode mode = ConvMode::Ones;
};

/// Probability of each degree 1..m; probs[d - 1] is P(degree = d).
struct DegreeDistribution {
  std::vector<double> probs;

  static DegreeDistribution robust_soliton(std::size_t m, double c,
                                           double delta);
  static DegreeDistribution point_mass(std::size_t m, std::size_t degree);
  void validate(std::size_t m) const;
};

struct FountainOptions {
  std::optional<DegreeDistribution> degree_dist;  // default robust soliton
  double soliton_c = 0.03;
  double soliton_delta = 0.5;
  double max_overhead = 2.0;  // stream length = ceil(m * max_overhead)
};

struct SchemeParams {
  SchemeKind kind = SchemeKind::PolyMatmul;
  std::size_t p = 1;
  std::size_t m = 1;
  std::size_t n = 1;
  std::size_t workers = 1;
  std::vector<double> eval_points;  // empty: default grid
  std::uint64_t seed = 0;
  GeneratorKind generator = GeneratorKind::Vandermonde;
  UdmOptions udm;
  ConvOptions conv;
  FountainOptions fountain;
};

/// z_i = -1 + 2i/N for i = 0..N-1: N uniformly spaced points in [-1, 1).
std::vector<double> default_eval_points(std::size_t workers);

struct CodedTask {
  std::size_t worker = 0;
  std::size_t seq = 0;
  std::size_t a_index = 0;
  std::optional<std::size_t> b_index;  // empty: the shared right-hand side x

  friend bool operator==(const CodedTask&, const CodedTask&) = default;
};

struct TaskResult {
  CodedTask task;
  Matrix value;
};

/// One unknown of the recovery system: a sum of products A_a^T B_b over
/// source blocks (b is ignored for matrix-vector kinds).
struct Unknown {
  struct Term {
    std::size_t a_block;
    std::size_t b_block;
  };
  std::string label;
  std::vector<Term> terms;
};

/// Output block (row, col) of A^T B equals unknowns[unknown].
struct TargetBlock {
  std::size_t row;
  std::size_t col;
  std::size_t unknown;
};

/// Evaluation node of a polynomial task: the task result is the
/// `derivative`-th derivative of the product polynomial at `point`.
struct TaskNode {
  double point;
  std::size_t derivative;
};

enum class DecodeStrategy {
  Interpolation,
  Hermite,
  Peeling,
  Dense,
  LeastSquares,
};

std::string_view to_string(DecodeStrategy strategy);

/// Everything the master, the workers and the analysis need to know about a
/// coding scheme. Plans are immutable once built.
struct EncodingPlan {
  SchemeParams params;
  /// Number of column blocks of A (the m of the scheme) and of B.
  std::size_t a_col_blocks = 1;
  std::size_t b_col_blocks = 1;
  /// coded-A blocks x (p * a_col_blocks) source blocks, row-major source order.
  Matrix coeff_a{1, 1};
  std::optional<Matrix> coeff_b;
  std::vector<std::vector<std::size_t>> stored_a;  // per worker
  std::vector<std::vector<std::size_t>> stored_b;
  std::vector<std::vector<CodedTask>> assignments;
  std::vector<Rational> gamma_a;  // per worker
  std::vector<Rational> gamma_b;  // per worker, empty for matrix-vector kinds
  std::vector<Unknown> unknowns;
  /// total_tasks x unknowns: a task's result is sum_u row[u] * unknown_u.
  Matrix task_rows{1, 1};
  std::vector<TargetBlock> targets;
  std::size_t target_grid_rows = 1;
  std::size_t target_grid_cols = 1;
  std::vector<TaskNode> task_nodes;  // per task for polynomial kinds
  DecodeStrategy strategy = DecodeStrategy::Dense;
  /// Recovery threshold in workers, when the scheme guarantees one.
  std::optional<std::size_t> threshold;
  /// Recovery threshold(II) in task groups, when guaranteed.
  std::optional<std::size_t> threshold2;
  /// Tasks per prefix unit (k for embedded UDM blocks, otherwise 1).
  std::size_t task_group = 1;

  std::size_t workers() const { return assignments.size(); }
  std::size_t total_tasks() const;
  std::size_t tasks_of(std::size_t worker) const {
    return assignments.at(worker).size();
  }
  /// Flat index of a task, in (worker, seq) order.
  std::size_t task_index(std::size_t worker, std::size_t seq) const;
  const CodedTask& task_at(std::size_t flat) const;
  std::size_t unknown_count() const { return unknowns.size(); }
  Rational max_gamma_a() const;
  Rational max_gamma_b() const;

 private:
  friend EncodingPlan finalize_plan(EncodingPlan plan);
  std::vector<std::size_t> offsets_;
};

/// Validates the structural invariants and fills the task index.
EncodingPlan finalize_plan(EncodingPlan plan);

EncodingPlan build_repetition(std::size_t workers = 3);
EncodingPlan build_mds_matvec(std::size_t m, std::size_t workers,
                              std::vector<double> eval_points = {});
EncodingPlan build_mds_matvec_random(std::size_t m, std::size_t workers,
                                     std::uint64_t seed);
EncodingPlan build_derivative_matvec(std::size_t m, std::size_t workers,
                                     std::vector<double> eval_points = {});
EncodingPlan build_udm_matvec(const UdmOptions& options = {},
                              std::size_t workers = 4);
EncodingPlan build_conv_matvec(std::size_t m, std::size_t workers = 4,
                               const ConvOptions& options = {},
                               std::uint64_t seed = 0);
EncodingPlan build_fountain_matvec(std::size_t m,
                                   const FountainOptions& options = {},
                                   std::uint64_t seed = 0,
                                   std::size_t workers = 1);
EncodingPlan build_poly_matmul(std::size_t m, std::size_t n,
                               std::size_t workers,
                               std::vector<double> eval_points = {});
EncodingPlan build_matdot(std::size_t p, std::size_t workers,
                          std::vector<double> eval_points = {});
EncodingPlan build_entangled(std::size_t p, std::size_t m, std::size_t n,
                             std::size_t workers,
                             std::vector<double> eval_points = {});

/// Dispatches on params.kind.
EncodingPlan build_plan(const SchemeParams& params);

/// Companion matrix of the configured primitive polynomial of GF(q^k).
Matrix udm_companion(std::size_t field_degree, std::size_t field_base = 2);
/// C^e with entries reduced modulo `base`.
Matrix field_power(const Matrix& c, std::size_t e, std::size_t base);
Matrix binary_power(const Matrix& c, std::size_t e);

/// Coefficient rows (over A blocks) of the coded symbol with stream index
/// `index` of a fountain plan; reproducible from (seed, index) alone.
std::vector<std::size_t> fountain_combination(const DegreeDistribution& dist,
                                              std::size_t m, std::uint64_t seed,
                                              std::size_t index);

struct WorkerPayload {
  std::size_t worker = 0;
  std::map<std::size_t, Matrix> a_blocks;
  std::map<std::size_t, Matrix> b_blocks;
  std::optional<Matrix> x;
};

/// Coded blocks for every worker. `b` is B for matrix-matrix kinds and the
/// shared right-hand side x for matrix-vector kinds.
std::vector<WorkerPayload> encode(const EncodingPlan& plan, const Matrix& a,
                                  const Matrix& b);

/// Results in task order; result k is the exact product of task k.
std::vector<TaskResult> worker_compute(const WorkerPayload& payload,
                                       std::span<const CodedTask> order);

/// Computes unknown u directly from the source blocks (test and demo oracle).
Matrix evaluate_unknown(const EncodingPlan& plan, const BlockGrid& a_blocks,
                        const BlockGrid& b_blocks, std::size_t unknown);

}  // namespace ccm
