#include "ccm/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>

#include <Eigen/Dense>

#include "ccm/error.hpp"

namespace ccm {

namespace {

using EMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::string str(std::size_t v) { return std::to_string(v); }

EMatrix to_eigen(const Matrix& m) {
  EMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

void require_same_shape(std::span<const Matrix> values) {
  for (const Matrix& v : values)
    if (!v.same_shape(values.front()))
      throw DimensionError("observation blocks differ in shape");
}

/// Each observation flattened into one row.
EMatrix stack_rows(std::span<const Matrix> values) {
  require_same_shape(values);
  const std::size_t len = values.front().rows() * values.front().cols();
  EMatrix out(values.size(), len);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto data = values[i].data();
    for (std::size_t k = 0; k < len; ++k) out(i, k) = data[k];
  }
  return out;
}

std::vector<Matrix> unstack_rows(const EMatrix& x, std::size_t rows,
                                 std::size_t cols) {
  std::vector<Matrix> out;
  out.reserve(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Matrix m(rows, cols);
    auto data = m.data();
    for (std::size_t k = 0; k < rows * cols; ++k) data[k] = x(i, k);
    out.push_back(std::move(m));
  }
  return out;
}

/// out[k] = sum_i basis(k, i) * values[i]
std::vector<Matrix> apply_basis(const EMatrix& basis, std::span<const Matrix> values) {
  require_same_shape(values);
  std::vector<Matrix> out;
  out.reserve(basis.rows());
  for (Eigen::Index k = 0; k < basis.rows(); ++k) {
    Matrix acc(values.front().rows(), values.front().cols());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double c = basis(k, static_cast<Eigen::Index>(i));
      if (c != 0.0) acc.add_scaled(values[i], c);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

std::vector<double> apply_basis(const EMatrix& basis, std::span<const double> values) {
  std::vector<double> out(basis.rows(), 0.0);
  for (Eigen::Index k = 0; k < basis.rows(); ++k)
    for (std::size_t i = 0; i < values.size(); ++i)
      out[k] += basis(k, static_cast<Eigen::Index>(i)) * values[i];
  return out;
}

void require_distinct(std::vector<double> points, const char* what) {
  std::sort(points.begin(), points.end());
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i] == points[i - 1])
      throw SingularError(std::string(what) + ": duplicate point " +
                              std::to_string(points[i]),
                          points.size() - 1);
  }
}

/// Monomial coefficients of the Lagrange basis: column i holds the
/// coefficients of w_i * prod_{j != i} (z - z_j).
EMatrix lagrange_basis(std::span<const double> z) {
  const std::size_t n = z.size();
  if (n == 0) throw DimensionError("interpolate: no points");
  require_distinct({z.begin(), z.end()}, "interpolate");
  // Master polynomial l(z) = prod (z - z_j), ascending coefficients.
  std::vector<double> master{1.0};
  for (double zj : z) {
    std::vector<double> next(master.size() + 1, 0.0);
    for (std::size_t k = 0; k < master.size(); ++k) {
      next[k + 1] += master[k];
      next[k] -= zj * master[k];
    }
    master = std::move(next);
  }
  EMatrix basis(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double w = 1.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) w /= (z[i] - z[j]);
    // Synthetic division of l(z) by (z - z_i).
    std::vector<double> q(n, 0.0);
    double carry = 0.0;
    for (std::size_t k = n; k-- > 0;) {
      carry = master[k + 1] + z[i] * carry;
      q[k] = carry;
    }
    for (std::size_t k = 0; k < n; ++k) basis(k, i) = w * q[k];
  }
  return basis;
}

/// Maps node-major Hermite samples to monomial coefficients, through
/// confluent divided differences and the Newton form.
EMatrix hermite_basis(std::span<const HermiteNode> nodes,
                      std::optional<std::size_t> degree) {
  std::size_t total = 0;
  std::vector<double> points;
  for (const auto& node : nodes) {
    if (node.multiplicity == 0)
      throw DimensionError("hermite_interpolate: zero multiplicity");
    total += node.multiplicity;
    points.push_back(node.point);
  }
  if (total == 0) throw UnderdeterminedError("hermite_interpolate: no samples");
  const std::size_t d = degree.value_or(total - 1);
  if (total < d + 1) {
    throw UnderdeterminedError("hermite_interpolate: " + str(total) +
                               " samples cannot fix a degree-" + str(d) +
                               " polynomial");
  }
  if (total > d + 1) {
    throw DimensionError("hermite_interpolate: " + str(total) +
                         " samples overdetermine a degree-" + str(d) +
                         " polynomial");
  }
  require_distinct(points, "hermite_interpolate");

  // Expanded node list, and for each entry the node it came from and the
  // index of its first sample.
  std::vector<double> x;
  std::vector<std::size_t> first;
  std::size_t offset = 0;
  for (const auto& node : nodes) {
    for (std::size_t l = 0; l < node.multiplicity; ++l) {
      x.push_back(node.point);
      first.push_back(offset);
    }
    offset += node.multiplicity;
  }
  const std::size_t n = total;
  std::vector<double> factorial(n, 1.0);
  for (std::size_t j = 1; j < n; ++j) factorial[j] = factorial[j - 1] * j;

  // table[i] holds f[x_i..x_{i+level}] as a linear form over the samples.
  std::vector<EMatrix> table(n, EMatrix::Zero(1, n));
  for (std::size_t i = 0; i < n; ++i) table[i](0, first[i]) = 1.0;
  std::vector<Eigen::RowVectorXd> newton(n);
  newton[0] = table[0].row(0);
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      const double span = x[i + level] - x[i];
      if (span == 0.0) {
        // Repeated node: f^(level)(x_i) / level!
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
        row(first[i] + level) = 1.0 / factorial[level];
        table[i].row(0) = row;
      } else {
        table[i].row(0) = (table[i + 1].row(0) - table[i].row(0)) / span;
      }
    }
    newton[level] = table[0].row(0);
  }

  // Newton form to monomial form by nested multiplication.
  EMatrix coeff = EMatrix::Zero(n, n);
  for (std::size_t level = n; level-- > 0;) {
    // coeff <- coeff * (z - x_level) + newton[level]
    EMatrix shifted = EMatrix::Zero(n, n);
    for (std::size_t k = 0; k + 1 < n; ++k) shifted.row(k + 1) = coeff.row(k);
    shifted -= x[level] * coeff;
    shifted.row(0) += newton[level];
    coeff = std::move(shifted);
  }
  return coeff;
}

EMatrix system_matrix(const RecoverySystem& system) {
  return to_eigen(system.matrix());
}

void check_observations(const RecoverySystem& system,
                        std::span<const Matrix> observations) {
  if (observations.size() != system.observation_count()) {
    throw DimensionError("system has " + str(system.observation_count()) +
                         " rows but " + str(observations.size()) +
                         " observations were given");
  }
  if (observations.empty())
    throw SingularError("no observations", 0);
}

std::size_t rank_of(const EMatrix& m) {
  Eigen::JacobiSVD<EMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0;
  const double tol = static_cast<double>(std::max(m.rows(), m.cols())) * s(0) *
                     std::numeric_limits<double>::epsilon();
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++r;
  return r;
}

}  // namespace

RecoverySystem::RecoverySystem(std::size_t unknowns,
                               std::vector<std::string> unknown_labels)
    : unknowns_(unknowns), unknown_labels_(std::move(unknown_labels)) {
  if (unknowns == 0) throw DimensionError("recovery system needs unknowns");
  if (unknown_labels_.size() != unknowns)
    throw DimensionError("one label per unknown required");
}

void RecoverySystem::add_observation(std::span<const double> row,
                                     const CodedTask& label) {
  if (row.size() != unknowns_)
    throw DimensionError("observation row has " + str(row.size()) +
                         " entries, system has " + str(unknowns_) + " unknowns");
  coefficients_.insert(coefficients_.end(), row.begin(), row.end());
  labels_.push_back(label);
}

Matrix RecoverySystem::matrix() const {
  if (labels_.empty()) throw DimensionError("recovery system has no observations");
  Matrix m(labels_.size(), unknowns_);
  std::copy(coefficients_.begin(), coefficients_.end(), m.data().begin());
  return m;
}

std::size_t RecoverySystem::rank() const {
  if (labels_.empty()) return 0;
  return numerical_rank(matrix());
}

std::vector<double> singular_values(const Matrix& m) {
  Eigen::JacobiSVD<EMatrix> svd(to_eigen(m));
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

double rank_tolerance(std::span<const double> singular, std::size_t rows,
                      std::size_t cols) {
  if (singular.empty()) return 0.0;
  return static_cast<double>(std::max(rows, cols)) * singular.front() *
         std::numeric_limits<double>::epsilon();
}

std::size_t numerical_rank(const Matrix& m) {
  const auto s = singular_values(m);
  const double tol = rank_tolerance(s, m.rows(), m.cols());
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [tol](double v) { return v > tol; }));
}

RecoverySystem recovery_system_for_tasks(const EncodingPlan& plan,
                                         std::span<const std::size_t> tasks) {
  std::vector<std::string> labels;
  labels.reserve(plan.unknowns.size());
  for (const auto& u : plan.unknowns) labels.push_back(u.label);
  RecoverySystem system(plan.unknown_count(), std::move(labels));
  for (std::size_t t : tasks) {
    if (t >= plan.total_tasks())
      throw PatternError("task " + str(t) + " is not part of the plan");
    system.add_observation(plan.task_rows.row(t), plan.task_at(t));
  }
  return system;
}

RecoverySystem build_recovery_system(const EncodingPlan& plan,
                                     const CompletionPattern& pattern) {
  const auto tasks = completed_tasks(plan, pattern);
  return recovery_system_for_tasks(plan, tasks);
}

std::vector<Matrix> interpolate(std::span<const double> points,
                                std::span<const Matrix> values) {
  if (points.size() != values.size())
    throw DimensionError("interpolate: one value per point required");
  return apply_basis(lagrange_basis(points), values);
}

std::vector<double> interpolate(std::span<const double> points,
                                std::span<const double> values) {
  if (points.size() != values.size())
    throw DimensionError("interpolate: one value per point required");
  return apply_basis(lagrange_basis(points), values);
}

std::vector<Matrix> hermite_interpolate(std::span<const HermiteNode> nodes,
                                        std::span<const Matrix> samples,
                                        std::optional<std::size_t> degree) {
  const EMatrix basis = hermite_basis(nodes, degree);
  if (static_cast<std::size_t>(basis.cols()) != samples.size())
    throw DimensionError("hermite_interpolate: sample count does not match multiplicities");
  return apply_basis(basis, samples);
}

std::vector<double> hermite_interpolate(std::span<const HermiteNode> nodes,
                                        std::span<const double> samples,
                                        std::optional<std::size_t> degree) {
  const EMatrix basis = hermite_basis(nodes, degree);
  if (static_cast<std::size_t>(basis.cols()) != samples.size())
    throw DimensionError("hermite_interpolate: sample count does not match multiplicities");
  return apply_basis(basis, samples);
}

Matrix confluent_vandermonde(std::span<const HermiteNode> nodes,
                             std::size_t degree) {
  std::size_t rows = 0;
  for (const auto& node : nodes) rows += node.multiplicity;
  if (rows == 0) throw DimensionError("confluent_vandermonde: no rows");
  Matrix out(rows, degree + 1);
  std::size_t r = 0;
  for (const auto& node : nodes) {
    for (std::size_t l = 0; l < node.multiplicity; ++l, ++r) {
      for (std::size_t k = l; k <= degree; ++k) {
        // k! / (k - l)! z^(k - l) = C(k, l) l! z^(k - l)
        double falling = 1.0;
        for (std::size_t f = 0; f < l; ++f) falling *= static_cast<double>(k - f);
        out(r, k) = falling * std::pow(node.point, static_cast<double>(k - l));
      }
    }
  }
  return out;
}

std::vector<Matrix> solve_dense(const RecoverySystem& system,
                                std::span<const Matrix> observations) {
  check_observations(system, observations);
  const EMatrix m = system_matrix(system);
  const std::size_t rank = rank_of(m);
  if (rank < system.unknown_count()) {
    throw SingularError("system rank " + str(rank) + " < " +
                            str(system.unknown_count()) + " unknowns",
                        rank);
  }
  Eigen::FullPivLU<EMatrix> lu(m);
  const EMatrix x = lu.solve(stack_rows(observations));
  return unstack_rows(x, observations.front().rows(), observations.front().cols());
}

std::vector<Matrix> solve_least_squares(const RecoverySystem& system,
                                        std::span<const Matrix> observations) {
  check_observations(system, observations);
  const EMatrix m = system_matrix(system);
  const std::size_t rank = rank_of(m);
  if (rank < system.unknown_count()) {
    throw SingularError("system rank " + str(rank) + " < " +
                            str(system.unknown_count()) + " unknowns",
                        rank);
  }
  Eigen::ColPivHouseholderQR<EMatrix> qr(m);
  const EMatrix x = qr.solve(stack_rows(observations));
  return unstack_rows(x, observations.front().rows(), observations.front().cols());
}

Peeler::Peeler(std::size_t unknowns)
    : unknowns_(unknowns), var_equations_(unknowns), resolved_(unknowns, false) {}

std::size_t Peeler::add_equation(std::span<const double> row) {
  if (row.size() != unknowns_) throw DimensionError("peel: row length mismatch");
  const std::size_t e = equation_vars_.size();
  std::vector<std::size_t> vars;
  std::size_t open = 0;
  for (std::size_t u = 0; u < unknowns_; ++u) {
    if (row[u] == 0.0) continue;
    vars.push_back(u);
    var_equations_[u].push_back(e);
    if (!resolved_[u]) ++open;
  }
  equation_vars_.push_back(std::move(vars));
  degree_.push_back(open);
  if (open == 1) {
    ready_.push_back(e);
    std::push_heap(ready_.begin(), ready_.end(), std::greater<>());
  }
  drain();
  return resolved_count_;
}

void Peeler::drain() {
  while (!ready_.empty()) {
    std::pop_heap(ready_.begin(), ready_.end(), std::greater<>());
    const std::size_t e = ready_.back();
    ready_.pop_back();
    if (degree_[e] != 1) continue;
    std::size_t u = unknowns_;
    for (std::size_t v : equation_vars_[e])
      if (!resolved_[v]) u = v;
    resolved_[u] = true;
    ++resolved_count_;
    steps_.push_back(PeelStep{e, u});
    for (std::size_t f : var_equations_[u]) {
      --degree_[f];
      if (degree_[f] == 1) {
        ready_.push_back(f);
        std::push_heap(ready_.begin(), ready_.end(), std::greater<>());
      }
    }
  }
}

PeelResult peel(const RecoverySystem& system, std::span<const Matrix> observations) {
  check_observations(system, observations);
  require_same_shape(observations);
  Peeler peeler(system.unknown_count());
  for (std::size_t e = 0; e < system.observation_count(); ++e)
    peeler.add_equation(system.row(e));
  PeelResult result;
  result.steps = peeler.steps();
  if (!peeler.complete()) return result;

  // Replay the resolution order numerically.
  std::vector<std::optional<Matrix>> value(system.unknown_count());
  for (const PeelStep& step : result.steps) {
    Matrix acc = observations[step.equation];
    for (std::size_t v = 0; v < system.unknown_count(); ++v) {
      const double c = system.at(step.equation, v);
      if (c == 0.0 || v == step.unknown) continue;
      acc.add_scaled(*value[v], -c);
    }
    acc *= 1.0 / system.at(step.equation, step.unknown);
    value[step.unknown] = std::move(acc);
  }
  std::vector<Matrix> solution;
  solution.reserve(value.size());
  for (auto& v : value) solution.push_back(std::move(*v));
  result.solution = std::move(solution);
  return result;
}

std::size_t fountain_symbols_to_peel(const EncodingPlan& plan) {
  const std::size_t workers = plan.workers();
  const std::size_t total = plan.total_tasks();
  Peeler peeler(plan.unknown_count());
  for (std::size_t s = 0; s < total; ++s) {
    const std::size_t flat = plan.task_index(s % workers, s / workers);
    peeler.add_equation(plan.task_rows.row(flat));
    if (peeler.complete()) return s + 1;
  }
  throw OverheadExceeded("peeling did not finish within " + str(total) +
                             " coded symbols",
                         total);
}

UnknownSolution decode_unknowns(const EncodingPlan& plan,
                                std::span<const TaskResult> results) {
  // Canonical order by flat task index makes the outcome independent of
  // arrival order.
  std::map<std::size_t, const TaskResult*> by_index;
  for (const TaskResult& r : results) {
    const std::size_t flat = plan.task_index(r.task.worker, r.task.seq);
    if (!(plan.task_at(flat) == r.task))
      throw PatternError("result for task (" + str(r.task.worker) + ", " +
                         str(r.task.seq) + ") does not match the plan");
    if (!by_index.emplace(flat, &r).second)
      throw PatternError("duplicate result for task (" + str(r.task.worker) +
                         ", " + str(r.task.seq) + ")");
  }
  std::vector<std::size_t> tasks;
  std::vector<Matrix> values;
  for (const auto& [flat, r] : by_index) {
    tasks.push_back(flat);
    values.push_back(r->value);
  }
  const RecoverySystem system = recovery_system_for_tasks(plan, tasks);
  const std::size_t unknowns = plan.unknown_count();
  const std::size_t rank = system.rank();
  if (rank < unknowns) {
    throw NotDecodable("received results have rank " + str(rank) + " but " +
                           str(unknowns) + " unknowns are needed",
                       rank, unknowns);
  }
  require_same_shape(values);

  UnknownSolution out;
  switch (plan.strategy) {
    case DecodeStrategy::Interpolation: {
      // Distinct evaluation points, one per task: any `unknowns` of them fix
      // the product polynomial.
      std::vector<double> z;
      for (std::size_t i = 0; i < unknowns; ++i) z.push_back(plan.task_nodes[tasks[i]].point);
      out.blocks = interpolate(z, std::span<const Matrix>(values).first(unknowns));
      out.strategy = DecodeStrategy::Interpolation;
      out.observations_used = unknowns;
      return out;
    }
    case DecodeStrategy::Hermite: {
      // Take leading derivative runs node by node until d + 1 samples are
      // collected. Needs each node's samples to start at derivative 0.
      std::vector<HermiteNode> nodes;
      std::vector<Matrix> samples;
      bool ordered = true;
      std::size_t i = 0;
      while (i < tasks.size() && samples.size() < unknowns) {
        const TaskNode& node = plan.task_nodes[tasks[i]];
        if (node.derivative != 0) {
          ordered = false;
          break;
        }
        nodes.push_back(HermiteNode{node.point, 0});
        while (i < tasks.size() && samples.size() < unknowns &&
               plan.task_nodes[tasks[i]].point == node.point &&
               plan.task_nodes[tasks[i]].derivative == nodes.back().multiplicity) {
          samples.push_back(values[i]);
          ++nodes.back().multiplicity;
          ++i;
        }
        while (i < tasks.size() && plan.task_nodes[tasks[i]].point == node.point) ++i;
      }
      if (ordered && samples.size() == unknowns) {
        out.blocks = hermite_interpolate(nodes, samples);
        out.strategy = DecodeStrategy::Hermite;
        out.observations_used = unknowns;
        return out;
      }
      break;  // out-of-order derivatives: fall through to a dense solve
    }
    case DecodeStrategy::Peeling: {
      PeelResult peeled = peel(system, values);
      if (peeled.solution) {
        out.blocks = std::move(*peeled.solution);
        out.strategy = DecodeStrategy::Peeling;
        std::set<std::size_t> used;
        for (const auto& step : peeled.steps) used.insert(step.equation);
        out.observations_used = used.size();
        return out;
      }
      break;
    }
    case DecodeStrategy::LeastSquares:
      out.blocks = solve_least_squares(system, values);
      out.strategy = DecodeStrategy::LeastSquares;
      out.observations_used = values.size();
      return out;
    case DecodeStrategy::Dense:
      break;
  }
  if (system.observation_count() == unknowns) {
    out.blocks = solve_dense(system, values);
    out.strategy = DecodeStrategy::Dense;
  } else {
    out.blocks = solve_least_squares(system, values);
    out.strategy = DecodeStrategy::LeastSquares;
  }
  out.observations_used = values.size();
  return out;
}

DecodeOutcome decode_detailed(const EncodingPlan& plan,
                              std::span<const TaskResult> results) {
  UnknownSolution solved = decode_unknowns(plan, results);
  BlockGrid grid;
  grid.grid_rows = plan.target_grid_rows;
  grid.grid_cols = plan.target_grid_cols;
  grid.blocks.resize(grid.grid_rows * grid.grid_cols,
                     Matrix(solved.blocks.front().rows(), solved.blocks.front().cols()));
  for (const TargetBlock& t : plan.targets)
    grid.blocks[t.row * grid.grid_cols + t.col] = solved.blocks[t.unknown];
  return DecodeOutcome{assemble(grid), solved.strategy, solved.observations_used};
}

Matrix decode(const EncodingPlan& plan, std::span<const TaskResult> results) {
  return decode_detailed(plan, results).value;
}

}  // namespace ccm
