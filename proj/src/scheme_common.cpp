#include <algorithm>
#include <array>
#include <string>

#include "ccm/error.hpp"
#include "ccm/scheme.hpp"

namespace ccm {

namespace {

constexpr std::array<SchemeKind, 9> kAllKinds{
    SchemeKind::Repetition,  SchemeKind::MdsMatvec, SchemeKind::DerivativeMatvec,
    SchemeKind::UdmMatvec,   SchemeKind::ConvMatvec, SchemeKind::FountainMatvec,
    SchemeKind::PolyMatmul,  SchemeKind::MatDot,    SchemeKind::Entangled,
};

}  // namespace

std::string_view to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::Repetition: return "repetition";
    case SchemeKind::MdsMatvec: return "mds_matvec";
    case SchemeKind::DerivativeMatvec: return "derivative_matvec";
    case SchemeKind::UdmMatvec: return "udm_matvec";
    case SchemeKind::ConvMatvec: return "conv_matvec";
    case SchemeKind::FountainMatvec: return "fountain_matvec";
    case SchemeKind::PolyMatmul: return "poly_matmul";
    case SchemeKind::MatDot: return "matdot";
    case SchemeKind::Entangled: return "entangled";
  }
  return "unknown";
}

SchemeKind scheme_kind_from_string(std::string_view name) {
  for (SchemeKind k : kAllKinds)
    if (to_string(k) == name) return k;
  throw ConfigError("unknown scheme kind '" + std::string(name) + "'");
}

std::span<const SchemeKind> all_scheme_kinds() { return kAllKinds; }

bool is_matvec(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::PolyMatmul:
    case SchemeKind::MatDot:
    case SchemeKind::Entangled:
      return false;
    default:
      return true;
  }
}

std::string_view to_string(DecodeStrategy strategy) {
  switch (strategy) {
    case DecodeStrategy::Interpolation: return "interpolation";
    case DecodeStrategy::Hermite: return "hermite";
    case DecodeStrategy::Peeling: return "peeling";
    case DecodeStrategy::Dense: return "dense";
    case DecodeStrategy::LeastSquares: return "least_squares";
  }
  return "unknown";
}

std::vector<double> default_eval_points(std::size_t workers) {
  std::vector<double> z(workers);
  for (std::size_t i = 0; i < workers; ++i)
    z[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(workers);
  return z;
}

std::size_t EncodingPlan::total_tasks() const {
  std::size_t total = 0;
  for (const auto& a : assignments) total += a.size();
  return total;
}

std::size_t EncodingPlan::task_index(std::size_t worker, std::size_t seq) const {
  if (worker >= assignments.size() || seq >= assignments[worker].size()) {
    throw PatternError("task (" + std::to_string(worker) + ", " +
                       std::to_string(seq) + ") is not part of the plan");
  }
  return offsets_[worker] + seq;
}

const CodedTask& EncodingPlan::task_at(std::size_t flat) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), flat);
  const auto worker = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  return assignments.at(worker).at(flat - offsets_[worker]);
}

Rational EncodingPlan::max_gamma_a() const {
  Rational best{0};
  for (const auto& g : gamma_a) best = std::max(best, g);
  return best;
}

Rational EncodingPlan::max_gamma_b() const {
  Rational best{0};
  for (const auto& g : gamma_b) best = std::max(best, g);
  return best;
}

EncodingPlan finalize_plan(EncodingPlan plan) {
  const std::size_t workers = plan.assignments.size();
  if (workers == 0) throw PlanError("plan has no workers");
  if (plan.stored_a.size() != workers || plan.gamma_a.size() != workers)
    throw PlanError("per-worker storage tables do not match worker count");
  const bool matvec = is_matvec(plan.params.kind);
  if (!matvec && (!plan.coeff_b || plan.stored_b.size() != workers ||
                  plan.gamma_b.size() != workers))
    throw PlanError("matrix-matrix plan is missing B coefficients");
  if (plan.coeff_a.cols() != plan.params.p * plan.a_col_blocks)
    throw PlanError("coeff_a column count does not match the A block grid");

  plan.offsets_.assign(workers, 0);
  std::size_t total = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    plan.offsets_[w] = total;
    const auto& tasks = plan.assignments[w];
    for (std::size_t s = 0; s < tasks.size(); ++s) {
      const CodedTask& t = tasks[s];
      if (t.worker != w || t.seq != s)
        throw PlanError("task order of worker " + std::to_string(w) +
                        " is not contiguous");
      const auto& sa = plan.stored_a[w];
      if (std::find(sa.begin(), sa.end(), t.a_index) == sa.end())
        throw PlanError("task references a coded-A block the worker lacks");
      if (t.b_index) {
        const auto& sb = plan.stored_b.at(w);
        if (std::find(sb.begin(), sb.end(), *t.b_index) == sb.end())
          throw PlanError("task references a coded-B block the worker lacks");
      }
    }
    total += tasks.size();
  }
  if (plan.task_rows.rows() != total ||
      plan.task_rows.cols() != plan.unknowns.size())
    throw PlanError("task_rows must be total_tasks x unknowns");
  if (!plan.task_nodes.empty() && plan.task_nodes.size() != total)
    throw PlanError("task_nodes must cover every task");
  for (const auto& t : plan.targets)
    if (t.unknown >= plan.unknowns.size())
      throw PlanError("target references an unknown out of range");
  if (plan.targets.size() != plan.target_grid_rows * plan.target_grid_cols)
    throw PlanError("targets do not tile the output grid");
  return plan;
}

}  // namespace ccm
