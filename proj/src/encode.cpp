#include <string>

#include "ccm/error.hpp"
#include "ccm/scheme.hpp"

namespace ccm {

namespace {

Matrix combine(const Matrix& coeff, std::size_t row, const BlockGrid& grid) {
  Matrix out(grid.blocks.front().rows(), grid.blocks.front().cols());
  for (std::size_t s = 0; s < grid.blocks.size(); ++s) {
    const double c = coeff(row, s);
    if (c == 0.0) continue;
    if (c == 1.0) {
      out += grid.blocks[s];
    } else {
      out.add_scaled(grid.blocks[s], c);
    }
  }
  return out;
}

}  // namespace

std::vector<WorkerPayload> encode(const EncodingPlan& plan, const Matrix& a,
                                  const Matrix& b) {
  const bool matvec = is_matvec(plan.params.kind);
  if (a.rows() != b.rows()) {
    throw DimensionError("encode: A has " + std::to_string(a.rows()) +
                         " rows but the right-hand side has " +
                         std::to_string(b.rows()));
  }
  const BlockGrid a_grid = partition(a, plan.params.p, plan.a_col_blocks);
  std::vector<WorkerPayload> out(plan.workers());
  if (matvec) {
    for (std::size_t w = 0; w < plan.workers(); ++w) {
      out[w].worker = w;
      out[w].x = b;
      for (std::size_t idx : plan.stored_a[w])
        out[w].a_blocks.emplace(idx, combine(plan.coeff_a, idx, a_grid));
    }
    return out;
  }
  const BlockGrid b_grid = partition(b, plan.params.p, plan.b_col_blocks);
  for (std::size_t w = 0; w < plan.workers(); ++w) {
    out[w].worker = w;
    for (std::size_t idx : plan.stored_a[w])
      out[w].a_blocks.emplace(idx, combine(plan.coeff_a, idx, a_grid));
    for (std::size_t idx : plan.stored_b[w])
      out[w].b_blocks.emplace(idx, combine(*plan.coeff_b, idx, b_grid));
  }
  return out;
}

std::vector<TaskResult> worker_compute(const WorkerPayload& payload,
                                       std::span<const CodedTask> order) {
  std::vector<TaskResult> results;
  results.reserve(order.size());
  for (const CodedTask& task : order) {
    auto a_it = payload.a_blocks.find(task.a_index);
    if (a_it == payload.a_blocks.end()) {
      throw PlanError("worker " + std::to_string(payload.worker) +
                      " has no coded-A block " + std::to_string(task.a_index));
    }
    const Matrix* rhs = nullptr;
    if (task.b_index) {
      auto b_it = payload.b_blocks.find(*task.b_index);
      if (b_it == payload.b_blocks.end()) {
        throw PlanError("worker " + std::to_string(payload.worker) +
                        " has no coded-B block " + std::to_string(*task.b_index));
      }
      rhs = &b_it->second;
    } else {
      if (!payload.x) {
        throw PlanError("worker " + std::to_string(payload.worker) +
                        " has no right-hand side vector");
      }
      rhs = &*payload.x;
    }
    results.push_back(TaskResult{task, direct_product(a_it->second, *rhs).value});
  }
  return results;
}

Matrix evaluate_unknown(const EncodingPlan& plan, const BlockGrid& a_blocks,
                        const BlockGrid& b_blocks, std::size_t unknown) {
  const Unknown& u = plan.unknowns.at(unknown);
  const bool matvec = is_matvec(plan.params.kind);
  const Matrix& a0 = a_blocks.blocks.front();
  const Matrix& b0 = b_blocks.blocks.front();
  Matrix out(a0.cols(), b0.cols());
  for (const auto& term : u.terms) {
    const Matrix& rhs = matvec ? b0 : b_blocks.blocks.at(term.b_block);
    out += direct_product(a_blocks.blocks.at(term.a_block), rhs).value;
  }
  return out;
}

}  // namespace ccm
