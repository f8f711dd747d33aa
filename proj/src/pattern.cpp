#include "ccm/pattern.hpp"

#include <algorithm>

#include "ccm/error.hpp"

namespace ccm {

CompletionPattern CompletionPattern::subset(std::vector<std::size_t> workers) {
  std::sort(workers.begin(), workers.end());
  if (std::adjacent_find(workers.begin(), workers.end()) != workers.end())
    throw PatternError("subset pattern lists a worker twice");
  CompletionPattern p;
  p.mode = Mode::Subset;
  p.workers = std::move(workers);
  return p;
}

CompletionPattern CompletionPattern::prefix(std::vector<std::size_t> counts) {
  CompletionPattern p;
  p.mode = Mode::Prefix;
  p.counts = std::move(counts);
  return p;
}

CompletionPattern CompletionPattern::everything(const EncodingPlan& plan) {
  std::vector<std::size_t> counts(plan.workers());
  for (std::size_t w = 0; w < plan.workers(); ++w) counts[w] = plan.tasks_of(w);
  return prefix(std::move(counts));
}

std::vector<std::size_t> completed_counts(const EncodingPlan& plan,
                                          const CompletionPattern& pattern) {
  std::vector<std::size_t> counts(plan.workers(), 0);
  if (pattern.mode == CompletionPattern::Mode::Subset) {
    for (std::size_t w : pattern.workers) {
      if (w >= plan.workers())
        throw PatternError("pattern names worker " + std::to_string(w) +
                           " but the plan has " +
                           std::to_string(plan.workers()));
      counts[w] = plan.tasks_of(w);
    }
    return counts;
  }
  if (pattern.counts.size() != plan.workers())
    throw PatternError("prefix pattern needs one count per worker");
  for (std::size_t w = 0; w < plan.workers(); ++w) {
    if (pattern.counts[w] > plan.tasks_of(w))
      throw PatternError("worker " + std::to_string(w) + " has only " +
                         std::to_string(plan.tasks_of(w)) + " tasks");
    counts[w] = pattern.counts[w];
  }
  return counts;
}

std::vector<std::size_t> completed_tasks(const EncodingPlan& plan,
                                         const CompletionPattern& pattern) {
  const auto counts = completed_counts(plan, pattern);
  std::vector<std::size_t> tasks;
  for (std::size_t w = 0; w < counts.size(); ++w)
    for (std::size_t s = 0; s < counts[w]; ++s)
      tasks.push_back(plan.task_index(w, s));
  return tasks;
}

std::string describe(const CompletionPattern& pattern) {
  std::string out =
      pattern.mode == CompletionPattern::Mode::Subset ? "workers {" : "prefix [";
  const auto& v = pattern.mode == CompletionPattern::Mode::Subset
                      ? pattern.workers
                      : pattern.counts;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  out += pattern.mode == CompletionPattern::Mode::Subset ? "}" : "]";
  return out;
}

}  // namespace ccm
