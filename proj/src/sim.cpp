#include "ccm/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ccm/decoder.hpp"
#include "ccm/error.hpp"
#include "ccm/parallel.hpp"
#include "ccm/rng.hpp"

namespace ccm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double percentile(const std::vector<double>& sorted, double q) {
  // Nearest rank.
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

}  // namespace

DelayModel DelayModel::deterministic(std::vector<std::vector<double>> durations) {
  DelayModel d;
  d.kind = Kind::Deterministic;
  d.durations = std::move(durations);
  return d;
}

DelayModel DelayModel::exponential(double rate) {
  DelayModel d;
  d.kind = Kind::Exponential;
  d.rate = rate;
  return d;
}

DelayModel DelayModel::shifted_exponential(double shift, double rate) {
  DelayModel d;
  d.kind = Kind::ShiftedExponential;
  d.shift = shift;
  d.rate = rate;
  return d;
}

void DelayModel::validate() const {
  if (!(failure_prob >= 0.0 && failure_prob <= 1.0))
    throw ConfigError("failure probability must lie in [0, 1]");
  switch (kind) {
    case Kind::Deterministic:
      for (const auto& row : durations)
        for (double d : row)
          if (!(d > 0.0)) throw ConfigError("task durations must be positive");
      break;
    case Kind::ShiftedExponential:
      if (!(shift >= 0.0) || !std::isfinite(shift))
        throw ConfigError("shift must be finite and non-negative");
      [[fallthrough]];
    case Kind::Exponential:
      if (!(rate > 0.0) || !std::isfinite(rate))
        throw ConfigError("rate must be finite and positive");
      break;
  }
}

std::vector<std::vector<double>> sample_durations(const EncodingPlan& plan,
                                                  const DelayModel& delay,
                                                  std::uint64_t seed) {
  delay.validate();
  const std::size_t n = plan.workers();
  if (delay.kind == DelayModel::Kind::Deterministic) {
    if (delay.durations.size() != n)
      throw ConfigError("deterministic delays need one row per worker");
    for (std::size_t w = 0; w < n; ++w)
      if (delay.durations[w].size() != plan.tasks_of(w))
        throw ConfigError("worker " + std::to_string(w) +
                          " needs one duration per task");
  }
  for (std::size_t w : delay.failed_workers)
    if (w >= n) throw ConfigError("failed worker " + std::to_string(w) + " out of range");

  std::vector<std::vector<double>> d(n);
  for (std::size_t w = 0; w < n; ++w) {
    SplitMix64 rng(split_seed(seed, w));
    bool failed = std::find(delay.failed_workers.begin(), delay.failed_workers.end(),
                            w) != delay.failed_workers.end();
    if (delay.failure_prob > 0.0 && rng.uniform() < delay.failure_prob) failed = true;
    d[w].resize(plan.tasks_of(w));
    for (std::size_t s = 0; s < d[w].size(); ++s) {
      switch (delay.kind) {
        case DelayModel::Kind::Deterministic:
          d[w][s] = delay.durations[w][s];
          break;
        case DelayModel::Kind::Exponential:
          d[w][s] = rng.exponential(delay.rate);
          break;
        case DelayModel::Kind::ShiftedExponential:
          d[w][s] = delay.shift + rng.exponential(delay.rate);
          break;
      }
    }
    if (failed && !d[w].empty()) d[w][0] = kInf;
  }
  return d;
}

SimReport simulate_durations(const EncodingPlan& plan,
                             const std::vector<std::vector<double>>& durations,
                             const std::optional<Payload>& payload) {
  const std::size_t n = plan.workers();
  if (durations.size() != n) throw ConfigError("one duration row per worker required");

  SimReport report;
  for (std::size_t w = 0; w < n; ++w) {
    if (durations[w].size() != plan.tasks_of(w))
      throw ConfigError("worker " + std::to_string(w) + " needs one duration per task");
    double clock = 0.0;
    for (std::size_t s = 0; s < durations[w].size(); ++s) {
      if (!(durations[w][s] > 0.0)) throw ConfigError("durations must be positive");
      clock += durations[w][s];
      if (!std::isfinite(clock)) break;  // a failed task blocks the rest
      report.events.push_back(TaskEvent{w, s, clock, false});
    }
  }
  std::sort(report.events.begin(), report.events.end(),
            [](const TaskEvent& a, const TaskEvent& b) {
              if (a.time != b.time) return a.time < b.time;
              if (a.worker != b.worker) return a.worker < b.worker;
              return a.seq < b.seq;
            });

  const std::size_t unknowns = plan.unknown_count();
  std::vector<std::size_t> counts(n, 0);
  std::vector<std::size_t> received;
  std::size_t rank = 0;
  std::size_t decode_event = report.events.size();
  for (std::size_t e = 0; e < report.events.size(); ++e) {
    const TaskEvent& ev = report.events[e];
    ++counts[ev.worker];
    received.push_back(plan.task_index(ev.worker, ev.seq));
    if (received.size() < unknowns) {
      rank = received.size();  // upper bound, refined below when it matters
      continue;
    }
    rank = recovery_system_for_tasks(plan, received).rank();
    if (rank == unknowns) {
      decode_event = e;
      break;
    }
  }
  if (decode_event == report.events.size()) {
    rank = received.empty() ? 0 : recovery_system_for_tasks(plan, received).rank();
  }
  report.final_rank = rank;
  report.rank_deficit = unknowns - rank;
  report.used_pattern = CompletionPattern::prefix(counts);
  for (std::size_t w = 0; w < n; ++w)
    if (counts[w] == 0) report.straggler_set.push_back(w);

  if (decode_event == report.events.size()) return report;
  report.decodable = true;
  report.decode_time = report.events[decode_event].time;
  for (std::size_t e = 0; e <= decode_event; ++e) report.events[e].used = true;

  if (payload) {
    const auto coded = encode(plan, payload->a, payload->b);
    std::vector<TaskResult> results;
    for (std::size_t w = 0; w < n; ++w) {
      if (counts[w] == 0) continue;
      const std::span<const CodedTask> order(plan.assignments[w].data(), counts[w]);
      auto r = worker_compute(coded[w], order);
      std::move(r.begin(), r.end(), std::back_inserter(results));
    }
    Matrix value = decode(plan, results);
    report.residual = relative_error(value, direct_product(payload->a, payload->b).value);
    report.decoded_ok = true;
    report.result = std::move(value);
  }
  return report;
}

SimReport simulate(const EncodingPlan& plan, const std::optional<Payload>& payload,
                   const DelayModel& delay, std::uint64_t seed) {
  return simulate_durations(plan, sample_durations(plan, delay, seed), payload);
}

BatchSummary batch_simulate(const EncodingPlan& plan, const DelayModel& delay,
                            std::size_t trials, std::uint64_t seed,
                            bool keep_reports) {
  if (trials == 0) throw ConfigError("batch_simulate needs at least one trial");
  delay.validate();
  std::vector<SimReport> reports(trials);
  parallel_for(trials, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k)
      reports[k] = simulate(plan, std::nullopt, delay, split_seed(seed, k));
  });

  BatchSummary summary;
  summary.trials = trials;
  summary.straggler_histogram.assign(plan.workers() + 1, 0);
  std::vector<double> times;
  double stragglers = 0.0;
  for (const auto& r : reports) {
    if (r.decode_time) times.push_back(*r.decode_time);
    stragglers += static_cast<double>(r.straggler_set.size());
    ++summary.straggler_histogram[r.straggler_set.size()];
  }
  summary.decoded = times.size();
  summary.mean_stragglers = stragglers / static_cast<double>(trials);
  if (!times.empty()) {
    double total = 0.0;
    for (double t : times) total += t;  // trial order: deterministic sum
    summary.mean = total / static_cast<double>(times.size());
    std::sort(times.begin(), times.end());
    summary.p50 = percentile(times, 0.50);
    summary.p90 = percentile(times, 0.90);
    summary.p99 = percentile(times, 0.99);
    summary.min = times.front();
    summary.max = times.back();
  }
  if (keep_reports) summary.reports = std::move(reports);
  return summary;
}

}  // namespace ccm
