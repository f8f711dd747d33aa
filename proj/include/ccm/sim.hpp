#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ccm/matrix.hpp"
#include "ccm/pattern.hpp"
#include "ccm/scheme.hpp"

namespace ccm {

/// Per-task service times. Failures (random or listed) wrap any duration
/// model and show up as an infinite first-task delay.
struct DelayModel {
  enum class Kind { Deterministic, Exponential, ShiftedExponential };

  Kind kind = Kind::Exponential;
  /// Deterministic: durations[worker][seq]; +inf marks a failed task.
  std::vector<std::vector<double>> durations;
  double rate = 1.0;
  double shift = 0.0;
  double failure_prob = 0.0;
  std::vector<std::size_t> failed_workers;

  static DelayModel deterministic(std::vector<std::vector<double>> durations);
  static DelayModel exponential(double rate);
  static DelayModel shifted_exponential(double shift, double rate);

  /// Throws ConfigError on non-positive durations or rates, or prob outside [0, 1].
  void validate() const;
};

/// Draws d[worker][seq] for one run. Worker w uses the stream split(seed, w),
/// so a worker's draws do not depend on the others.
std::vector<std::vector<double>> sample_durations(const EncodingPlan& plan,
                                                  const DelayModel& delay,
                                                  std::uint64_t seed);

struct TaskEvent {
  std::size_t worker;
  std::size_t seq;
  double time;
  bool used;
};

struct SimReport {
  /// Completed tasks in event order, ties broken by (time, worker, seq).
  std::vector<TaskEvent> events;
  bool decodable = false;
  std::optional<double> decode_time;
  /// Prefix counts received by decode_time (or by the end when never decodable).
  CompletionPattern used_pattern;
  std::vector<std::size_t> straggler_set;
  std::size_t final_rank = 0;
  std::size_t rank_deficit = 0;
  /// Payload runs only.
  bool decoded_ok = false;
  std::optional<double> residual;
  std::optional<Matrix> result;
};

struct Payload {
  Matrix a;
  Matrix b;  // B, or x for matrix-vector kinds
};

/// Event-driven run over explicit durations. With a payload the master
/// decodes at the first decodable instant and reports the residual against
/// the direct product.
SimReport simulate_durations(const EncodingPlan& plan,
                             const std::vector<std::vector<double>>& durations,
                             const std::optional<Payload>& payload = {});

SimReport simulate(const EncodingPlan& plan, const std::optional<Payload>& payload,
                   const DelayModel& delay, std::uint64_t seed);

struct BatchSummary {
  std::size_t trials = 0;
  std::size_t decoded = 0;
  double mean = 0.0;  // over decoded trials
  double p50 = 0.0;
  double p90 = 0.0;
  double p99 = 0.0;
  double min = 0.0;
  double max = 0.0;
  double mean_stragglers = 0.0;
  /// straggler_histogram[k]: trials with exactly k stragglers.
  std::vector<std::size_t> straggler_histogram;
  std::vector<SimReport> reports;  // when kept
};

/// Trial k draws its delays with seed split(seed, k).
BatchSummary batch_simulate(const EncodingPlan& plan, const DelayModel& delay,
                            std::size_t trials, std::uint64_t seed,
                            bool keep_reports = false);

}  // namespace ccm
