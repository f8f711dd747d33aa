#include <doctest.h>

#include <cmath>
#include <limits>

#include "ccm/decoder.hpp"
#include "ccm/error.hpp"
#include "ccm/rng.hpp"
#include "ccm/sim.hpp"

using namespace ccm;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t rank_of_counts(const EncodingPlan& plan, const std::vector<std::size_t>& counts) {
  std::vector<std::size_t> tasks;
  for (std::size_t w = 0; w < counts.size(); ++w)
    for (std::size_t s = 0; s < counts[w]; ++s) tasks.push_back(plan.task_index(w, s));
  if (tasks.empty()) return 0;
  return recovery_system_for_tasks(plan, tasks).rank();
}

}  // namespace

TEST_CASE("repetition example: W2 never returns, decode at t = 3") {
  const EncodingPlan plan = build_repetition();
  const Matrix a = random_matrix(6, 3, 1);
  const Matrix x = random_matrix(6, 1, 2);
  const SimReport r = simulate_durations(plan, {{2, 2}, {1, 2}, {kInf, kInf}}, Payload{a, x});
  REQUIRE(r.decodable);
  CHECK(*r.decode_time == 3.0);
  CHECK(r.straggler_set == std::vector<std::size_t>{2});
  CHECK(r.used_pattern.counts == std::vector<std::size_t>{1, 2, 0});
  CHECK(r.decoded_ok);
  CHECK(*r.residual < 1e-12);
  // Events are time ordered; W0's second task lands after the decode.
  REQUIRE(r.events.size() == 4u);
  CHECK(r.events[0].worker == 1u);
  CHECK(r.events[3].time == 4.0);
  CHECK_FALSE(r.events[3].used);
}

TEST_CASE("decode time is minimal: one event earlier is not decodable") {
  const EncodingPlan plan = build_mds_matvec(5, 9);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SimReport r = simulate(plan, {}, DelayModel::exponential(1.0), seed);
    REQUIRE(r.decodable);
    auto counts = r.used_pattern.counts;
    CHECK(rank_of_counts(plan, counts) == plan.unknown_count());
    // Drop the event that completed the decode.
    std::size_t last = 0;
    for (const TaskEvent& e : r.events)
      if (e.used && e.time == *r.decode_time) last = e.worker;
    --counts[last];
    CHECK(rank_of_counts(plan, counts) < plan.unknown_count());
  }
}

TEST_CASE("workers that contributed nothing do not change the decode time") {
  const EncodingPlan plan = build_poly_matmul(2, 2, 7);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto d = sample_durations(plan, DelayModel::exponential(2.0), seed);
    const SimReport r = simulate_durations(plan, d);
    REQUIRE(r.decodable);
    for (std::size_t w = 0; w < plan.workers(); ++w)
      if (r.used_pattern.counts[w] == 0)
        for (double& v : d[w]) v = kInf;
    CHECK(*simulate_durations(plan, d).decode_time == *r.decode_time);
  }
}

TEST_CASE("mds decode time is the k-th order statistic") {
  // One task per worker, exponential(1): E[X_(k) of N] = sum_{i<k} 1/(N - i).
  const std::size_t n = 10, k = 4;
  const EncodingPlan plan = build_mds_matvec(k, n);
  const BatchSummary s = batch_simulate(plan, DelayModel::exponential(1.0), 10000, 7);
  double expected = 0.0;
  for (std::size_t i = 0; i < k; ++i) expected += 1.0 / static_cast<double>(n - i);
  CHECK(s.decoded == 10000u);
  CHECK(std::abs(s.mean - expected) / expected < 0.03);
  CHECK(s.straggler_histogram.size() >= n - k + 1);
  CHECK(s.straggler_histogram[n - k] == 10000u);
  CHECK(s.min <= s.p50);
  CHECK(s.p50 <= s.p90);
  CHECK(s.p90 <= s.p99);
  CHECK(s.p99 <= s.max);
}

TEST_CASE("coding beats waiting for every uncoded worker") {
  const BatchSummary coded = batch_simulate(build_mds_matvec(4, 8), DelayModel::exponential(1.0), 2000, 3);
  const BatchSummary uncoded = batch_simulate(build_mds_matvec(4, 4), DelayModel::exponential(1.0), 2000, 3);
  CHECK(coded.mean < uncoded.mean);
  CHECK(uncoded.mean == doctest::Approx(25.0 / 12.0).epsilon(0.05));  // H_4
}

TEST_CASE("batches are reproducible and trial k matches a single run") {
  const EncodingPlan plan = build_matdot(2, 5);
  DelayModel d = DelayModel::shifted_exponential(0.5, 2.0);
  const BatchSummary a = batch_simulate(plan, d, 50, 99, true);
  const BatchSummary b = batch_simulate(plan, d, 50, 99, true);
  CHECK(a.mean == b.mean);
  CHECK(a.p90 == b.p90);
  CHECK(*simulate(plan, {}, d, split_seed(99, 7)).decode_time == *a.reports[7].decode_time);
  CHECK(a.min >= 0.5);
}

TEST_CASE("failures") {
  const EncodingPlan plan = build_mds_matvec(3, 5);
  DelayModel all_fail = DelayModel::exponential(1.0);
  all_fail.failure_prob = 1.0;
  const BatchSummary s = batch_simulate(plan, all_fail, 20, 1);
  CHECK(s.decoded == 0u);
  const SimReport r = simulate(plan, {}, all_fail, 1);
  CHECK_FALSE(r.decodable);
  CHECK(r.rank_deficit == 3u);

  DelayModel listed = DelayModel::exponential(1.0);
  listed.failed_workers = {0, 1, 2};
  const SimReport l = simulate(plan, {}, listed, 4);
  CHECK_FALSE(l.decodable);
  CHECK(l.final_rank == 2u);
  listed.failed_workers = {0, 4};
  CHECK(simulate(plan, {}, listed, 4).decodable);
}

TEST_CASE("delay models are validated") {
  CHECK_THROWS_AS(DelayModel::exponential(0.0).validate(), ConfigError);
  DelayModel bad = DelayModel::exponential(1.0);
  bad.failure_prob = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_THROWS_AS(DelayModel::deterministic({{1.0, -2.0}}).validate(), ConfigError);
  const EncodingPlan plan = build_repetition();
  CHECK_THROWS_AS(simulate(plan, {}, DelayModel::deterministic({{1.0}}), 0), ConfigError);
}
