#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "ccm/analysis.hpp"
#include "ccm/decoder.hpp"
#include "ccm/error.hpp"
#include "ccm/rng.hpp"
#include "oracles.hpp"

using namespace ccm;

namespace {

/// sigma_max / sigma_min from the eigenvalues of M^T M, an independent path.
double gram_condition(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(e.transpose() * e);
  const auto ev = s.eigenvalues();
  return std::sqrt(ev.maxCoeff() / ev.minCoeff());
}

Matrix permute_rows(const Matrix& m, const std::vector<std::size_t>& order) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(order[i], j);
  return out;
}

}  // namespace

TEST_CASE("condition numbers of simple matrices") {
  CHECK(condition_number(Matrix::identity(5)) == doctest::Approx(1.0));
  CHECK(condition_number(Matrix(2, 2, {10, 0, 0, 1})) == doctest::Approx(10.0));
  CHECK(condition_number(Matrix(2, 2, {0, 1, 1, 0})) == doctest::Approx(1.0));
  CHECK(std::isinf(condition_number(Matrix(2, 2, {1, 2, 2, 4}))));
  CHECK_THROWS_AS(condition_number(Matrix(3, 3)), DomainError);
  CHECK(std::isinf(recovery_condition(Matrix(2, 3, {1, 0, 0, 0, 1, 0}))));
}

TEST_CASE("condition number agrees with the Gram eigenvalue oracle") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix m = random_matrix(7, 5, seed);
    CHECK(condition_number(m) == doctest::Approx(gram_condition(m)).epsilon(1e-8));
  }
}

TEST_CASE("condition number invariances") {
  const Matrix m = random_matrix(6, 6, 44);
  const double base = condition_number(m);
  CHECK(condition_number(permute_rows(m, {5, 3, 1, 0, 2, 4})) == doctest::Approx(base).epsilon(1e-10));
  CHECK(condition_number(-3.5 * m) == doctest::Approx(base).epsilon(1e-10));
  // Appending rows can only help the smallest singular value of a tall stack.
  Matrix tall(7, 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) tall(i, j) = m(i, j);
  for (std::size_t j = 0; j < 6; ++j) tall(6, j) = 0.1 * static_cast<double>(j);
  const Matrix top(6, 6, std::vector<double>(tall.data().begin(), tall.data().begin() + 36));
  CHECK(singular_values(tall).back() >= singular_values(top).back() - 1e-12);
}

TEST_CASE("rank by SVD matches elimination on random and structured matrices") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Matrix m = random_matrix(6, 4, seed);
    for (std::size_t j = 0; j < 4; ++j) m(5, j) = m(0, j) + m(1, j);
    CHECK(numerical_rank(m) == oracle::elimination_rank(m));
  }
  const EncodingPlan plan = build_mds_matvec(4, 7);
  for (const auto& s : oracle::subsets(7, 3)) {
    const Matrix g = build_recovery_system(plan, CompletionPattern::subset(s)).matrix();
    CHECK(numerical_rank(g) == 3u);
  }
}

TEST_CASE("pattern enumeration counts and unranking") {
  const EncodingPlan plan = build_mds_matvec(3, 6);
  CHECK(count_patterns(plan, PatternMode::Subset, 3) == 20u);
  const auto all = oracle::subsets(6, 3);
  for (std::uint64_t i = 0; i < 20; ++i)
    CHECK(pattern_at(plan, PatternMode::Subset, 3, i).workers == all[i]);

  // Repetition: 3 workers with 2 tasks each; prefix totals of 3, caps of 2.
  const EncodingPlan rep = build_repetition();
  CHECK(count_patterns(rep, PatternMode::Prefix, 3) == 7u);
  std::vector<std::vector<std::size_t>> seen;
  for (std::uint64_t i = 0; i < 7; ++i) {
    const auto c = pattern_at(rep, PatternMode::Prefix, 3, i).counts;
    CHECK(c[0] + c[1] + c[2] == 3u);
    CHECK(*std::max_element(c.begin(), c.end()) <= 2u);
    seen.push_back(c);
  }
  CHECK(std::is_sorted(seen.begin(), seen.end()));
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

TEST_CASE("worst case over mds subsets equals the maximum over the oracle loop") {
  const EncodingPlan plan = build_mds_matvec(4, 8);
  double worst = 0.0;
  for (const auto& s : oracle::subsets(8, 4)) {
    const Matrix g = build_recovery_system(plan, CompletionPattern::subset(s)).matrix();
    worst = std::max(worst, gram_condition(g));
  }
  const ConditionReport r = worst_case_condition(plan, 4);
  CHECK(r.worst == doctest::Approx(worst).epsilon(1e-6));
  CHECK(r.label == "exhaustive");
  CHECK(r.patterns_evaluated == 70u);
  CHECK_FALSE(r.sampled);
}

TEST_CASE("a larger budget cannot make the worst case worse") {
  const EncodingPlan plan = build_mds_matvec(4, 9);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t tau = 4; tau <= 9; ++tau) {
    const double w = worst_case_condition(plan, tau).worst;
    CHECK(w <= prev * (1 + 1e-9));
    prev = w;
  }
}

TEST_CASE("guard and sampling") {
  const EncodingPlan plan = build_mds_matvec(10, 30);
  EnumerationOptions o;
  o.guard = 1000;
  CHECK_THROWS_AS(worst_case_condition(plan, 10, o), EnumerationTooLarge);
  o.samples = 200;
  o.seed = 3;
  const ConditionReport r = worst_case_condition(plan, 10, o);
  CHECK(r.sampled);
  CHECK(r.label == "sampled lower bound on worst case");
  CHECK(r.patterns_evaluated == 200u);
  CHECK(r.patterns_total == 30045015u);
  CHECK(worst_case_condition(plan, 10, o).worst == r.worst);  // seeded
}

TEST_CASE("threshold verification returns the lowest counterexample") {
  const EncodingPlan plan = build_matdot(3, 7);
  CHECK(verify_threshold(plan, 5).holds);
  const ThresholdReport fail = verify_threshold(plan, 4);
  CHECK_FALSE(fail.holds);
  REQUIRE(fail.counterexample);
  CHECK(fail.counterexample->workers == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(fail.counterexample_rank == 4u);

  const EncodingPlan rep = build_repetition();
  CHECK(verify_threshold2(rep, 3).holds);
  CHECK_FALSE(verify_threshold2(rep, 2).holds);
  CHECK(verify_threshold(rep, 2).holds);
  CHECK_FALSE(verify_threshold(rep, 1).holds);
}

TEST_CASE("loads of polynomial and matvec plans") {
  const EncodingPlan poly = build_poly_matmul(2, 2, 5);
  const LoadReport l = loads(poly, 4, 6, 8);
  for (std::size_t w = 0; w < 5; ++w) {
    CHECK(l.gamma_a[w] == Rational(1, 2));
    CHECK(l.gamma_b[w] == Rational(1, 2));
    CHECK(l.comp_fraction[w] == Rational(1, 4));
    CHECK(l.comm_load[w] == Rational(1, 4));
  }
  const EncodingPlan mds = build_mds_matvec(2, 3);
  const LoadReport m = loads(mds, 4, 6, 1);
  CHECK(m.comp_fraction[0] == Rational(1, 2));
  CHECK(m.gamma_b.empty());
  CHECK_THROWS_AS(loads(poly, 3, 6, 8), DimensionError);
}
