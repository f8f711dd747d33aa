#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "ccm/error.hpp"
#include "ccm/rng.hpp"
#include "ccm/scheme.hpp"

namespace ccm {

namespace {

std::string str(std::size_t v) { return std::to_string(v); }

double ipow(double z, std::size_t e) {
  double r = 1.0;
  for (std::size_t i = 0; i < e; ++i) r *= z;
  return r;
}

std::vector<double> resolve_points(std::vector<double> points,
                                   std::size_t workers) {
  if (points.empty()) return default_eval_points(workers);
  if (points.size() != workers) {
    throw ConfigError("expected " + str(workers) + " evaluation points, got " +
                      str(points.size()));
  }
  std::vector<double> sorted = points;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ConfigError("evaluation points must be pairwise distinct");
  for (double z : points)
    if (!std::isfinite(z)) throw ConfigError("evaluation points must be finite");
  return points;
}

/// Skeleton for matrix-vector kinds: unknown i is A_i^T x, output is the
/// vertical stack of the m unknowns.
EncodingPlan matvec_skeleton(SchemeParams params, std::size_t m) {
  EncodingPlan plan;
  params.p = 1;
  params.n = 1;
  params.m = m;
  plan.params = params;
  plan.a_col_blocks = m;
  plan.b_col_blocks = 1;
  plan.unknowns.reserve(m);
  for (std::size_t i = 0; i < m; ++i)
    plan.unknowns.push_back(Unknown{"A" + str(i) + "^T x", {{i, 0}}});
  for (std::size_t i = 0; i < m; ++i) plan.targets.push_back({i, 0, i});
  plan.target_grid_rows = m;
  plan.target_grid_cols = 1;
  return plan;
}

/// Lays out coded-A blocks per worker, one task per coded block in order.
/// `per_worker[w]` lists coefficient rows (length m) of worker w's blocks.
void fill_matvec_tasks(EncodingPlan& plan,
                       const std::vector<std::vector<std::vector<double>>>&
                           per_worker) {
  const std::size_t m = plan.a_col_blocks;
  std::size_t total = 0;
  for (const auto& w : per_worker) total += w.size();
  if (total == 0) throw PlanError("plan has no tasks");
  Matrix coeff(total, m);
  plan.assignments.assign(per_worker.size(), {});
  plan.stored_a.assign(per_worker.size(), {});
  plan.gamma_a.clear();
  std::size_t next = 0;
  for (std::size_t w = 0; w < per_worker.size(); ++w) {
    for (std::size_t s = 0; s < per_worker[w].size(); ++s) {
      const auto& row = per_worker[w][s];
      for (std::size_t i = 0; i < m; ++i) coeff(next, i) = row[i];
      plan.stored_a[w].push_back(next);
      plan.assignments[w].push_back(CodedTask{w, s, next, std::nullopt});
      ++next;
    }
    plan.gamma_a.emplace_back(static_cast<std::int64_t>(per_worker[w].size()),
                              static_cast<std::int64_t>(m));
  }
  plan.coeff_a = coeff;
  // Each task result is the coded block times x, so its row over the
  // unknowns A_i^T x is the block's coefficient row.
  plan.task_rows = coeff;
}

/// Matrix-matrix plan where A_a -> z^{a_exp[a]}, B_b -> z^{b_exp[b]} and
/// every worker evaluates at one point. Unknowns are the coefficients of the
/// product polynomial; `useful` maps output block (i, j) to its exponent.
EncodingPlan polynomial_product_plan(
    SchemeParams params, std::size_t a_col_blocks, std::size_t b_col_blocks,
    const std::vector<std::size_t>& a_exp, const std::vector<std::size_t>& b_exp,
    const std::vector<std::vector<std::size_t>>& useful,
    const std::vector<std::string>& a_names,
    const std::vector<std::string>& b_names) {
  const std::size_t workers = params.workers;
  const std::vector<double> z = resolve_points(params.eval_points, workers);
  params.eval_points = z;

  EncodingPlan plan;
  plan.params = params;
  plan.a_col_blocks = a_col_blocks;
  plan.b_col_blocks = b_col_blocks;

  const std::size_t degree = *std::max_element(a_exp.begin(), a_exp.end()) +
                             *std::max_element(b_exp.begin(), b_exp.end());
  const std::size_t unknowns = degree + 1;
  plan.unknowns.resize(unknowns);
  for (std::size_t e = 0; e < unknowns; ++e) plan.unknowns[e].label = "z^" + str(e);
  for (std::size_t a = 0; a < a_exp.size(); ++a)
    for (std::size_t b = 0; b < b_exp.size(); ++b)
      plan.unknowns[a_exp[a] + b_exp[b]].terms.push_back({a, b});
  for (auto& u : plan.unknowns) {
    std::string desc;
    for (const auto& t : u.terms) {
      if (!desc.empty()) desc += " + ";
      desc += a_names[t.a_block] + "^T " + b_names[t.b_block];
    }
    if (!desc.empty()) u.label += ": " + desc;
  }

  plan.coeff_a = Matrix(workers, a_exp.size());
  plan.coeff_b = Matrix(workers, b_exp.size());
  plan.task_rows = Matrix(workers, unknowns);
  plan.assignments.assign(workers, {});
  plan.stored_a.assign(workers, {});
  plan.stored_b.assign(workers, {});
  const auto ga = Rational(1, static_cast<std::int64_t>(a_exp.size()));
  const auto gb = Rational(1, static_cast<std::int64_t>(b_exp.size()));
  for (std::size_t w = 0; w < workers; ++w) {
    for (std::size_t a = 0; a < a_exp.size(); ++a)
      plan.coeff_a(w, a) = ipow(z[w], a_exp[a]);
    for (std::size_t b = 0; b < b_exp.size(); ++b)
      (*plan.coeff_b)(w, b) = ipow(z[w], b_exp[b]);
    for (std::size_t e = 0; e < unknowns; ++e) plan.task_rows(w, e) = ipow(z[w], e);
    plan.stored_a[w] = {w};
    plan.stored_b[w] = {w};
    plan.assignments[w] = {CodedTask{w, 0, w, w}};
    plan.gamma_a.push_back(ga);
    plan.gamma_b.push_back(gb);
    plan.task_nodes.push_back(TaskNode{z[w], 0});
  }
  plan.target_grid_rows = useful.size();
  plan.target_grid_cols = useful.front().size();
  for (std::size_t i = 0; i < useful.size(); ++i)
    for (std::size_t j = 0; j < useful[i].size(); ++j)
      plan.targets.push_back({i, j, useful[i][j]});
  plan.strategy = DecodeStrategy::Interpolation;
  plan.threshold = unknowns;
  plan.threshold2 = unknowns;
  return plan;
}

void require_workers(std::size_t workers, std::size_t threshold,
                     const std::string& scheme) {
  if (workers < threshold) {
    throw ConfigError(scheme + " needs at least " + str(threshold) +
                      " workers, got " + str(workers));
  }
}

}  // namespace

EncodingPlan build_repetition(std::size_t workers) {
  if (workers < 3)
    throw ConfigError("repetition needs at least 3 workers, got " + str(workers));
  SchemeParams params;
  params.kind = SchemeKind::Repetition;
  params.workers = workers;
  EncodingPlan plan = matvec_skeleton(params, workers);
  std::vector<std::vector<std::vector<double>>> rows(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    std::vector<double> first(workers, 0.0), pair(workers, 0.0);
    first[w] = 1.0;
    pair[(w + 1) % workers] = 1.0;
    pair[(w + 2) % workers] = 1.0;
    rows[w] = {first, pair};
  }
  fill_matvec_tasks(plan, rows);
  plan.strategy = DecodeStrategy::Peeling;
  if (workers == 3) {
    plan.threshold = 2;
    plan.threshold2 = 3;
  }
  return finalize_plan(std::move(plan));
}

EncodingPlan build_mds_matvec(std::size_t m, std::size_t workers,
                              std::vector<double> eval_points) {
  if (m == 0) throw ConfigError("mds_matvec needs m >= 1");
  require_workers(workers, m, "mds_matvec");
  SchemeParams params;
  params.kind = SchemeKind::MdsMatvec;
  params.workers = workers;
  params.eval_points = resolve_points(std::move(eval_points), workers);
  params.generator = GeneratorKind::Vandermonde;
  EncodingPlan plan = matvec_skeleton(params, m);
  std::vector<std::vector<std::vector<double>>> rows(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    std::vector<double> g(m);
    for (std::size_t i = 0; i < m; ++i) g[i] = ipow(plan.params.eval_points[w], i);
    rows[w] = {g};
    plan.task_nodes.push_back(TaskNode{plan.params.eval_points[w], 0});
  }
  fill_matvec_tasks(plan, rows);
  plan.strategy = DecodeStrategy::Interpolation;
  plan.threshold = m;
  plan.threshold2 = m;
  return finalize_plan(std::move(plan));
}

EncodingPlan build_mds_matvec_random(std::size_t m, std::size_t workers,
                                     std::uint64_t seed) {
  if (m == 0) throw ConfigError("mds_matvec needs m >= 1");
  require_workers(workers, m, "mds_matvec");
  SchemeParams params;
  params.kind = SchemeKind::MdsMatvec;
  params.workers = workers;
  params.seed = seed;
  params.generator = GeneratorKind::Random;
  EncodingPlan plan = matvec_skeleton(params, m);
  // G is m x N with i.i.d. standard normal entries; column l encodes worker l.
  const Matrix g = random_matrix(m, workers, seed, GaussianDist{0.0, 1.0});
  std::vector<std::vector<std::vector<double>>> rows(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    std::vector<double> col(m);
    for (std::size_t i = 0; i < m; ++i) col[i] = g(i, w);
    rows[w] = {col};
  }
  fill_matvec_tasks(plan, rows);
  plan.strategy = DecodeStrategy::Dense;
  plan.threshold = m;
  plan.threshold2 = m;
  return finalize_plan(std::move(plan));
}

EncodingPlan build_derivative_matvec(std::size_t m, std::size_t workers,
                                     std::vector<double> eval_points) {
  if (m == 0) throw ConfigError("derivative_matvec needs m >= 1");
  if (2 * workers < m)
    throw ConfigError("derivative_matvec needs 2N >= m");
  SchemeParams params;
  params.kind = SchemeKind::DerivativeMatvec;
  params.workers = workers;
  params.eval_points = resolve_points(std::move(eval_points), workers);
  EncodingPlan plan = matvec_skeleton(params, m);
  std::vector<std::vector<std::vector<double>>> rows(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const double z = plan.params.eval_points[w];
    std::vector<double> value(m), slope(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      value[k] = ipow(z, k);
      // d/dz z^k = C(k,1) 1! z^(k-1)
      if (k >= 1) slope[k] = static_cast<double>(k) * ipow(z, k - 1);
    }
    rows[w] = {value, slope};
    plan.task_nodes.push_back(TaskNode{z, 0});
    plan.task_nodes.push_back(TaskNode{z, 1});
  }
  fill_matvec_tasks(plan, rows);
  plan.strategy = DecodeStrategy::Hermite;
  plan.threshold = (m + 1) / 2;
  plan.threshold2 = m;
  return finalize_plan(std::move(plan));
}

Matrix udm_companion(std::size_t field_degree, std::size_t field_base) {
  // Coefficients c_0..c_{k-1} of x^k = sum c_i x^i for a primitive
  // polynomial over GF(q).
  static const std::map<std::pair<std::size_t, std::size_t>, std::vector<int>> kPrimitive{
      {{2, 2}, {1, 1}},                // x^2 + x + 1
      {{2, 3}, {1, 1, 0}},             // x^3 + x + 1
      {{2, 4}, {1, 1, 0, 0}},          // x^4 + x + 1
      {{2, 5}, {1, 0, 1, 0, 0}},       // x^5 + x^2 + 1
      {{2, 6}, {1, 1, 0, 0, 0, 0}},    // x^6 + x + 1
      {{3, 2}, {1, 2}},                // x^2 + x + 2
      {{3, 3}, {2, 1, 0}},             // x^3 + 2x + 1
      {{3, 4}, {1, 2, 0, 0}},          // x^4 + x + 2
  };
  auto it = kPrimitive.find({field_base, field_degree});
  if (it == kPrimitive.end()) {
    throw ConfigError("no primitive representation configured for GF(" +
                      str(field_base) + "^" + str(field_degree) + ")");
  }
  const std::size_t k = field_degree;
  Matrix c(k, k);
  for (std::size_t i = 1; i < k; ++i) c(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < k; ++i) c(i, k - 1) = it->second[i];
  return c;
}

Matrix field_power(const Matrix& c, std::size_t e, std::size_t base) {
  const std::size_t k = c.rows();
  const auto q = static_cast<long>(base);
  Matrix result = Matrix::identity(k);
  for (std::size_t step = 0; step < e; ++step) {
    Matrix next(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        long acc = 0;
        for (std::size_t l = 0; l < k; ++l)
          acc += static_cast<long>(result(i, l)) * static_cast<long>(c(l, j));
        next(i, j) = static_cast<double>(acc % q);
      }
    result = next;
  }
  return result;
}

Matrix binary_power(const Matrix& c, std::size_t e) { return field_power(c, e, 2); }

EncodingPlan build_udm_matvec(const UdmOptions& options, std::size_t workers) {
  const std::size_t k = options.field_degree;
  const std::size_t q = options.field_base;
  const Matrix c = udm_companion(k, q);
  std::size_t order = 1;
  for (std::size_t i = 0; i < k; ++i) order *= q;
  --order;
  const std::size_t rows = options.poly_rows;
  if (rows == 0) throw ConfigError("udm poly_rows must be >= 1");
  if (workers == 0 || workers > order) {
    throw ConfigError("udm over GF(" + str(q) + "^" + str(k) + ") supports 1.." +
                      str(order) + " workers");
  }
  if (!options.derivative) require_workers(workers, rows, "udm_matvec");
  if (options.derivative && 2 * workers < rows)
    throw ConfigError("udm_matvec with derivatives needs 2N >= poly_rows");

  SchemeParams params;
  params.kind = SchemeKind::UdmMatvec;
  params.workers = workers;
  params.udm = options;
  const std::size_t m = rows * k;
  EncodingPlan plan = matvec_skeleton(params, m);

  // Powers of the companion matrix, C^0..C^(order-1).
  std::vector<Matrix> powers;
  powers.reserve(order);
  for (std::size_t e = 0; e < order; ++e) powers.push_back(field_power(c, e, q));

  // Worker j evaluates at alpha_j = C^j. Block (i, j) of the evaluation
  // column is alpha_j^i; of the derivative column it is (i mod q) alpha_j^(i-1),
  // reduced mod q and then read as a real matrix.
  std::vector<std::vector<std::vector<double>>> per_worker(workers);
  for (std::size_t j = 0; j < workers; ++j) {
    auto emit = [&](bool derivative) {
      for (std::size_t col = 0; col < k; ++col) {
        std::vector<double> coeff(m, 0.0);
        for (std::size_t i = 0; i < rows; ++i) {
          const std::size_t scale = derivative ? i % q : 1;
          if (scale == 0) continue;
          const std::size_t e = derivative ? (j * (i - 1)) % order : (j * i) % order;
          const Matrix& block = powers[e];
          for (std::size_t r = 0; r < k; ++r)
            coeff[i * k + r] = std::fmod(scale * block(r, col), static_cast<double>(q));
        }
        per_worker[j].push_back(std::move(coeff));
      }
    };
    emit(false);
    if (options.derivative) emit(true);
  }
  fill_matvec_tasks(plan, per_worker);
  plan.strategy = DecodeStrategy::Dense;
  plan.task_group = k;
  if (options.derivative) {
    plan.threshold = (rows + 1) / 2;
    plan.threshold2 = rows;
  } else {
    plan.threshold = rows;
  }
  return finalize_plan(std::move(plan));
}

EncodingPlan build_conv_matvec(std::size_t m, std::size_t workers,
                               const ConvOptions& options, std::uint64_t seed) {
  const std::size_t inputs = options.inputs;
  if (inputs == 0) throw ConfigError("conv_matvec needs at least one input");
  if (m == 0 || m % inputs != 0) {
    throw ConfigError("conv_matvec needs m divisible by the number of inputs (" +
                      str(inputs) + "), got m=" + str(m));
  }
  const std::size_t b = options.blocks_per_input ? options.blocks_per_input
                                                 : m / inputs;
  if (b * inputs != m)
    throw ConfigError("conv_matvec: blocks_per_input * inputs must equal m");
  require_workers(workers, inputs, "conv_matvec");

  SchemeParams params;
  params.kind = SchemeKind::ConvMatvec;
  params.workers = workers;
  params.seed = seed;
  params.conv = options;
  params.conv.blocks_per_input = b;
  EncodingPlan plan = matvec_skeleton(params, m);

  // Generator [I | parity], parity column l has D^(i*l) in row i. With two
  // inputs and four workers this is [1 0 1 1; 0 1 1 D].
  SplitMix64 rng(split_seed(seed, 0));
  std::vector<std::vector<std::vector<double>>> per_worker(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    if (w < inputs) {
      for (std::size_t s = 0; s < b; ++s) {
        std::vector<double> coeff(m, 0.0);
        coeff[w * b + s] = 1.0;
        per_worker[w].push_back(std::move(coeff));
      }
      continue;
    }
    const std::size_t l = w - inputs;
    const std::size_t length = b + (inputs - 1) * l;
    for (std::size_t power = 0; power < length; ++power) {
      std::vector<double> coeff(m, 0.0);
      for (std::size_t i = 0; i < inputs; ++i) {
        const std::size_t shift = i * l;
        if (power < shift || power - shift >= b) continue;
        coeff[i * b + (power - shift)] = 1.0;
      }
      per_worker[w].push_back(std::move(coeff));
    }
  }
  if (options.mode == ConvMode::Random) {
    for (auto& blocks : per_worker)
      for (auto& coeff : blocks)
        for (double& v : coeff)
          if (v != 0.0) v *= rng.uniform(0.5, 1.5);
  }
  fill_matvec_tasks(plan, per_worker);
  plan.strategy = options.mode == ConvMode::Ones ? DecodeStrategy::Peeling
                                                 : DecodeStrategy::LeastSquares;
  plan.threshold = inputs;
  return finalize_plan(std::move(plan));
}

DegreeDistribution DegreeDistribution::robust_soliton(std::size_t m, double c,
                                                      double delta) {
  if (m == 0) throw ConfigError("robust soliton needs m >= 1");
  if (!(c > 0.0) || !(delta > 0.0) || !(delta < 1.0))
    throw ConfigError("robust soliton needs c > 0 and 0 < delta < 1");
  const double k = static_cast<double>(m);
  const double spike_r = c * std::log(k / delta) * std::sqrt(k);
  std::vector<double> mu(m, 0.0);
  // Ideal soliton rho plus the robust correction tau.
  mu[0] = 1.0 / k;
  for (std::size_t d = 2; d <= m; ++d)
    mu[d - 1] = 1.0 / (static_cast<double>(d) * static_cast<double>(d - 1));
  const auto pivot = static_cast<std::size_t>(std::llround(k / spike_r));
  for (std::size_t d = 1; d <= m; ++d) {
    if (d < pivot) {
      mu[d - 1] += spike_r / (static_cast<double>(d) * k);
    } else if (d == pivot) {
      mu[d - 1] += spike_r * std::log(spike_r / delta) / k;
    }
  }
  const double total = std::accumulate(mu.begin(), mu.end(), 0.0);
  for (double& v : mu) v /= total;
  return DegreeDistribution{std::move(mu)};
}

DegreeDistribution DegreeDistribution::point_mass(std::size_t m,
                                                  std::size_t degree) {
  if (degree == 0 || degree > m)
    throw ConfigError("point mass degree must lie in 1..m");
  std::vector<double> probs(m, 0.0);
  probs[degree - 1] = 1.0;
  return DegreeDistribution{std::move(probs)};
}

void DegreeDistribution::validate(std::size_t m) const {
  if (probs.size() != m)
    throw ConfigError("degree distribution must have one entry per degree 1..m");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw ConfigError("degree probabilities must be finite and non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ConfigError("degree probabilities must sum to 1");
}

std::vector<std::size_t> fountain_combination(const DegreeDistribution& dist,
                                              std::size_t m, std::uint64_t seed,
                                              std::size_t index) {
  SplitMix64 rng(split_seed(seed, index));
  const double u = rng.uniform();
  std::size_t degree = m;
  double cdf = 0.0;
  for (std::size_t d = 1; d <= m; ++d) {
    cdf += dist.probs[d - 1];
    if (u < cdf) {
      degree = d;
      break;
    }
  }
  // Partial Fisher-Yates draws `degree` distinct block indices.
  std::vector<std::size_t> pool(m);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < degree; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(m - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<std::size_t> chosen(pool.begin(), pool.begin() + degree);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

EncodingPlan build_fountain_matvec(std::size_t m, const FountainOptions& options,
                                   std::uint64_t seed, std::size_t workers) {
  if (m == 0) throw ConfigError("fountain_matvec needs m >= 1");
  if (workers == 0) throw ConfigError("fountain_matvec needs at least one worker");
  if (!(options.max_overhead >= 1.0))
    throw ConfigError("fountain max_overhead must be >= 1");
  FountainOptions resolved = options;
  if (!resolved.degree_dist) {
    resolved.degree_dist = DegreeDistribution::robust_soliton(
        m, options.soliton_c, options.soliton_delta);
  }
  resolved.degree_dist->validate(m);

  SchemeParams params;
  params.kind = SchemeKind::FountainMatvec;
  params.workers = workers;
  params.seed = seed;
  params.fountain = resolved;
  EncodingPlan plan = matvec_skeleton(params, m);

  const auto stream =
      static_cast<std::size_t>(std::ceil(static_cast<double>(m) * options.max_overhead - 1e-9));
  // Symbol s of the stream goes to worker s mod N as its (s / N)-th task.
  std::vector<std::vector<std::vector<double>>> per_worker(workers);
  for (std::size_t s = 0; s < stream; ++s) {
    std::vector<double> coeff(m, 0.0);
    for (std::size_t i : fountain_combination(*resolved.degree_dist, m, seed, s))
      coeff[i] = 1.0;
    per_worker[s % workers].push_back(std::move(coeff));
  }
  fill_matvec_tasks(plan, per_worker);
  plan.strategy = DecodeStrategy::Peeling;
  return finalize_plan(std::move(plan));
}

EncodingPlan build_poly_matmul(std::size_t m, std::size_t n, std::size_t workers,
                               std::vector<double> eval_points) {
  if (m == 0 || n == 0) throw ConfigError("poly_matmul needs m, n >= 1");
  require_workers(workers, m * n, "poly_matmul");
  SchemeParams params;
  params.kind = SchemeKind::PolyMatmul;
  params.p = 1;
  params.m = m;
  params.n = n;
  params.workers = workers;
  params.eval_points = std::move(eval_points);
  std::vector<std::size_t> a_exp(m), b_exp(n);
  std::vector<std::string> a_names(m), b_names(n);
  for (std::size_t j = 0; j < m; ++j) {
    a_exp[j] = j;
    a_names[j] = "A" + str(j);
  }
  for (std::size_t j = 0; j < n; ++j) {
    b_exp[j] = j * m;
    b_names[j] = "B" + str(j);
  }
  std::vector<std::vector<std::size_t>> useful(m, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) useful[i][j] = i + j * m;
  return finalize_plan(polynomial_product_plan(params, m, n, a_exp, b_exp,
                                               useful, a_names, b_names));
}

EncodingPlan build_matdot(std::size_t p, std::size_t workers,
                          std::vector<double> eval_points) {
  if (p == 0) throw ConfigError("matdot needs p >= 1");
  require_workers(workers, 2 * p - 1, "matdot");
  SchemeParams params;
  params.kind = SchemeKind::MatDot;
  params.p = p;
  params.m = 1;
  params.n = 1;
  params.workers = workers;
  params.eval_points = std::move(eval_points);
  std::vector<std::size_t> a_exp(p), b_exp(p);
  std::vector<std::string> a_names(p), b_names(p);
  for (std::size_t i = 0; i < p; ++i) {
    a_exp[i] = p - 1 - i;
    b_exp[i] = i;
    a_names[i] = "A" + str(i);
    b_names[i] = "B" + str(i);
  }
  return finalize_plan(polynomial_product_plan(params, 1, 1, a_exp, b_exp,
                                               {{p - 1}}, a_names, b_names));
}

EncodingPlan build_entangled(std::size_t p, std::size_t m, std::size_t n,
                             std::size_t workers,
                             std::vector<double> eval_points) {
  if (p == 0 || m == 0 || n == 0)
    throw ConfigError("entangled needs p, m, n >= 1");
  require_workers(workers, p * m * n + p - 1, "entangled");
  SchemeParams params;
  params.kind = SchemeKind::Entangled;
  params.p = p;
  params.m = m;
  params.n = n;
  params.workers = workers;
  params.eval_points = std::move(eval_points);
  // Source blocks are indexed row-major: A_{k,j} -> k*m + j, B_{k,l} -> k*n + l.
  std::vector<std::size_t> a_exp(p * m), b_exp(p * n);
  std::vector<std::string> a_names(p * m), b_names(p * n);
  for (std::size_t k = 0; k < p; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      a_exp[k * m + j] = k + p * j;
      a_names[k * m + j] = "A" + str(k) + str(j);
    }
    for (std::size_t l = 0; l < n; ++l) {
      b_exp[k * n + l] = p - 1 - k + p * m * l;
      b_names[k * n + l] = "B" + str(k) + str(l);
    }
  }
  std::vector<std::vector<std::size_t>> useful(m, std::vector<std::size_t>(n));
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t l = 0; l < n; ++l) useful[j][l] = p - 1 + p * j + p * m * l;
  return finalize_plan(polynomial_product_plan(params, m, n, a_exp, b_exp,
                                               useful, a_names, b_names));
}

EncodingPlan build_plan(const SchemeParams& params) {
  switch (params.kind) {
    case SchemeKind::Repetition:
      return build_repetition(params.workers);
    case SchemeKind::MdsMatvec:
      return params.generator == GeneratorKind::Random
                 ? build_mds_matvec_random(params.m, params.workers, params.seed)
                 : build_mds_matvec(params.m, params.workers, params.eval_points);
    case SchemeKind::DerivativeMatvec:
      return build_derivative_matvec(params.m, params.workers, params.eval_points);
    case SchemeKind::UdmMatvec:
      return build_udm_matvec(params.udm, params.workers);
    case SchemeKind::ConvMatvec:
      return build_conv_matvec(params.m, params.workers, params.conv, params.seed);
    case SchemeKind::FountainMatvec:
      return build_fountain_matvec(params.m, params.fountain, params.seed,
                                   params.workers);
    case SchemeKind::PolyMatmul:
      return build_poly_matmul(params.m, params.n, params.workers,
                               params.eval_points);
    case SchemeKind::MatDot:
      return build_matdot(params.p, params.workers, params.eval_points);
    case SchemeKind::Entangled:
      return build_entangled(params.p, params.m, params.n, params.workers,
                             params.eval_points);
  }
  throw ConfigError("unhandled scheme kind");
}

}  // namespace ccm
