#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "ccm/error.hpp"
#include "ccm/rng.hpp"

namespace ccm::cli {

namespace {

/// Reads keys from one JSON object and rejects whatever it did not read.
class Fields {
 public:
  Fields(const Json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj.is_object()) throw ConfigError(where_ + " must be an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key);
  }

  const Json& get(const std::string& key) {
    if (!has(key)) throw ConfigError(where_ + "." + key + " is required");
    return obj_.at(key);
  }

  template <class T>
  T value(const std::string& key) {
    const Json& v = get(key);
    try {
      if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
          throw ConfigError(where_ + "." + key + " must be a non-negative integer");
      }
      return v.get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(where_ + "." + key + " has the wrong type");
    }
  }

  template <class T>
  void maybe(const std::string& key, T& target) {
    if (has(key)) target = value<T>(key);
  }

  template <class T>
  void maybe(const std::string& key, std::optional<T>& target) {
    if (has(key)) target = value<T>(key);
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key()))
        throw ConfigError("unknown field " + where_ + "." + it.key());
  }

 private:
  const Json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

PatternMode parse_mode(const std::string& text, const std::string& where) {
  if (text == "subset") return PatternMode::Subset;
  if (text == "prefix") return PatternMode::Prefix;
  throw ConfigError(where + " must be \"subset\" or \"prefix\"");
}

}  // namespace

SchemeParams parse_scheme(const Json& j) {
  Fields f(j, "scheme");
  SchemeParams s;
  s.kind = scheme_kind_from_string(f.value<std::string>("kind"));
  f.maybe("p", s.p);
  f.maybe("m", s.m);
  f.maybe("n", s.n);
  f.maybe("workers", s.workers);
  f.maybe("eval_points", s.eval_points);
  if (f.has("generator")) {
    const auto g = f.value<std::string>("generator");
    if (g == "vandermonde") s.generator = GeneratorKind::Vandermonde;
    else if (g == "random") s.generator = GeneratorKind::Random;
    else throw ConfigError("scheme.generator must be \"vandermonde\" or \"random\"");
  }
  if (f.has("udm")) {
    Fields u(f.get("udm"), "scheme.udm");
    u.maybe("field_degree", s.udm.field_degree);
    u.maybe("field_base", s.udm.field_base);
    u.maybe("poly_rows", s.udm.poly_rows);
    u.maybe("derivative", s.udm.derivative);
    u.finish();
  }
  if (f.has("conv")) {
    Fields c(f.get("conv"), "scheme.conv");
    c.maybe("inputs", s.conv.inputs);
    c.maybe("blocks_per_input", s.conv.blocks_per_input);
    if (c.has("mode")) {
      const auto mode = c.value<std::string>("mode");
      if (mode == "ones") s.conv.mode = ConvMode::Ones;
      else if (mode == "random") s.conv.mode = ConvMode::Random;
      else throw ConfigError("scheme.conv.mode must be \"ones\" or \"random\"");
    }
    c.finish();
  }
  if (f.has("fountain")) {
    Fields fo(f.get("fountain"), "scheme.fountain");
    fo.maybe("soliton_c", s.fountain.soliton_c);
    fo.maybe("soliton_delta", s.fountain.soliton_delta);
    fo.maybe("max_overhead", s.fountain.max_overhead);
    if (fo.has("degree_probs"))
      s.fountain.degree_dist = DegreeDistribution{fo.value<std::vector<double>>("degree_probs")};
    fo.finish();
  }
  f.finish();
  return s;
}

DelayModel parse_delay(const Json& j) {
  Fields f(j, "simulate.delay");
  const auto kind = f.value<std::string>("kind");
  DelayModel d;
  if (kind == "deterministic") {
    // null marks a task that never completes
    std::vector<std::vector<double>> rows;
    for (const Json& row : f.get("durations")) {
      if (!row.is_array()) throw ConfigError("simulate.delay.durations must be a list of lists");
      std::vector<double> r;
      for (const Json& v : row) {
        if (v.is_null()) r.push_back(std::numeric_limits<double>::infinity());
        else if (v.is_number()) r.push_back(v.get<double>());
        else throw ConfigError("durations must be numbers or null");
      }
      rows.push_back(std::move(r));
    }
    d = DelayModel::deterministic(std::move(rows));
  } else if (kind == "exponential") {
    d = DelayModel::exponential(f.value<double>("rate"));
  } else if (kind == "shifted_exponential") {
    d = DelayModel::shifted_exponential(f.value<double>("shift"), f.value<double>("rate"));
  } else {
    throw ConfigError("simulate.delay.kind must be deterministic, exponential or "
                      "shifted_exponential");
  }
  f.maybe("failure_prob", d.failure_prob);
  f.maybe("failed_workers", d.failed_workers);
  f.finish();
  d.validate();
  return d;
}

ExperimentConfig parse_config(const Json& doc) {
  Fields top(doc, "config");
  if (!top.has("version")) throw ConfigError("config.version is required");
  const Json& version = top.get("version");
  if (!version.is_number_integer() || version.get<int>() != kConfigVersion)
    throw ConfigError("unsupported config version (expected " +
                      std::to_string(kConfigVersion) + ")");
  ExperimentConfig cfg;
  top.maybe("seed", cfg.seed);
  cfg.scheme = parse_scheme(top.get("scheme"));
  if (top.has("payload")) {
    Fields p(top.get("payload"), "payload");
    PayloadConfig pc;
    p.maybe("a", pc.a_path);
    p.maybe("b", pc.b_path);
    if (pc.a_path.has_value() != pc.b_path.has_value())
      throw ConfigError("payload.a and payload.b must be given together");
    if (!pc.a_path) {
      pc.r = p.value<std::size_t>("r");
      pc.t = p.value<std::size_t>("t");
      pc.w = p.value<std::size_t>("w");
      if (pc.r == 0 || pc.t == 0 || pc.w == 0)
        throw ConfigError("payload dimensions must be >= 1");
    }
    p.finish();
    cfg.payload = pc;
  }
  if (top.has("verify")) {
    Fields v(top.get("verify"), "verify");
    if (v.has("mode")) cfg.verify.mode = parse_mode(v.value<std::string>("mode"), v.path("mode"));
    v.maybe("budget", cfg.verify.budget);
    v.maybe("guard", cfg.verify.guard);
    v.finish();
  }
  if (top.has("cond")) {
    Fields c(top.get("cond"), "cond");
    if (c.has("mode")) cfg.cond.mode = parse_mode(c.value<std::string>("mode"), c.path("mode"));
    c.maybe("budget", cfg.cond.budget);
    c.maybe("guard", cfg.cond.guard);
    c.maybe("samples", cfg.cond.samples);
    c.maybe("per_pattern", cfg.cond.per_pattern);
    c.finish();
  }
  if (top.has("simulate")) {
    Fields s(top.get("simulate"), "simulate");
    cfg.simulate.delay = parse_delay(s.get("delay"));
    s.maybe("trials", cfg.simulate.trials);
    s.maybe("trace", cfg.simulate.trace_path);
    if (cfg.simulate.trials == 0) throw ConfigError("simulate.trials must be >= 1");
    s.finish();
  }
  if (top.has("multiply")) {
    Fields m(top.get("multiply"), "multiply");
    m.maybe("stragglers", cfg.stragglers);
    m.finish();
  }
  if (top.has("output")) {
    Fields o(top.get("output"), "output");
    o.maybe("path", cfg.out);
    o.maybe("format", cfg.format);
    o.finish();
  }
  if (cfg.format != "json" && cfg.format != "csv")
    throw ConfigError("output.format must be \"json\" or \"csv\"");
  top.finish();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

std::uint64_t derived_seed(std::uint64_t seed, SeedStream stream) {
  return split_seed(seed, static_cast<std::uint64_t>(stream));
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    item = item.substr(first, item.find_last_not_of(" \t") - first + 1);
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size() || item.front() == '-')
      throw ConfigError("not a worker index: \"" + item + "\"");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::string scheme_help() {
  return R"(Scheme kinds (scheme.kind) and their parameters:
  repetition         workers (=3 for the guaranteed instance)
  mds_matvec         m, workers; eval_points or generator="random"
  derivative_matvec  m, workers (2*workers >= m); eval_points
  udm_matvec         workers; udm {field_degree, field_base=2|3, poly_rows, derivative}
  conv_matvec        m, workers; conv {inputs, blocks_per_input, mode=ones|random}
  fountain_matvec    m, workers; fountain {soliton_c, soliton_delta, max_overhead, degree_probs}
  poly_matmul        m, n, workers (>= m*n); eval_points
  matdot             p, workers (>= 2p-1); eval_points
  entangled          p, m, n, workers (>= pmn+p-1); eval_points
Config files are JSON with "version": 1; unknown fields are rejected.
Set CCM_THREADS to cap worker threads (0 = all cores).)";
}

}  // namespace ccm::cli
