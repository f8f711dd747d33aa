#include "ccm/serialize.hpp"

#include <cmath>
#include <string>

namespace ccm {

namespace {

// JSON has no infinity; unbounded condition numbers are written as a string.
Json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

std::string mode_name(PatternMode mode) {
  return mode == PatternMode::Subset ? "subset" : "prefix";
}

}  // namespace

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (double v : m.row(r)) row.push_back(number(v));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Json to_json(const CompletionPattern& p) {
  Json j;
  j["mode"] = mode_name(p.mode);
  if (p.mode == PatternMode::Subset) {
    j["workers"] = p.workers;
  } else {
    j["counts"] = p.counts;
  }
  return j;
}

Json to_json(const SchemeParams& params) {
  Json j;
  j["kind"] = std::string(to_string(params.kind));
  j["p"] = params.p;
  j["m"] = params.m;
  j["n"] = params.n;
  j["workers"] = params.workers;
  j["seed"] = params.seed;
  switch (params.kind) {
    case SchemeKind::MdsMatvec:
      j["generator"] = params.generator == GeneratorKind::Random ? "random" : "vandermonde";
      break;
    case SchemeKind::UdmMatvec:
      j["udm"] = {{"field_degree", params.udm.field_degree},
                  {"field_base", params.udm.field_base},
                  {"poly_rows", params.udm.poly_rows},
                  {"derivative", params.udm.derivative}};
      break;
    case SchemeKind::ConvMatvec:
      j["conv"] = {{"inputs", params.conv.inputs},
                   {"blocks_per_input", params.conv.blocks_per_input},
                   {"mode", params.conv.mode == ConvMode::Ones ? "ones" : "random"}};
      break;
    case SchemeKind::FountainMatvec:
      j["fountain"] = {{"soliton_c", params.fountain.soliton_c},
                       {"soliton_delta", params.fountain.soliton_delta},
                       {"max_overhead", params.fountain.max_overhead}};
      break;
    default:
      break;
  }
  return j;
}

Json to_json(const EncodingPlan& plan) {
  Json j;
  j["kind"] = std::string(to_string(plan.params.kind));
  j["params"] = to_json(plan.params);
  j["eval_points"] = plan.params.eval_points;
  Json assignments = Json::array();
  for (const auto& tasks : plan.assignments) {
    Json list = Json::array();
    for (const auto& t : tasks) {
      Json task = {{"worker", t.worker}, {"seq", t.seq}, {"a_index", t.a_index}};
      task["b_index"] = t.b_index ? Json(*t.b_index) : Json("x");
      list.push_back(std::move(task));
    }
    assignments.push_back(std::move(list));
  }
  j["assignments"] = std::move(assignments);
  j["coeffA"] = to_json(plan.coeff_a);
  j["coeffB"] = plan.coeff_b ? to_json(*plan.coeff_b) : Json(nullptr);
  Json gamma;
  gamma["A"] = Json::array();
  for (const auto& g : plan.gamma_a) gamma["A"].push_back(to_json(g));
  gamma["B"] = Json::array();
  for (const auto& g : plan.gamma_b) gamma["B"].push_back(to_json(g));
  j["gamma"] = std::move(gamma);
  Json unknowns = Json::array();
  for (const auto& u : plan.unknowns) unknowns.push_back(u.label);
  j["unknowns"] = std::move(unknowns);
  j["decode_strategy"] = std::string(to_string(plan.strategy));
  j["threshold"] = plan.threshold ? Json(*plan.threshold) : Json(nullptr);
  j["threshold2"] = plan.threshold2 ? Json(*plan.threshold2) : Json(nullptr);
  j["task_group"] = plan.task_group;
  return j;
}

Json to_json(const ConditionReport& report) {
  Json j;
  j["mode"] = mode_name(report.mode);
  j["budget"] = report.budget;
  j["worst"] = number(report.worst);
  j["argmax_pattern"] = to_json(report.argmax);
  j["patterns_total"] = report.patterns_total;
  j["patterns_evaluated"] = report.patterns_evaluated;
  j["sampled"] = report.sampled;
  j["label"] = report.label;
  if (!report.per_pattern.empty()) {
    Json rows = Json::array();
    for (const auto& pc : report.per_pattern)
      rows.push_back({{"pattern", to_json(pc.pattern)}, {"condition", number(pc.condition)}});
    j["per_pattern"] = std::move(rows);
  }
  return j;
}

Json to_json(const ThresholdReport& report) {
  Json j;
  j["mode"] = mode_name(report.mode);
  j["budget"] = report.budget;
  j["holds"] = report.holds;
  j["patterns_checked"] = report.patterns_checked;
  j["counterexample"] =
      report.counterexample ? to_json(*report.counterexample) : Json(nullptr);
  j["counterexample_rank"] =
      report.counterexample_rank ? Json(*report.counterexample_rank) : Json(nullptr);
  return j;
}

Json to_json(const LoadReport& report) {
  auto list = [](const std::vector<Rational>& v) {
    Json a = Json::array();
    for (const auto& r : v) a.push_back(to_json(r));
    return a;
  };
  return {{"gamma_a", list(report.gamma_a)},
          {"gamma_b", list(report.gamma_b)},
          {"comp_fraction", list(report.comp_fraction)},
          {"comm_load", list(report.comm_load)}};
}

Json to_json(const SimReport& report) {
  Json j;
  j["decodable"] = report.decodable;
  j["decode_time"] = report.decode_time ? number(*report.decode_time) : Json(nullptr);
  j["used_pattern"] = to_json(report.used_pattern);
  j["straggler_set"] = report.straggler_set;
  j["final_rank"] = report.final_rank;
  j["rank_deficit"] = report.rank_deficit;
  j["decoded_ok"] = report.decoded_ok;
  j["residual"] = report.residual ? number(*report.residual) : Json(nullptr);
  Json events = Json::array();
  for (const auto& e : report.events)
    events.push_back({{"worker", e.worker}, {"seq", e.seq},
                      {"time", number(e.time)}, {"used", e.used}});
  j["events"] = std::move(events);
  return j;
}

Json to_json(const BatchSummary& s) {
  Json j;
  j["trials"] = s.trials;
  j["decoded"] = s.decoded;
  j["mean"] = number(s.mean);
  j["p50"] = number(s.p50);
  j["p90"] = number(s.p90);
  j["p99"] = number(s.p99);
  j["min"] = number(s.min);
  j["max"] = number(s.max);
  j["mean_stragglers"] = s.mean_stragglers;
  j["straggler_histogram"] = s.straggler_histogram;
  return j;
}

void write_condition_csv(std::ostream& out, const ConditionReport& report) {
  out << "index,pattern,condition\n";
  for (std::size_t i = 0; i < report.per_pattern.size(); ++i) {
    const auto& pc = report.per_pattern[i];
    out << i << ",\"" << describe(pc.pattern) << "\",";
    if (std::isinf(pc.condition)) {
      out << "inf";
    } else {
      out << pc.condition;
    }
    out << '\n';
  }
}

void write_trace_header(std::ostream& out) {
  out << "trial,worker,seq,timestamp,used\n";
}

void write_trace_csv(std::ostream& out, const SimReport& report, std::size_t trial) {
  for (const auto& e : report.events)
    out << trial << ',' << e.worker << ',' << e.seq << ',' << e.time << ','
        << (e.used ? 1 : 0) << '\n';
}

}  // namespace ccm
