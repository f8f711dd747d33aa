#pragma once

#include <ostream>

#include <json.hpp>

#include "ccm/analysis.hpp"
#include "ccm/pattern.hpp"
#include "ccm/scheme.hpp"
#include "ccm/sim.hpp"

namespace ccm {

using Json = nlohmann::ordered_json;

Json to_json(const Matrix& m);  // row-major nested arrays
Json to_json(const Rational& r);  // "p/q"
Json to_json(const CompletionPattern& p);
Json to_json(const SchemeParams& params);
/// {kind, params, eval_points, assignments, coeffA, coeffB, gamma}
Json to_json(const EncodingPlan& plan);
Json to_json(const ConditionReport& report);
Json to_json(const ThresholdReport& report);
Json to_json(const LoadReport& report);
/// The result matrix itself is left out; it goes to a CMX1 file.
Json to_json(const SimReport& report);
Json to_json(const BatchSummary& summary);

/// One row per enumerated pattern: index,pattern,condition.
void write_condition_csv(std::ostream& out, const ConditionReport& report);
/// Columns trial,worker,seq,timestamp,used.
void write_trace_header(std::ostream& out);
void write_trace_csv(std::ostream& out, const SimReport& report, std::size_t trial);

}  // namespace ccm
