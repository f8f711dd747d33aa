// Python bindings. Reports cross the boundary as JSON text and are parsed
// on the Python side; matrices cross as float64 numpy arrays.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ccm/analysis.hpp"
#include "ccm/decoder.hpp"
#include "ccm/error.hpp"
#include "ccm/serialize.hpp"
#include "ccm/sim.hpp"
#include "config.hpp"

namespace py = pybind11;
using namespace ccm;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a) {
  if (a.ndim() == 1) {
    const auto n = static_cast<std::size_t>(a.shape(0));
    return Matrix(n, 1, std::vector<double>(a.data(), a.data() + n));
  }
  if (a.ndim() != 2) throw DimensionError("expected a 1-D or 2-D array");
  const auto r = static_cast<std::size_t>(a.shape(0));
  const auto c = static_cast<std::size_t>(a.shape(1));
  return Matrix(r, c, std::vector<double>(a.data(), a.data() + r * c));
}

Array to_array(const Matrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

PatternMode mode_of(const std::string& mode) {
  if (mode == "subset") return PatternMode::Subset;
  if (mode == "prefix") return PatternMode::Prefix;
  throw ConfigError("mode must be \"subset\" or \"prefix\"");
}

EncodingPlan plan_from_json(const std::string& scheme) {
  return build_plan(cli::parse_scheme(Json::parse(scheme)));
}

py::tuple multiply(const EncodingPlan& plan, const Array& a, const Array& b,
                   const std::vector<std::size_t>& stragglers) {
  const Matrix am = to_matrix(a), bm = to_matrix(b);
  const auto coded = encode(plan, am, bm);
  std::vector<TaskResult> results;
  for (std::size_t w = 0; w < plan.workers(); ++w) {
    if (std::find(stragglers.begin(), stragglers.end(), w) != stragglers.end()) continue;
    auto r = worker_compute(coded[w], plan.assignments[w]);
    std::move(r.begin(), r.end(), std::back_inserter(results));
  }
  const DecodeOutcome out = decode_detailed(plan, results);
  return py::make_tuple(to_array(out.value), std::string(to_string(out.strategy)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Straggler-resilient coded matrix multiplication";

  static py::exception<Error> base(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(base.ptr(), (std::string(e.name()) + ": " + e.what()).c_str());
    }
  });

  py::class_<EncodingPlan>(m, "Plan")
      .def_property_readonly("workers", &EncodingPlan::workers)
      .def_property_readonly("total_tasks", &EncodingPlan::total_tasks)
      .def_property_readonly("unknowns", &EncodingPlan::unknown_count)
      .def_property_readonly("threshold", [](const EncodingPlan& p) { return p.threshold; })
      .def_property_readonly("threshold2", [](const EncodingPlan& p) { return p.threshold2; })
      .def_property_readonly("task_rows", [](const EncodingPlan& p) { return to_array(p.task_rows); })
      .def("to_json", [](const EncodingPlan& p) { return to_json(p).dump(); });

  m.def("build_plan", &plan_from_json, py::arg("scheme_json"),
        "Plan from a JSON scheme section, e.g. {\"kind\": \"matdot\", \"p\": 2, \"workers\": 5}");
  m.def("multiply", &multiply, py::arg("plan"), py::arg("a"), py::arg("b"),
        py::arg("stragglers") = std::vector<std::size_t>{},
        "Encode, compute on the non-straggling workers and decode A^T B");
  m.def("direct_product", [](const Array& a, const Array& b) {
    return to_array(direct_product(to_matrix(a), to_matrix(b)).value);
  });
  m.def("condition_number", [](const Array& a) { return condition_number(to_matrix(a)); });
  m.def(
      "verify_threshold",
      [](const EncodingPlan& plan, std::size_t budget, const std::string& mode, std::uint64_t guard) {
        const ThresholdReport r = mode_of(mode) == PatternMode::Subset
                                      ? verify_threshold(plan, budget, guard)
                                      : verify_threshold2(plan, budget, guard);
        return to_json(r).dump();
      },
      py::arg("plan"), py::arg("budget"), py::arg("mode") = "subset",
      py::arg("guard") = 1'000'000);
  m.def(
      "worst_case_condition",
      [](const EncodingPlan& plan, std::size_t budget, const std::string& mode,
         std::optional<std::uint64_t> samples, std::uint64_t seed, std::uint64_t guard) {
        EnumerationOptions o;
        o.mode = mode_of(mode);
        o.samples = samples;
        o.seed = seed;
        o.guard = guard;
        py::gil_scoped_release release;
        return to_json(worst_case_condition(plan, budget, o)).dump();
      },
      py::arg("plan"), py::arg("budget"), py::arg("mode") = "subset",
      py::arg("samples") = py::none(), py::arg("seed") = 0, py::arg("guard") = 1'000'000);
  m.def(
      "loads",
      [](const EncodingPlan& plan, std::size_t r, std::size_t t, std::size_t w) {
        return to_json(loads(plan, r, t, w)).dump();
      },
      py::arg("plan"), py::arg("r"), py::arg("t"), py::arg("w"));
  m.def(
      "simulate",
      [](const EncodingPlan& plan, const std::string& delay_json, std::uint64_t seed) {
        const DelayModel d = cli::parse_delay(Json::parse(delay_json));
        return to_json(simulate(plan, std::nullopt, d, seed)).dump();
      },
      py::arg("plan"), py::arg("delay_json"), py::arg("seed") = 0);
  m.def(
      "batch_simulate",
      [](const EncodingPlan& plan, const std::string& delay_json, std::size_t trials,
         std::uint64_t seed) {
        const DelayModel d = cli::parse_delay(Json::parse(delay_json));
        py::gil_scoped_release release;
        return to_json(batch_simulate(plan, d, trials, seed)).dump();
      },
      py::arg("plan"), py::arg("delay_json"), py::arg("trials"), py::arg("seed") = 0);
}
