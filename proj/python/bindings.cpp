// SPDX-License-Identifier: Apache-2.0

#include <pybind11/gil_safe_call_once.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "syncperf/analysis.hpp"
#include "syncperf/cli.hpp"
#include "syncperf/cost_model.hpp"
#include "syncperf/data_io.hpp"
#include "syncperf/emulator.hpp"
#include "syncperf/error.hpp"
#include "syncperf/fixtures.hpp"
#include "syncperf/recommender.hpp"

namespace py = pybind11;
using namespace syncperf;

namespace {

py::object optional_value(const std::optional<double>& v) {
  return v ? py::cast(*v) : py::none();
}

py::dict estimate_dict(const Estimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["stddev"] = optional_value(e.stddev);
  d["standard_error"] = optional_value(e.standard_error);
  d["negative"] = e.negative;
  return d;
}

std::vector<TimingSample> as_samples(const std::vector<double>& values, ClockDomain domain) {
  std::vector<TimingSample> out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    out.push_back({"arm", domain, values[k], static_cast<int>(k)});
  }
  return out;
}

const CostScenery& scenery_of(const std::vector<CostScenery>& table, const std::string& id) {
  for (const auto& s : table) {
    if (s.scenery == id) return s;
  }
  throw ValidationError("no scenery '" + id + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "GPU synchronization cost model and micro-benchmark analysis.";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result(
      [&]() { return py::exception<Error>(m, "Error", PyExc_ValueError); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string msg = std::string(error_code_name(e.code())) + ": " + e.what();
      py::set_error(error_type.get_stored(), msg.c_str());
    }
  });

  m.def("little_law_concurrency", &little_law_concurrency, py::arg("latency_cycles"),
        py::arg("throughput_bytes_per_cycle"));

  m.def(
      "switch_points",
      [](double latency, double thr_basic, double thr_more, double sync_cycles, int count) {
        const auto basic = CostPoint::derive("basic", latency, thr_basic);
        const auto more = CostPoint::derive("more", latency, thr_more);
        const SyncCost sync{SyncLevel::kBlock, sync_cycles, count};
        py::dict d;
        d["N_m"] = switch_point_between(basic, sync);
        d["N_l"] = optional_value(switch_point_above(basic, more, sync));
        return d;
      },
      py::arg("latency_cycles"), py::arg("thr_basic"), py::arg("thr_more"),
      py::arg("sync_cycles"), py::arg("count") = 1,
      "N_m and N_l for two configurations sharing a start latency.");

  m.def(
      "predict",
      [](const std::string& device) {
        py::list rows;
        for (const auto& c : fixtures::check_switch_points(device)) {
          py::dict d;
          d["device"] = c.device;
          d["scenery"] = c.scenery;
          d["basic"] = c.basic;
          d["more"] = c.more;
          d["threshold"] = c.threshold;
          d["sync_cycles"] = c.sync_cycles;
          d["computed"] = c.computed;
          d["reported"] = c.reported;
          d["rel_error"] = c.rel_error;
          rows.append(d);
        }
        return rows;
      },
      py::arg("device") = "v100", "Switch points from the bundled tables.");

  m.def(
      "recommend_reduction",
      [](std::uint64_t input_bytes, const std::string& device, const std::string& scenery,
         double safety_factor) {
        ReductionQuery q;
        q.input_bytes = input_bytes;
        q.device = fixtures::profile_for(device);
        q.candidates = scenery_of(fixtures::cost_table(device), scenery).candidates;
        q.safety_factor = safety_factor;
        const auto r = recommend_reduction_config(q);
        py::dict d;
        d["chosen"] = r.chosen;
        d["compared_with"] = r.compared_with;
        d["scenario"] = std::string(to_string(r.scenario.kind));
        d["N_m"] = optional_value(r.n_m);
        d["N_l"] = optional_value(r.n_l);
        d["rationale"] = r.rationale;
        return d;
      },
      py::arg("input_bytes"), py::arg("device") = "v100", py::arg("scenery") = "2",
      py::arg("safety_factor") = 1.0);

  m.def(
      "recommend_barrier",
      [](long long iterations, int gpu_count, const std::vector<std::string>& mechanisms,
         double slack) {
        BarrierQuery q;
        q.iterations = iterations;
        q.gpu_count = gpu_count;
        q.slack = slack;
        for (const auto& name : mechanisms) q.mechanisms.push_back(barrier_mechanism_from_string(name));
        const auto r = recommend_barrier(q, fixtures::barrier_table());
        py::dict d;
        d["sufficient_data"] = r.sufficient_data;
        d["chosen"] = r.chosen ? py::cast(std::string(to_string(*r.chosen))) : py::none();
        py::list ranked;
        for (const auto& o : r.ranked) {
          ranked.append(py::make_tuple(std::string(to_string(o.mechanism)), o.total_ns));
        }
        d["ranked"] = ranked;
        d["margin_ns"] = r.margin_ns;
        d["multi_grid_ratio"] = optional_value(r.multi_grid_ratio);
        d["multi_grid_within_slack"] = r.multi_grid_within_slack;
        d["rationale"] = r.rationale;
        return d;
      },
      py::arg("iterations") = 1, py::arg("gpu_count") = 1,
      py::arg("mechanisms") = std::vector<std::string>{}, py::arg("slack") = 3.0);

  m.def(
      "launch_overhead",
      [](int i, int j, const std::vector<double>& latency_ij, const std::vector<double>& latency_ji) {
        return estimate_dict(launch_overhead({i, j, as_samples(latency_ij, ClockDomain::kCpuNs),
                                              as_samples(latency_ji, ClockDomain::kCpuNs)}));
      },
      py::arg("i"), py::arg("j"), py::arg("latency_ij"), py::arg("latency_ji"));

  m.def(
      "instruction_latency",
      [](int r1, int r2, const std::vector<double>& k1, const std::vector<double>& k2,
         const std::string& reducer) {
        return estimate_dict(instruction_latency(
            {r1, r2, as_samples(k1, ClockDomain::kGpuCycles), as_samples(k2, ClockDomain::kGpuCycles),
             reducer == "min" ? Reducer::kMin : Reducer::kMean}));
      },
      py::arg("r1"), py::arg("r2"), py::arg("samples_k1"), py::arg("samples_k2"),
      py::arg("reducer") = "mean");

  m.def(
      "emulate",
      [](const std::string& spec, std::uint64_t seed, double sigma, int runs) {
        EmulatedDevice dev = spec.empty() ? emulated_v100() : parse_emulated_device(spec);
        dev.seed = seed;
        dev.noise_sigma = sigma;
        return write_measurements(generate_suite(dev, runs));
      },
      py::arg("spec") = "", py::arg("seed") = 0, py::arg("sigma") = 0.0, py::arg("runs") = 1,
      "Measurement text for the full emulated suite.");

  m.def(
      "normalize_measurements",
      [](const std::string& text, bool structured) {
        const auto b = parse_measurements(text);
        return structured ? write_measurements_structured(b) : write_measurements(b);
      },
      py::arg("text"), py::arg("structured") = false,
      "Parses measurement text (or JSON) and writes it back in canonical form.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args, const std::string& stdin_text) {
        std::istringstream in(stdin_text);
        std::ostringstream out, err;
        const int code = run_cli(args, in, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), py::arg("stdin") = "", "Returns (exit status, stdout, stderr).");
}
