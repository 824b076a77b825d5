// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "random_batch.hpp"
#include "syncperf/analysis.hpp"
#include "syncperf/cli.hpp"
#include "syncperf/cost_model.hpp"
#include "syncperf/data_io.hpp"
#include "syncperf/emulator.hpp"
#include "syncperf/fixtures.hpp"
#include "syncperf/recommender.hpp"

using namespace syncperf;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string cli(const std::vector<std::string>& args, int* code = nullptr,
                const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int c = run_cli(args, in, out, err);
  if (code) *code = c;
  return out.str();
}

double stddev_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

Outcome switch_points() {
  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  const std::string out = cli({"predict", "--fixtures", "all", "--scenery", "all"}, &code);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  int ok = 0, total = 0;
  double worst = 0.0;
  for (const char* dev : {"v100", "p100"}) {
    for (const auto& c : fixtures::check_switch_points(dev, 0.015)) {
      ++total;
      ok += c.within;
      worst = std::max(worst, std::abs(c.rel_error));
    }
  }
  const bool pass = code == 0 && ok == 8 && total == 8 && secs < 1.0 &&
                    out.find("reported 9076 B") != std::string::npos;
  return {pass, std::to_string(ok) + "/" + std::to_string(total) + ", worst " +
                    format_number(worst * 100.0) + "%, predict " + format_number(secs * 1e3) +
                    " ms"};
}

Outcome concurrency() {
  int ok = 0, total = 0;
  double worst = 0.0;
  for (const char* dev : {"v100", "p100"}) {
    for (const auto& c : fixtures::check_concurrency(dev, 0.02)) {
      ++total;
      ok += c.within;
      worst = std::max(worst, std::abs(c.rel_error));
    }
  }
  return {ok == 8 && total == 8,
          std::to_string(ok) + "/" + std::to_string(total) + ", worst " +
              format_number(worst * 100.0) + "%"};
}

Outcome decision_consistency() {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> t(1.0, 1000.0), thr(0.01, 100.0), ratio(1.0001, 200.0),
      sync(0.001, 5000.0), scale(0.0, 3.0);
  const int trials = 10000;
  int agree = 0;
  for (int k = 0; k < trials; ++k) {
    const double tt = t(rng), tb = thr(rng), tm = tb * ratio(rng), ts = sync(rng);
    const auto basic = CostPoint::derive("b", tt, tb);
    const auto more = CostPoint::derive("m", tt, tm);
    const SyncCost s{SyncLevel::kBlock, ts, 1};
    const double n = scale(rng) * std::max({more.concurrency_bytes, ts * tm, 1.0});
    const bool direct = tt + std::max(0.0, n - tt * tb) / tb <
                        tt + ts + std::max(0.0, n - tt * tm) / tm;
    agree += fewer_workers_by_threshold(n, basic, more, s) == direct;
  }
  return {agree == trials, std::to_string(agree) + "/" + std::to_string(trials) + " agree"};
}

FusionExperiment fusion_of(const MeasurementBatch& b, int i, int j) {
  FusionExperiment e{i, j, {}, {}};
  for (const auto& x : b.experiments) {
    const auto& p = std::get<FusionArm>(x.params);
    (p.launches == i && p.wait_units == j ? e.latency_ij : e.latency_ji) = x.samples;
  }
  return e;
}

Outcome launch_overhead_recovery() {
  EmulatedDevice dev = emulated_v100();
  double worst = 0.0;
  for (int i = 1; i <= 10; ++i) {
    for (int j = 1; j <= 10; ++j) {
      if (i == j) continue;
      const double o = launch_overhead(fusion_of(generate_fusion_batch(dev, i, j, 1), i, j)).value;
      worst = std::max(worst, std::abs(o - 1081.0) / 1081.0);
    }
  }
  dev.noise_sigma = 200.0;
  std::vector<double> est;
  for (int t = 0; t < 10000; ++t) {
    dev.seed = static_cast<std::uint64_t>(t);
    est.push_back(launch_overhead(fusion_of(generate_fusion_batch(dev, 5, 1, 1), 5, 1)).value);
  }
  const double predicted = std::sqrt(2.0 * 200.0 * 200.0) / 4.0;
  const double ratio = stddev_of(est) / predicted;
  return {worst <= 1e-9 && std::abs(ratio - 1.0) <= 0.1,
          "max rel error " + format_number(worst) + ", Monte-Carlo/predicted spread " +
              format_number(ratio)};
}

Outcome instruction_latency_recovery() {
  EmulatedDevice dev = emulated_v100();
  const auto exact = analyze_batch(generate_repeatdiff_batch(dev, "fadd", 256, 32, 1));
  const double fadd = exact.instruction_latencies.at(0).latency.value;
  dev.noise_sigma = 20.0;
  std::vector<double> est;
  double predicted = 0.0;
  for (int t = 0; t < 10000; ++t) {
    dev.seed = static_cast<std::uint64_t>(t) + 500000;
    const auto b = generate_repeatdiff_batch(dev, "fadd", 64, 32, 4);
    const auto e = instruction_latency(
        {64, 32, b.experiments[0].samples, b.experiments[1].samples, Reducer::kMean});
    est.push_back(e.value);
    predicted += *e.standard_error;
  }
  predicted /= 10000.0;
  const double ratio = stddev_of(est) / predicted;
  return {fadd == 4.0 && std::abs(ratio - 1.0) <= 0.1,
          "fadd " + format_number(fadd) + " cycles, Monte-Carlo/predicted spread " +
              format_number(ratio)};
}

Outcome reduction_advice() {
  auto choose = [](const char* scenery, std::uint64_t bytes) {
    ReductionQuery q;
    q.input_bytes = bytes;
    q.device = fixtures::v100_profile();
    for (const auto& s : fixtures::cost_table("v100")) {
      if (s.scenery == scenery) q.candidates = s.candidates;
    }
    return recommend_reduction_config(q);
  };
  const auto warp = choose("1", 32 * 8);
  const auto block = choose("2", 1024 * 8);
  return {warp.chosen == "1 warp" && block.chosen == "32 threads" && 8192.0 < *block.n_l,
          "32 doubles -> " + warp.chosen + ", 1024 doubles -> " + block.chosen + " (8192 B < " +
              format_number(*block.n_l) + " B)"};
}

Outcome barrier_advice() {
  const auto table = fixtures::barrier_table();
  BarrierQuery one;
  const auto r1 = recommend_barrier(one, table);
  BarrierQuery eight;
  eight.gpu_count = 8;
  const auto r8 = recommend_barrier(eight, table);
  const bool pass = r1.chosen == BarrierMechanism::kImplicitLaunch && r1.margin_ns <= 2500.0 &&
                    r8.chosen == BarrierMechanism::kCpuSide &&
                    std::abs(r8.margin_ns - 16000.0) <= 1600.0 && r8.multi_grid_within_slack &&
                    r8.rationale.find("within 3x slack") != std::string::npos;
  return {pass, "1 GPU: implicit_launch by " + format_number(r1.margin_ns) +
                    " ns; 8 GPUs: cpu_side by " + format_number(r8.margin_ns) +
                    " ns, multi_grid " + format_number(r8.multi_grid_ratio.value_or(0.0)) + "x"};
}

Outcome fuzz_round_trips() {
  std::mt19937_64 rng(8);
  int failures = 0;
  for (int k = 0; k < 100; ++k) {
    const auto b = syncperf::testing::random_batch(rng);
    const std::string text = write_measurements(b);
    failures += !(parse_measurements(text) == b) || write_measurements(parse_measurements(text)) != text;
    failures += !(parse_measurements(write_measurements_structured(b)) == b);

    const auto dev = syncperf::testing::random_device(rng);
    failures += !(parse_emulated_device(write_emulated_device(dev)) == dev);
    failures += write_measurements(generate_suite(dev, 2)) != write_measurements(generate_suite(dev, 2));

    const std::vector<std::string> args = {"emulate", "--seed", std::to_string(rng() % 1000),
                                           "--sigma", std::to_string(rng() % 100), "--runs", "3"};
    const std::string a = cli(args);
    failures += a != cli(args) || write_measurements(parse_measurements(a)) != a;
    const std::vector<std::string> rec = {"recommend", "--kind", "reduction", "--bytes",
                                          std::to_string(rng() % 100000), "--format", "structured"};
    failures += cli(rec) != cli(rec);
  }
  return {failures == 0, std::to_string(failures) + " failures over 100 cases x 6 properties"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"switch points reproduced within 1.5%", switch_points},
      {"concurrency reproduced within 2%", concurrency},
      {"threshold decision equals direct cost comparison", decision_consistency},
      {"launch overhead recovery from emulated fusion arms", launch_overhead_recovery},
      {"instruction latency recovery from emulated repeat arms", instruction_latency_recovery},
      {"reduction advice for 32 and 1024 doubles", reduction_advice},
      {"barrier advice on one and eight GPUs", barrier_advice},
      {"round-trip and determinism fuzz (data-io, emulator, cli)", fuzz_round_trips},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %s  [%s]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
