// SPDX-License-Identifier: Apache-2.0

#include "syncperf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>

#include "syncperf/error.hpp"

namespace syncperf {

ArmSummary summarize(std::span<const double> values, Reducer reducer) {
  ArmSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  s.aggregate = reducer == Reducer::kMin ? *std::min_element(values.begin(), values.end())
                                         : s.mean;
  if (values.size() >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (n - 1.0));
    s.standard_error = *s.stddev / std::sqrt(n);
  }
  return s;
}

namespace {

ClockDomain common_domain(const std::vector<TimingSample>& a, const std::vector<TimingSample>& b) {
  if (a.empty() || b.empty()) throw ValidationError("both arms need at least one sample");
  const ClockDomain d = a.front().clock_domain;
  for (const auto* arm : {&a, &b}) {
    for (const auto& s : *arm) {
      if (s.clock_domain != d) {
        throw Error(ErrorCode::kUnitMismatch,
                    "arms mix clock domains; convert before differencing");
      }
    }
  }
  return d;
}

std::vector<double> values_of(const std::vector<TimingSample>& samples) {
  std::vector<double> v;
  v.reserve(samples.size());
  for (const auto& s : samples) v.push_back(s.value);
  return v;
}

std::optional<double> propagate(const std::optional<double>& a, const std::optional<double>& b,
                                double divisor) {
  if (!a || !b) return std::nullopt;
  return std::sqrt(*a * *a + *b * *b) / std::abs(divisor);
}

// (agg(a) - agg(b)) / divisor with uncertainty carried through.
Estimate difference_estimate(const std::vector<TimingSample>& a,
                             const std::vector<TimingSample>& b, double divisor,
                             Reducer reducer) {
  common_domain(a, b);
  const auto va = values_of(a);
  const auto vb = values_of(b);
  const ArmSummary sa = summarize(va, reducer);
  const ArmSummary sb = summarize(vb, reducer);
  Estimate e;
  e.value = (sa.aggregate - sb.aggregate) / divisor;
  e.stddev = propagate(sa.stddev, sb.stddev, divisor);
  e.standard_error = propagate(sa.standard_error, sb.standard_error, divisor);
  e.negative = e.value < 0.0;
  return e;
}

}  // namespace

double kernel_total_latency(double t1, double t2, double t3, int reps_a, int reps_b) {
  if (!(t1 <= t2 && t2 <= t3)) {
    throw ValidationError("timestamps must be non-decreasing (t1 <= t2 <= t3)");
  }
  if (reps_a < 1) throw ValidationError("reps_a must be at least 1");
  if (reps_b == reps_a) {
    throw Error(ErrorCode::kDegenerateDesign, "reps_b equals reps_a; nothing to difference");
  }
  if (reps_b < reps_a) throw ValidationError("reps_b must exceed reps_a");
  return ((t3 - t2) - (t2 - t1)) / static_cast<double>(reps_b - reps_a);
}

Estimate launch_overhead(const FusionExperiment& exp) {
  if (exp.launches_i <= 0 || exp.wait_units_j <= 0) {
    throw ValidationError("launch and wait-unit counts must be positive");
  }
  if (exp.launches_i == exp.wait_units_j) {
    throw Error(ErrorCode::kDegenerateDesign,
                "i == j: mirrored arms are identical and the overhead cancels out");
  }
  return difference_estimate(exp.latency_ij, exp.latency_ji,
                             static_cast<double>(exp.launches_i - exp.wait_units_j),
                             Reducer::kMean);
}

Estimate instruction_latency(const RepeatDiffExperiment& exp) {
  if (exp.repeats_r1 == exp.repeats_r2) {
    throw Error(ErrorCode::kDegenerateDesign, "r1 == r2: repeat counts must differ");
  }
  if (exp.repeats_r1 < exp.repeats_r2 || exp.repeats_r2 < 1) {
    throw ValidationError("repeat counts must satisfy r1 > r2 >= 1");
  }
  return difference_estimate(exp.samples_k1, exp.samples_k2,
                             static_cast<double>(exp.repeats_r1 - exp.repeats_r2), exp.reducer);
}

SweepEntry peak_throughput(std::span<const SweepEntry> sweep) {
  if (sweep.empty()) throw ValidationError("empty throughput sweep");
  auto better = [](const SweepEntry& a, const SweepEntry& b) {
    if (a.throughput != b.throughput) return a.throughput > b.throughput;
    if (a.config.total_threads() != b.config.total_threads()) {
      return a.config.total_threads() < b.config.total_threads();
    }
    return a.config < b.config;
  };
  return *std::min_element(sweep.begin(), sweep.end(), better);
}

double saturation_threshold_ns(int gpu_count) {
  if (gpu_count < 1) throw ValidationError("gpu_count must be at least 1");
  constexpr double kSingleNs = 5'000.0;
  constexpr double kEightNs = 250'000.0;
  const int g = std::min(gpu_count, 8);
  return kSingleNs + (g - 1) * (kEightNs - kSingleNs) / 7.0;
}

bool saturation_check(double kernel_exec_latency_ns, int gpu_count) {
  if (!(kernel_exec_latency_ns >= 0.0)) {
    throw ValidationError("kernel execution latency must be non-negative");
  }
  return kernel_exec_latency_ns >= saturation_threshold_ns(gpu_count);
}

// ---------------------------------------------------------------------------
// Batch analysis
// ---------------------------------------------------------------------------

namespace {

bool is_warp_level(SyncLevel l) {
  return l == SyncLevel::kWarpTile || l == SyncLevel::kWarpCoalesced;
}

double convert(double v, ClockDomain from, ClockDomain to, const DeviceProfile& dev) {
  if (from == to) return v;
  return from == ClockDomain::kCpuNs ? dev.ns_to_cycles(v) : dev.cycles_to_ns(v);
}

Estimate convert(Estimate e, ClockDomain from, ClockDomain to, const DeviceProfile& dev) {
  if (from == to) return e;
  e.value = convert(e.value, from, to, dev);
  if (e.stddev) e.stddev = convert(*e.stddev, from, to, dev);
  if (e.standard_error) e.standard_error = convert(*e.standard_error, from, to, dev);
  return e;
}

// Arms sharing a key, ordered by repeat (or launch) count.
template <typename Key>
using ArmGroups = std::map<Key, std::map<int, const Experiment*>>;

template <typename Key>
void add_arm(ArmGroups<Key>& groups, const Key& key, int count, const Experiment& e,
             std::vector<std::string>& warnings) {
  auto [it, inserted] = groups[key].emplace(count, &e);
  if (!inserted) {
    warnings.push_back("experiment '" + e.id + "' duplicates the count of '" + it->second->id +
                       "'; ignored");
  }
}

// Pairs the largest and smallest count of a group.
template <typename Key, typename Fn>
void for_each_extreme_pair(const ArmGroups<Key>& groups, std::vector<std::string>& warnings,
                           Fn&& fn) {
  for (const auto& [key, arms] : groups) {
    if (arms.size() < 2) {
      warnings.push_back("experiment '" + arms.begin()->second->id +
                         "' has no partner with a different count; skipped");
      continue;
    }
    const auto& hi = *arms.rbegin();
    const auto& lo = *arms.begin();
    fn(key, hi.first, *hi.second, lo.first, *lo.second);
  }
}

}  // namespace

AnalysisReport analyze_batch(const MeasurementBatch& batch, const AnalysisOptions& options) {
  batch.validate();
  if (options.latency_domain && !options.device) {
    throw ValidationError("converting latencies between clock domains needs a device profile");
  }
  AnalysisReport report;
  report.device_name = batch.device_name;
  const int gpu_count = options.device ? options.device->gpu_count : 1;

  std::map<std::pair<int, int>, const Experiment*> fusion;
  ArmGroups<std::string> repeats;
  ArmGroups<int> sequences;
  ArmGroups<std::tuple<SyncLevel, int, int, int>> syncs;

  for (const auto& e : batch.experiments) {
    if (e.samples.empty()) {
      report.warnings.push_back("experiment '" + e.id + "' has no samples; skipped");
      continue;
    }
    if (const auto* f = std::get_if<FusionArm>(&e.params)) {
      fusion.emplace(std::pair{f->launches, f->wait_units}, &e);
    } else if (const auto* r = std::get_if<RepeatArm>(&e.params)) {
      add_arm(repeats, r->instr, r->repeats, e, report.warnings);
    } else if (const auto* l = std::get_if<LaunchSequenceArm>(&e.params)) {
      add_arm(sequences, 0, l->launches, e, report.warnings);
    } else {
      const auto& s = std::get<SyncArm>(e.params);
      add_arm(syncs, std::tuple{s.level, s.gpu_count, s.blocks_per_sm, s.threads_per_block},
              s.repeats, e, report.warnings);
    }
  }

  for (const auto& [key, arm] : fusion) {
    const auto [i, j] = key;
    if (i == j) {
      report.warnings.push_back("fusion arm '" + arm->id + "' has launches == wait_units; skipped");
      continue;
    }
    auto mirror = fusion.find({j, i});
    if (mirror == fusion.end()) {
      report.warnings.push_back("fusion arm '" + arm->id + "' has no mirrored arm; skipped");
      continue;
    }
    if (i < j) continue;  // reported once, from the arm with more launches
    FusionExperiment exp{i, j, arm->samples, mirror->second->samples};
    LaunchOverheadResult r;
    r.arm_ij = arm->id;
    r.arm_ji = mirror->second->id;
    r.launches_i = i;
    r.wait_units_j = j;
    r.domain = arm->samples.front().clock_domain;
    r.overhead = launch_overhead(exp);
    // The i-launch arm runs kernels of j wait units, the shorter of the two.
    const auto vals = values_of(arm->samples);
    r.min_kernel_exec_latency = summarize(vals).mean / i - r.overhead.value;
    double exec_ns = r.min_kernel_exec_latency;
    if (r.domain == ClockDomain::kGpuCycles) {
      exec_ns = options.device ? options.device->cycles_to_ns(exec_ns) : -1.0;
    }
    if (exec_ns >= 0.0) {
      r.saturated = saturation_check(exec_ns, gpu_count);
      if (!r.saturated) {
        report.warnings.push_back("launch overhead from '" + r.arm_ij + "'/'" + r.arm_ji +
                                  "': kernels too short to saturate the launch pipeline");
      }
    }
    if (r.overhead.negative) {
      report.warnings.push_back("launch overhead from '" + r.arm_ij + "'/'" + r.arm_ji +
                                "' is negative (noise-dominated)");
    }
    report.launch_overheads.push_back(std::move(r));
  }

  auto target_domain = [&](ClockDomain d) { return options.latency_domain.value_or(d); };

  for_each_extreme_pair(repeats, report.warnings,
                        [&](const std::string& instr, int r1, const Experiment& k1, int r2,
                            const Experiment& k2) {
                          InstructionLatencyResult r;
                          r.instr = instr;
                          r.repeats_r1 = r1;
                          r.repeats_r2 = r2;
                          const ClockDomain d = k1.samples.front().clock_domain;
                          r.domain = target_domain(d);
                          Estimate est = instruction_latency({r1, r2, k1.samples, k2.samples});
                          r.latency = options.device ? convert(est, d, r.domain, *options.device)
                                                     : est;
                          if (r.latency.negative) {
                            report.warnings.push_back("instruction '" + instr +
                                                      "' latency is negative (noise-dominated)");
                          }
                          report.instruction_latencies.push_back(std::move(r));
                        });

  for_each_extreme_pair(sequences, report.warnings,
                        [&](int, int b, const Experiment& kb, int a, const Experiment& ka) {
                          KernelLatencyResult r;
                          r.launches_a = a;
                          r.launches_b = b;
                          r.domain = kb.samples.front().clock_domain;
                          r.latency = instruction_latency({b, a, kb.samples, ka.samples});
                          report.kernel_latencies.push_back(std::move(r));
                        });

  for_each_extreme_pair(
      syncs, report.warnings,
      [&](const std::tuple<SyncLevel, int, int, int>& key, int r1, const Experiment& k1, int r2,
          const Experiment& k2) {
        SyncLatencyResult r;
        r.point = std::get<SyncArm>(k1.params);
        r.repeats_r2 = r2;
        const ClockDomain d = k1.samples.front().clock_domain;
        r.domain = target_domain(d);
        const Reducer reducer =
            is_warp_level(std::get<0>(key)) ? options.warp_sync_reducer : Reducer::kMean;
        Estimate est = instruction_latency({r1, r2, k1.samples, k2.samples, reducer});
        r.latency = options.device ? convert(est, d, r.domain, *options.device) : est;
        report.sync_latencies.push_back(std::move(r));
      });

  return report;
}

AnalysisReport merge_reports(std::vector<AnalysisReport> reports) {
  AnalysisReport out;
  std::vector<std::string> names;
  for (auto& r : reports) {
    names.push_back(r.device_name);
    std::move(r.launch_overheads.begin(), r.launch_overheads.end(),
              std::back_inserter(out.launch_overheads));
    std::move(r.instruction_latencies.begin(), r.instruction_latencies.end(),
              std::back_inserter(out.instruction_latencies));
    std::move(r.kernel_latencies.begin(), r.kernel_latencies.end(),
              std::back_inserter(out.kernel_latencies));
    std::move(r.sync_latencies.begin(), r.sync_latencies.end(),
              std::back_inserter(out.sync_latencies));
    std::move(r.warnings.begin(), r.warnings.end(), std::back_inserter(out.warnings));
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  for (const auto& n : names) {
    if (!out.device_name.empty()) out.device_name += ",";
    out.device_name += n;
  }

  std::sort(out.launch_overheads.begin(), out.launch_overheads.end(),
            [](const auto& a, const auto& b) {
              return std::tie(a.launches_i, a.wait_units_j, a.arm_ij, a.overhead.value) <
                     std::tie(b.launches_i, b.wait_units_j, b.arm_ij, b.overhead.value);
            });
  std::sort(out.instruction_latencies.begin(), out.instruction_latencies.end(),
            [](const auto& a, const auto& b) {
              return std::tie(a.instr, a.repeats_r1, a.repeats_r2, a.latency.value) <
                     std::tie(b.instr, b.repeats_r1, b.repeats_r2, b.latency.value);
            });
  std::sort(out.kernel_latencies.begin(), out.kernel_latencies.end(),
            [](const auto& a, const auto& b) {
              return std::tie(a.launches_a, a.launches_b, a.latency.value) <
                     std::tie(b.launches_a, b.launches_b, b.latency.value);
            });
  std::sort(out.sync_latencies.begin(), out.sync_latencies.end(),
            [](const auto& a, const auto& b) {
              return std::tie(a.point.level, a.point.gpu_count, a.point.blocks_per_sm,
                              a.point.threads_per_block, a.latency.value) <
                     std::tie(b.point.level, b.point.gpu_count, b.point.blocks_per_sm,
                              b.point.threads_per_block, b.latency.value);
            });
  std::sort(out.warnings.begin(), out.warnings.end());
  return out;
}

}  // namespace syncperf
