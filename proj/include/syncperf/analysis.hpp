// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "syncperf/device.hpp"
#include "syncperf/measurement.hpp"

namespace syncperf {

// How the samples of one arm are collapsed before differencing. kMin keeps
// the fastest observation, for benchmarks whose latency occasionally jumps
// (warp-level barriers under instruction-cache pressure).
enum class Reducer { kMean, kMin };

struct ArmSummary {
  std::size_t count = 0;
  double aggregate = 0.0;  // mean or min depending on the reducer
  double mean = 0.0;
  // (N-1)-denominator sample standard deviation; absent for N < 2.
  std::optional<double> stddev;
  // stddev / sqrt(N); absent for N < 2.
  std::optional<double> standard_error;
};

ArmSummary summarize(std::span<const double> values, Reducer reducer = Reducer::kMean);

// Result of a differencing estimator.
//
// `stddev` propagates the per-arm sample standard deviations and describes the
// spread of a single paired measurement. `standard_error` propagates the
// per-arm standard errors and is the uncertainty of `value` itself, which is
// built from arm means.
struct Estimate {
  double value = 0.0;
  std::optional<double> stddev;
  std::optional<double> standard_error;
  // Set when value < 0: the difference is dominated by noise. Never clamped.
  bool negative = false;
};

// Per-kernel total latency from three host timestamps bracketing reps_a and
// then reps_b launches: ((t3 - t2) - (t2 - t1)) / (reps_b - reps_a).
double kernel_total_latency(double t1, double t2, double t3, int reps_a, int reps_b);

struct FusionExperiment {
  int launches_i = 1;
  int wait_units_j = 1;
  std::vector<TimingSample> latency_ij;  // i launches, j wait units each
  std::vector<TimingSample> latency_ji;  // j launches, i wait units each
};

// O = (mean(L_ij) - mean(L_ji)) / (i - j).
Estimate launch_overhead(const FusionExperiment& exp);

struct RepeatDiffExperiment {
  int repeats_r1 = 2;
  int repeats_r2 = 1;
  std::vector<TimingSample> samples_k1;
  std::vector<TimingSample> samples_k2;
  Reducer reducer = Reducer::kMean;
};

// T = (L_k1 - L_k2) / (r1 - r2), sigma_T = sqrt(s1^2 + s2^2) / (r1 - r2).
Estimate instruction_latency(const RepeatDiffExperiment& exp);

struct LaunchConfig {
  int threads_per_block = 32;
  int blocks_per_sm = 1;

  long long total_threads() const {
    return static_cast<long long>(threads_per_block) * blocks_per_sm;
  }
  friend auto operator<=>(const LaunchConfig&, const LaunchConfig&) = default;
};

struct SweepEntry {
  LaunchConfig config;
  double throughput = 0.0;
};

// Highest-throughput entry; ties go to the fewest total threads, then to the
// lexicographically smallest (threads_per_block, blocks_per_sm).
SweepEntry peak_throughput(std::span<const SweepEntry> sweep);

// Minimum kernel execution latency for which launch-overhead measurements are
// trustworthy: 5 us on one GPU rising linearly to 250 us on eight, held at
// 250 us beyond eight.
double saturation_threshold_ns(int gpu_count);
bool saturation_check(double kernel_exec_latency_ns, int gpu_count);

// ---------------------------------------------------------------------------
// Whole-batch analysis.
// ---------------------------------------------------------------------------

struct AnalysisOptions {
  // Reducer for warp-level barrier arms. Other arms always use the mean.
  Reducer warp_sync_reducer = Reducer::kMean;
  // When set, its GPU count feeds the saturation check (otherwise 1).
  std::optional<DeviceProfile> device;
  // Convert instruction and barrier latencies into this domain using the
  // device clock. Requires `device`. Launch-level results stay in their own
  // domain.
  std::optional<ClockDomain> latency_domain;
};

struct LaunchOverheadResult {
  std::string arm_ij;
  std::string arm_ji;
  int launches_i = 0;
  int wait_units_j = 0;
  ClockDomain domain = ClockDomain::kCpuNs;
  Estimate overhead;
  // Estimated execution latency of the shorter kernel in the pair; false
  // saturation means the overhead is likely inflated.
  double min_kernel_exec_latency = 0.0;
  bool saturated = true;
};

struct InstructionLatencyResult {
  std::string instr;
  int repeats_r1 = 0;
  int repeats_r2 = 0;
  ClockDomain domain = ClockDomain::kGpuCycles;
  Estimate latency;
};

struct KernelLatencyResult {
  int launches_a = 0;
  int launches_b = 0;
  ClockDomain domain = ClockDomain::kCpuNs;
  Estimate latency;
};

struct SyncLatencyResult {
  SyncArm point;  // repeats field holds r1
  int repeats_r2 = 0;
  ClockDomain domain = ClockDomain::kGpuCycles;
  Estimate latency;
};

struct AnalysisReport {
  std::string device_name;
  std::vector<LaunchOverheadResult> launch_overheads;
  std::vector<InstructionLatencyResult> instruction_latencies;
  std::vector<KernelLatencyResult> kernel_latencies;
  std::vector<SyncLatencyResult> sync_latencies;
  std::vector<std::string> warnings;
};

AnalysisReport analyze_batch(const MeasurementBatch& batch, const AnalysisOptions& options = {});

// Merges reports of several batches; output order is independent of the
// input order.
AnalysisReport merge_reports(std::vector<AnalysisReport> reports);

}  // namespace syncperf
