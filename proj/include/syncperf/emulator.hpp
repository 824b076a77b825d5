// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <tuple>

#include "syncperf/cost_model.hpp"
#include "syncperf/measurement.hpp"

namespace syncperf {

// (level, blocks_per_sm, threads_per_block, gpu_count)
using SyncPointKey = std::tuple<SyncLevel, int, int, int>;

// Closed-form timing models behind a synthetic device. Fusion and launch
// sequence arms are timed in host nanoseconds, repeat and barrier arms in GPU
// cycles. Every arm sample is its model mean plus N(0, noise_sigma^2) in the
// arm's own unit; negative draws are redrawn.
struct EmulatedDevice {
  std::string name = "emulated";
  double launch_overhead_ns = 1081.0;
  double wait_unit_ns = 10000.0;
  std::map<std::string, double> instr_latency_cycles;
  std::map<SyncPointKey, double> sync_latency;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  // Fixed part of a repeat or barrier kernel, cancelled by differencing.
  double base_cycles = 1000.0;
  double kernel_total_latency_ns = 8888.0;
  // Host-side cost around a launch sequence, cancelled by differencing.
  double host_overhead_ns = 2000.0;

  void validate() const;
  friend bool operator==(const EmulatedDevice&, const EmulatedDevice&) = default;
};

// Launch overheads from the traditional launch row; fadd and the warp/block
// barrier latencies of the V100.
EmulatedDevice emulated_v100();

// Arms (i launches, j units) and (j launches, i units).
MeasurementBatch generate_fusion_batch(const EmulatedDevice& dev, int i, int j, int runs);

// Arms of r1 and r2 dependent repeats of `instr`. Unknown labels throw.
MeasurementBatch generate_repeatdiff_batch(const EmulatedDevice& dev, std::string_view instr,
                                           int r1, int r2, int runs);

// Arms of reps_a and reps_b back-to-back null-kernel launches.
MeasurementBatch generate_launch_sequence_batch(const EmulatedDevice& dev, int reps_a, int reps_b,
                                                int runs);

// Arms of r1 and r2 in-kernel barriers at `point` (its repeats field is
// ignored). Points without a configured latency throw.
MeasurementBatch generate_sync_batch(const EmulatedDevice& dev, const SyncArm& point, int r1,
                                     int r2, int runs);

// One batch covering every model: fusion (5, 1), repeats 256/32 per
// instruction, launch sequences of 1 and 10, barriers 1000/100 per sync point.
MeasurementBatch generate_suite(const EmulatedDevice& dev, int runs);

// key=value text. Scalars: name, launch_overhead_ns, wait_unit_ns,
// noise_sigma, seed, base_cycles, kernel_total_latency_ns, host_overhead_ns.
// Maps: instr.<label>=cycles and sync.<level>.<bps>.<tpb>.<gpus>=cycles.
// Missing scalars keep their defaults.
EmulatedDevice parse_emulated_device(std::string_view text);
std::string write_emulated_device(const EmulatedDevice& dev);

}  // namespace syncperf
