// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "syncperf/device.hpp"

namespace syncperf {

// ---------------------------------------------------------------------------
// Analytical model for "fewer workers vs. more workers plus a barrier".
//
// A configuration is summarised by its latency T (cycles) and throughput Thr
// (bytes/cycle). Its concurrency C = T * Thr is the number of bytes it keeps
// in flight. Processing N bytes costs
//
//   T + max(0, N - C) / Thr
//
// and the larger configuration additionally pays the barrier cost T_sync.
// All functions here are pure.
// ---------------------------------------------------------------------------

// Bytes in flight for a configuration with the given latency and throughput.
// Throws ValidationError unless both arguments are strictly positive.
double little_law_concurrency(double latency_cycles, double throughput_bytes_per_cycle);

struct CostPoint {
  std::string label;
  double latency_cycles = 0.0;
  double throughput_bytes_per_cycle = 0.0;
  double concurrency_bytes = 0.0;

  // Builds a point whose concurrency is computed from latency and throughput.
  static CostPoint derive(std::string label, double latency_cycles,
                          double throughput_bytes_per_cycle);

  void validate() const;
};

enum class SyncLevel {
  kWarpTile,
  kWarpCoalesced,
  kBlock,
  kGrid,
  kMultiGrid,
  kImplicitLaunch,
  kCpuSide,
};

std::string_view to_string(SyncLevel level);
SyncLevel sync_level_from_string(std::string_view text);

// Barrier cost charged to the larger configuration. The threshold formulas use
// latency_cycles * per_invocation_count; the count is always explicit.
struct SyncCost {
  SyncLevel level = SyncLevel::kBlock;
  double latency_cycles = 0.0;
  int per_invocation_count = 1;

  double total_cycles() const { return latency_cycles * per_invocation_count; }
  void validate() const;
};

enum class ScenarioKind { kBelowBasic, kBetween, kAboveMore };

std::string_view to_string(ScenarioKind kind);

struct SwitchScenario {
  ScenarioKind kind = ScenarioKind::kBelowBasic;
  // N_m for kBetween, N_l for kAboveMore, absent for kBelowBasic (and for
  // kAboveMore when the larger configuration never wins).
  std::optional<double> applicable_threshold;
};

// Returns true when processing n bytes with `basic` is strictly faster than
// with `more` plus its barrier. Ties go to `more`.
bool prefer_fewer_workers(double n_bytes, const CostPoint& basic, const CostPoint& more,
                          const SyncCost& sync);

// N_m = (T_basic + T_sync) * Thr_basic.
double switch_point_between(const CostPoint& basic, const SyncCost& sync);

// N_l = T_sync * Thr_more * Thr_basic / (Thr_more - Thr_basic). Empty when
// Thr_more <= Thr_basic: there is no input size at which `more` pays off.
std::optional<double> switch_point_above(const CostPoint& basic, const CostPoint& more,
                                         const SyncCost& sync);

// Throws ValidationError when C_basic > C_more.
ScenarioKind classify_scenario(double n_bytes, const CostPoint& basic, const CostPoint& more);

// Classification plus the threshold that governs the decision in that regime.
SwitchScenario resolve_scenario(double n_bytes, const CostPoint& basic, const CostPoint& more,
                                const SyncCost& sync, double safety_factor = 1.0);

// Threshold-based form of prefer_fewer_workers. With safety_factor == 1 and a
// common latency for both configurations it agrees with the direct inequality.
// A safety factor > 1 stretches both thresholds to account for pipeline refill
// after the barrier.
bool fewer_workers_by_threshold(double n_bytes, const CostPoint& basic, const CostPoint& more,
                                const SyncCost& sync, double safety_factor = 1.0);

// Resident warps per SM: min(cap, blocks_per_sm * ceil(threads / warp_size)).
int active_warps_per_sm(const DeviceProfile& profile, int blocks_per_sm,
                        int threads_per_block);

}  // namespace syncperf
