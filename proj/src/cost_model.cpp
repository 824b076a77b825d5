// SPDX-License-Identifier: Apache-2.0

#include "syncperf/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "syncperf/error.hpp"

namespace syncperf {

namespace {

std::string num(double v) { return std::to_string(v); }

// Time to stream n bytes through a configuration that starts after `start`
// cycles: everything beyond the concurrency drains at the throughput.
double drain_time(double start_cycles, double n_bytes, const CostPoint& p) {
  return start_cycles +
         std::max(0.0, n_bytes - p.concurrency_bytes) / p.throughput_bytes_per_cycle;
}

void check_safety_factor(double f) {
  if (!(f > 0.0) || !std::isfinite(f)) {
    throw ValidationError("safety factor must be positive and finite, got " + num(f));
  }
}

}  // namespace

double little_law_concurrency(double latency_cycles, double throughput_bytes_per_cycle) {
  if (!(latency_cycles > 0.0) || !(throughput_bytes_per_cycle > 0.0)) {
    throw ValidationError("latency and throughput must be positive (got T=" +
                          num(latency_cycles) + ", Thr=" + num(throughput_bytes_per_cycle) +
                          ")");
  }
  return latency_cycles * throughput_bytes_per_cycle;
}

CostPoint CostPoint::derive(std::string label, double latency_cycles,
                            double throughput_bytes_per_cycle) {
  CostPoint p;
  p.label = std::move(label);
  p.latency_cycles = latency_cycles;
  p.throughput_bytes_per_cycle = throughput_bytes_per_cycle;
  p.concurrency_bytes = little_law_concurrency(latency_cycles, throughput_bytes_per_cycle);
  return p;
}

void CostPoint::validate() const {
  if (!(latency_cycles > 0.0) || !(throughput_bytes_per_cycle > 0.0)) {
    throw ValidationError("cost point '" + label + "': latency and throughput must be positive");
  }
  if (!(concurrency_bytes >= 0.0)) {
    throw ValidationError("cost point '" + label + "': concurrency must be non-negative");
  }
}

std::string_view to_string(SyncLevel level) {
  switch (level) {
    case SyncLevel::kWarpTile:
      return "warp_tile";
    case SyncLevel::kWarpCoalesced:
      return "warp_coalesced";
    case SyncLevel::kBlock:
      return "block";
    case SyncLevel::kGrid:
      return "grid";
    case SyncLevel::kMultiGrid:
      return "multi_grid";
    case SyncLevel::kImplicitLaunch:
      return "implicit_launch";
    case SyncLevel::kCpuSide:
      return "cpu_side";
  }
  return "block";
}

SyncLevel sync_level_from_string(std::string_view text) {
  for (SyncLevel l : {SyncLevel::kWarpTile, SyncLevel::kWarpCoalesced, SyncLevel::kBlock,
                      SyncLevel::kGrid, SyncLevel::kMultiGrid, SyncLevel::kImplicitLaunch,
                      SyncLevel::kCpuSide}) {
    if (to_string(l) == text) return l;
  }
  throw ValidationError("unknown synchronization level '" + std::string(text) + "'");
}

void SyncCost::validate() const {
  if (!(latency_cycles >= 0.0)) {
    throw ValidationError("sync latency must be non-negative, got " + num(latency_cycles));
  }
  if (per_invocation_count <= 0) {
    throw ValidationError("sync invocation count must be positive");
  }
}

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kBelowBasic:
      return "below_basic";
    case ScenarioKind::kBetween:
      return "between";
    case ScenarioKind::kAboveMore:
      return "above_more";
  }
  return "below_basic";
}

bool prefer_fewer_workers(double n_bytes, const CostPoint& basic, const CostPoint& more,
                          const SyncCost& sync) {
  if (!(n_bytes >= 0.0)) throw ValidationError("input size must be non-negative");
  basic.validate();
  more.validate();
  sync.validate();
  // T_more = T_basic + T_sync; both sides start from the basic latency.
  const double fewer = drain_time(basic.latency_cycles, n_bytes, basic);
  const double with_barrier = drain_time(basic.latency_cycles + sync.total_cycles(), n_bytes, more);
  return fewer < with_barrier;
}

double switch_point_between(const CostPoint& basic, const SyncCost& sync) {
  basic.validate();
  sync.validate();
  return (basic.latency_cycles + sync.total_cycles()) * basic.throughput_bytes_per_cycle;
}

std::optional<double> switch_point_above(const CostPoint& basic, const CostPoint& more,
                                         const SyncCost& sync) {
  basic.validate();
  more.validate();
  sync.validate();
  const double thr_b = basic.throughput_bytes_per_cycle;
  const double thr_m = more.throughput_bytes_per_cycle;
  if (thr_m <= thr_b) return std::nullopt;
  return sync.total_cycles() * thr_m * thr_b / (thr_m - thr_b);
}

ScenarioKind classify_scenario(double n_bytes, const CostPoint& basic, const CostPoint& more) {
  if (!(n_bytes >= 0.0)) throw ValidationError("input size must be non-negative");
  if (basic.concurrency_bytes > more.concurrency_bytes) {
    throw ValidationError("concurrency of '" + basic.label + "' (" +
                          num(basic.concurrency_bytes) + " B) exceeds that of '" + more.label +
                          "' (" + num(more.concurrency_bytes) +
                          " B); configurations look mislabeled");
  }
  if (n_bytes <= basic.concurrency_bytes) return ScenarioKind::kBelowBasic;
  if (n_bytes <= more.concurrency_bytes) return ScenarioKind::kBetween;
  return ScenarioKind::kAboveMore;
}

SwitchScenario resolve_scenario(double n_bytes, const CostPoint& basic, const CostPoint& more,
                                const SyncCost& sync, double safety_factor) {
  check_safety_factor(safety_factor);
  SwitchScenario s;
  s.kind = classify_scenario(n_bytes, basic, more);
  switch (s.kind) {
    case ScenarioKind::kBelowBasic:
      break;
    case ScenarioKind::kBetween:
      s.applicable_threshold = switch_point_between(basic, sync) * safety_factor;
      break;
    case ScenarioKind::kAboveMore:
      if (auto nl = switch_point_above(basic, more, sync)) {
        s.applicable_threshold = *nl * safety_factor;
      }
      break;
  }
  return s;
}

bool fewer_workers_by_threshold(double n_bytes, const CostPoint& basic, const CostPoint& more,
                                const SyncCost& sync, double safety_factor) {
  const SwitchScenario s = resolve_scenario(n_bytes, basic, more, sync, safety_factor);
  switch (s.kind) {
    case ScenarioKind::kBelowBasic:
      return true;
    case ScenarioKind::kBetween:
      return n_bytes < *s.applicable_threshold;
    case ScenarioKind::kAboveMore:
      // No crossover: the larger configuration never catches up.
      return !s.applicable_threshold || n_bytes < *s.applicable_threshold;
  }
  return true;
}

int active_warps_per_sm(const DeviceProfile& profile, int blocks_per_sm, int threads_per_block) {
  if (blocks_per_sm <= 0 || threads_per_block <= 0) {
    throw ValidationError("blocks_per_sm and threads_per_block must be positive");
  }
  if (threads_per_block > profile.max_threads_per_block) {
    throw ValidationError("threads_per_block " + std::to_string(threads_per_block) +
                          " exceeds the device cap of " +
                          std::to_string(profile.max_threads_per_block));
  }
  const long long warps_per_block =
      (threads_per_block + profile.warp_size - 1) / profile.warp_size;
  const long long requested = static_cast<long long>(blocks_per_sm) * warps_per_block;
  return static_cast<int>(std::min<long long>(profile.max_warps_per_sm, requested));
}

}  // namespace syncperf
