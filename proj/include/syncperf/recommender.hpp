// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "syncperf/analysis.hpp"
#include "syncperf/cost_model.hpp"
#include "syncperf/data_io.hpp"
#include "syncperf/device.hpp"

namespace syncperf {

// ---------------------------------------------------------------------------
// Reduction granularity
// ---------------------------------------------------------------------------

struct ReductionQuery {
  std::uint64_t input_bytes = 0;
  int element_bytes = 8;
  DeviceProfile device;
  // Increasing worker count. Each candidate's sync is the barrier it adds over
  // the previous candidate; the first candidate's sync is ignored.
  std::vector<CostCandidate> candidates;
  // Stretches both switch points (pipeline refill after a barrier).
  double safety_factor = 1.0;
};

struct Recommendation {
  std::string chosen;
  // Scenario and thresholds of the adjacent pair that settled the choice.
  std::string compared_with;
  SwitchScenario scenario;
  std::optional<double> n_m;
  std::optional<double> n_l;
  std::string rationale;
};

// Climbs the candidate ladder while the next (larger) configuration beats its
// smaller neighbour, assuming costs are unimodal along the ladder.
Recommendation recommend_reduction_config(const ReductionQuery& query);

// Reduction time of candidate `index` in cycles: common start latency, the
// cumulative barrier cost up to that candidate, then the drain term.
double reduction_cost(double n_bytes, const std::vector<CostCandidate>& candidates,
                      std::size_t index);

// ---------------------------------------------------------------------------
// Barrier mechanism
// ---------------------------------------------------------------------------

enum class BarrierMechanism {
  kImplicitLaunch,     // kernel boundary on one GPU
  kGrid,               // grid-wide barrier in a cooperative kernel
  kCpuSide,            // host threads: device synchronize + host barrier
  kMultiGrid,          // multi-device cooperative barrier
  kMultiDeviceLaunch,  // multi-device launch used as an implicit barrier
};

std::string_view to_string(BarrierMechanism m);
BarrierMechanism barrier_mechanism_from_string(std::string_view text);

struct BarrierLatency {
  BarrierMechanism mechanism = BarrierMechanism::kImplicitLaunch;
  int gpu_count = 1;
  std::optional<int> blocks_per_sm;
  std::optional<int> threads_per_block;
  double latency_ns = 0.0;
};

struct LaunchOverheads {
  double traditional_ns = 0.0;
  double cooperative_ns = 0.0;
  double multi_device_ns = 0.0;
};

struct BarrierTable {
  LaunchOverheads launch;
  std::vector<BarrierLatency> entries;
};

struct BarrierQuery {
  long long iterations = 1;
  int gpu_count = 1;
  // Empty: every mechanism applicable to gpu_count that has data.
  std::vector<BarrierMechanism> mechanisms;
  // Multi-grid within this factor of the winner gets a programmability note.
  double slack = 3.0;
};

struct BarrierOption {
  BarrierMechanism mechanism;
  double per_barrier_ns = 0.0;
  double launch_ns = 0.0;
  double total_ns = 0.0;
};

struct BarrierRecommendation {
  bool sufficient_data = true;
  std::vector<BarrierMechanism> missing;
  std::optional<BarrierMechanism> chosen;
  std::vector<BarrierOption> ranked;  // ascending total cost
  double margin_ns = 0.0;             // runner-up minus winner
  std::optional<double> multi_grid_ratio;
  bool multi_grid_within_slack = false;
  std::string rationale;
};

// Total cost per mechanism: one launch of the kind the mechanism needs
// (traditional, cooperative or multi-device) plus per-barrier latency times
// iterations.
BarrierRecommendation recommend_barrier(const BarrierQuery& query, const BarrierTable& table);

// blocks/SM <= 8 and resident warps/SM <= 32.
bool multi_grid_config_ok(const DeviceProfile& profile, int blocks_per_sm, int threads_per_block);

}  // namespace syncperf
