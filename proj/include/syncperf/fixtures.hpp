// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "syncperf/data_io.hpp"
#include "syncperf/device.hpp"
#include "syncperf/recommender.hpp"

// Reference measurements for the P100 (2x, PCIe) and V100 (8x DGX-1) systems,
// shipped as read-only CSV text. Each table is parsed on demand into typed
// rows; a stored FNV-1a checksum guards the text against accidental edits.
namespace syncperf::fixtures {

enum class TableId {
  kLaunchOverhead,   // launch overhead and null-kernel total latency (ns)
  kWarpSync,         // warp/block barrier latency and throughput
  kConcurrency,      // reduction configurations: bandwidth, latency, concurrency
  kSwitchPoints,     // barrier cost and switch points of the reduction configurations
  kReductionBandwidth,
  kWarpReduction,
  kBarrierLatency,   // per-barrier latencies used by the barrier advisor
};

std::string_view table_name(TableId id);
std::vector<TableId> all_tables();

std::string_view table_text(TableId id);
std::uint64_t stored_checksum(TableId id);
std::uint64_t fnv1a64(std::string_view bytes);

// Table ids whose text no longer matches the stored checksum.
std::vector<TableId> corrupted_tables();

struct LaunchOverheadRow {
  std::string launch_type;
  double overhead_ns = 0.0;
  double null_kernel_total_latency_ns = 0.0;
};

struct WarpSyncRow {
  std::string type;
  double latency_cycles_v100 = 0.0;
  double latency_cycles_p100 = 0.0;
  double throughput_v100 = 0.0;  // syncs per cycle
  double throughput_p100 = 0.0;
  std::optional<double> reference_v100;  // thread ops per cycle
  std::optional<double> reference_p100;
};

struct ConcurrencyRow {
  int scenery = 0;
  std::string label;
  double bandwidth_v100 = 0.0;  // bytes/cycle
  double bandwidth_p100 = 0.0;
  double latency_v100 = 0.0;  // cycles
  double latency_p100 = 0.0;
  double concurrency_v100 = 0.0;  // bytes, as reported (rounded)
  double concurrency_p100 = 0.0;
};

struct SwitchPointRow {
  int scenery = 0;
  std::string label;       // "1 warp", "1024 thrd"
  std::string threshold;   // "N_l" or "N_m"
  std::optional<double> sync_cycles_v100;  // total over 5 barriers
  std::optional<double> sync_cycles_p100;
  double switch_point_v100 = 0.0;  // bytes
  double switch_point_p100 = 0.0;
};

struct ReductionBandwidthRow {
  std::string device;
  double implicit_gbs = 0.0;
  double grid_sync_gbs = 0.0;
  double cub_gbs = 0.0;
  double cuda_sample_gbs = 0.0;
  double theory_gbs = 0.0;
};

struct WarpReductionRow {
  std::string device;
  double serial = 0.0;
  double nosync = 0.0;
  double volatile_tile = 0.0;
  double tile = 0.0;
  double coalesced = 0.0;
  double tile_shuffle = 0.0;
  double coalesced_shuffle = 0.0;
};

std::vector<LaunchOverheadRow> launch_overhead_table();
std::vector<WarpSyncRow> warp_sync_table();
std::vector<ConcurrencyRow> concurrency_table();
std::vector<SwitchPointRow> switch_point_table();
std::vector<ReductionBandwidthRow> reduction_bandwidth_table();
std::vector<WarpReductionRow> warp_reduction_table();

// Number of barriers behind each tabulated switch-point sync latency.
inline constexpr int kSwitchPointSyncCount = 5;

DeviceProfile v100_profile();
DeviceProfile p100_profile();
std::string_view profile_text(std::string_view device);  // "v100" or "p100"

// Bundled device name -> upper-case table column key ("V100"/"P100").
// Throws ValidationError for unknown names.
std::string canonical_device(std::string_view name);
DeviceProfile profile_for(std::string_view device);

// Reduction candidates per scenery, from the concurrency table and the
// switch-point sync latencies. Scenery ids are "1" and "2".
std::vector<CostScenery> cost_table(std::string_view device);

BarrierTable barrier_table();

// Saturating block-barrier throughput sweep (warp-syncs/cycle) over
// threads/block 32..1024 step 32 and blocks/SM 1..32: per-warp throughput
// grows linearly with resident warps and plateaus at the tabulated peak once
// the SM is full.
std::vector<SweepEntry> block_sync_sweep(const DeviceProfile& profile, double peak_throughput);

// Recomputation of the tabulated derived values from their tabulated inputs.
// Switch points are compared after rounding to whole bytes, as tabulated.
struct SwitchPointCheck {
  std::string device;
  int scenery = 0;
  std::string basic;
  std::string more;
  std::string threshold;  // "N_l" or "N_m"
  double sync_cycles = 0.0;
  double computed = 0.0;
  double reported = 0.0;
  double rel_error = 0.0;
  bool within = false;
};

struct ConcurrencyCheck {
  std::string device;
  int scenery = 0;
  std::string label;
  double computed = 0.0;
  double reported = 0.0;
  double rel_error = 0.0;
  bool within = false;
};

std::vector<SwitchPointCheck> check_switch_points(std::string_view device,
                                                  double tolerance = 0.015);
std::vector<ConcurrencyCheck> check_concurrency(std::string_view device, double tolerance = 0.02);

}  // namespace syncperf::fixtures
