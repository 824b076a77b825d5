// SPDX-License-Identifier: Apache-2.0

#include "syncperf/fixtures.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "syncperf/error.hpp"

namespace syncperf::fixtures {

namespace {

constexpr std::string_view kLaunchOverheadCsv = R"(launch_type,overhead_ns,null_kernel_total_latency_ns
traditional,1081,8888
cooperative,1063,10248
cooperative_multi_device,1258,10874
)";

// Latency in cycles, throughput in syncs/cycle, reference in thread ops/cycle.
constexpr std::string_view kWarpSyncCsv = R"(type,latency_v100,latency_p100,throughput_v100,throughput_p100,reference_v100,reference_p100
tile,14,1,0.812,1.774,,
shuffle_tile,22,31,0.928,0.642,32,32
coalesced_1_31,108,1,0.167,1.791,,
coalesced_32,14,1,1.306,1.821,,
shuffle_coalesced,77,50,0.121,0.166,,
block_warp,22,218,0.475,0.091,16,32
)";

// Bandwidth in B/cycle, latency in cycles, concurrency in B.
constexpr std::string_view kConcurrencyCsv = R"(scenery,label,bandwidth_v100,bandwidth_p100,latency_v100,latency_p100,concurrency_v100,concurrency_p100
1,1 thread,0.62,0.43,13.0,18.5,8,8
1,1 warp,19.6,13.8,13.0,18.5,256,256
2,32 threads,19.6,13.8,13.0,18.5,256,256
2,1024 threads,215,141,13.0,18.5,2796,2615
)";

// Sync latency is the total of 5 barriers, in cycles; switch points in B.
constexpr std::string_view kSwitchPointCsv = R"(scenery,label,threshold,sync_v100,sync_p100,switch_v100,switch_p100
1,1 warp,N_l,110,155,70,70
1,1 warp,N_m,,,76,75
2,1024 threads,N_l,420,2135,9076,32681
2,1024 threads,N_m,,,8501,29737
)";

// GB/s.
constexpr std::string_view kReductionBandwidthCsv = R"(device,implicit,grid_sync,cub,cuda_sample,theory
V100,865.40,855.59,849.39,852.98,898.05
P100,592.40,590.85,543.96,590.65,732.16
)";

// Cycles to sum 32 doubles in one warp. The nosync column gives a wrong sum.
constexpr std::string_view kWarpReductionCsv = R"(device,serial,nosync,volatile_tile,tile,coalesced,tile_shuffle,coalesced_shuffle
V100,299,89,237,237,237,164,1261
P100,383,112,282,281,251,212,1423
)";

// V100 per-barrier latencies in ns.
//  implicit_launch: traditional launch overhead.
//  grid: launch overhead plus the 2.5 us upper bound of the gap at 2 blocks/SM.
//  cpu_side: null-kernel total latency, which the 8-GPU host barrier tracks.
//  multi_grid: cpu_side plus the 16 us gap at 8 GPUs (1 block/SM, 1024 threads).
constexpr std::string_view kBarrierLatencyCsv = R"(mechanism,gpu_count,blocks_per_sm,threads_per_block,latency_ns
implicit_launch,1,,,1081
grid,1,2,,3581
cpu_side,8,,,8888
multi_grid,8,1,1024,24888
)";

constexpr std::string_view kV100Profile = R"(name=V100
sm_count=80
warp_size=32
max_warps_per_sm=64
max_threads_per_block=1024
clock_mhz=1312
gpu_count=8
interconnect=nvlink
)";

constexpr std::string_view kP100Profile = R"(name=P100
sm_count=56
warp_size=32
max_warps_per_sm=64
max_threads_per_block=1024
clock_mhz=1189
gpu_count=2
interconnect=pcie
)";

struct Row {
  std::size_t line;
  std::vector<std::string> cells;

  const std::string& at(std::size_t i) const { return cells.at(i); }

  double num(std::size_t i) const {
    const std::string& s = cells.at(i);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw ParseError(ErrorCode::kParse, line, 0, "fixture cell '" + s + "' is not a number");
    }
    return v;
  }

  std::optional<double> opt(std::size_t i) const {
    if (cells.at(i).empty()) return std::nullopt;
    return num(i);
  }

  int integer(std::size_t i) const { return static_cast<int>(num(i)); }
};

std::vector<Row> rows_of(std::string_view csv, std::size_t columns) {
  std::vector<Row> rows;
  std::size_t line = 0;
  bool header = true;
  while (!csv.empty()) {
    const auto nl = csv.find('\n');
    std::string_view l = csv.substr(0, nl);
    csv.remove_prefix(nl == std::string_view::npos ? csv.size() : nl + 1);
    ++line;
    if (l.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    Row r{line, {}};
    std::size_t start = 0;
    while (true) {
      const auto comma = l.find(',', start);
      r.cells.emplace_back(l.substr(start, comma == std::string_view::npos ? l.npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (r.cells.size() != columns) {
      throw ParseError(ErrorCode::kParse, line, 0, "fixture row has the wrong column count");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

struct TableEntry {
  TableId id;
  std::string_view name;
  std::string_view text;
  std::uint64_t checksum;
};

constexpr TableEntry kTables[] = {
    {TableId::kLaunchOverhead, "launch_overhead", kLaunchOverheadCsv, 0xf5e8464e39b8bbabULL},
    {TableId::kWarpSync, "warp_sync", kWarpSyncCsv, 0xabc8649a31b6b129ULL},
    {TableId::kConcurrency, "concurrency", kConcurrencyCsv, 0x761df84f1d0e953fULL},
    {TableId::kSwitchPoints, "switch_points", kSwitchPointCsv, 0x263d930c3c24fedcULL},
    {TableId::kReductionBandwidth, "reduction_bandwidth", kReductionBandwidthCsv, 0x5b4edc8e7a628c45ULL},
    {TableId::kWarpReduction, "warp_reduction", kWarpReductionCsv, 0x1f64323a718aa9c4ULL},
    {TableId::kBarrierLatency, "barrier_latency", kBarrierLatencyCsv, 0x6593b9cb8d383d3cULL},
};

const TableEntry& entry(TableId id) {
  for (const auto& t : kTables) {
    if (t.id == id) return t;
  }
  throw ValidationError("unknown fixture table");
}

int column_offset(std::string_view device) {
  const std::string key = canonical_device(device);
  return key == "V100" ? 0 : 1;
}

}  // namespace

std::string_view table_name(TableId id) { return entry(id).name; }

std::vector<TableId> all_tables() {
  std::vector<TableId> ids;
  for (const auto& t : kTables) ids.push_back(t.id);
  return ids;
}

std::string_view table_text(TableId id) { return entry(id).text; }
std::uint64_t stored_checksum(TableId id) { return entry(id).checksum; }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<TableId> corrupted_tables() {
  std::vector<TableId> bad;
  for (const auto& t : kTables) {
    if (fnv1a64(t.text) != t.checksum) bad.push_back(t.id);
  }
  return bad;
}

std::vector<LaunchOverheadRow> launch_overhead_table() {
  std::vector<LaunchOverheadRow> out;
  for (const auto& r : rows_of(kLaunchOverheadCsv, 3)) {
    out.push_back({r.at(0), r.num(1), r.num(2)});
  }
  return out;
}

std::vector<WarpSyncRow> warp_sync_table() {
  std::vector<WarpSyncRow> out;
  for (const auto& r : rows_of(kWarpSyncCsv, 7)) {
    out.push_back({r.at(0), r.num(1), r.num(2), r.num(3), r.num(4), r.opt(5), r.opt(6)});
  }
  return out;
}

std::vector<ConcurrencyRow> concurrency_table() {
  std::vector<ConcurrencyRow> out;
  for (const auto& r : rows_of(kConcurrencyCsv, 8)) {
    out.push_back({r.integer(0), r.at(1), r.num(2), r.num(3), r.num(4), r.num(5), r.num(6),
                   r.num(7)});
  }
  return out;
}

std::vector<SwitchPointRow> switch_point_table() {
  std::vector<SwitchPointRow> out;
  for (const auto& r : rows_of(kSwitchPointCsv, 7)) {
    out.push_back({r.integer(0), r.at(1), r.at(2), r.opt(3), r.opt(4), r.num(5), r.num(6)});
  }
  return out;
}

std::vector<ReductionBandwidthRow> reduction_bandwidth_table() {
  std::vector<ReductionBandwidthRow> out;
  for (const auto& r : rows_of(kReductionBandwidthCsv, 6)) {
    out.push_back({r.at(0), r.num(1), r.num(2), r.num(3), r.num(4), r.num(5)});
  }
  return out;
}

std::vector<WarpReductionRow> warp_reduction_table() {
  std::vector<WarpReductionRow> out;
  for (const auto& r : rows_of(kWarpReductionCsv, 8)) {
    out.push_back({r.at(0), r.num(1), r.num(2), r.num(3), r.num(4), r.num(5), r.num(6), r.num(7)});
  }
  return out;
}

std::string canonical_device(std::string_view name) {
  std::string up;
  for (char c : name) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "V100" || up == "P100") return up;
  throw ValidationError("no bundled fixtures for device '" + std::string(name) +
                        "' (known: v100, p100)");
}

std::string_view profile_text(std::string_view device) {
  return canonical_device(device) == "V100" ? kV100Profile : kP100Profile;
}

DeviceProfile v100_profile() { return parse_device_profile(kV100Profile); }
DeviceProfile p100_profile() { return parse_device_profile(kP100Profile); }

DeviceProfile profile_for(std::string_view device) {
  return parse_device_profile(profile_text(device));
}

std::vector<CostScenery> cost_table(std::string_view device) {
  const int col = column_offset(device);
  const std::string key = canonical_device(device);
  const auto points = concurrency_table();
  const auto switches = switch_point_table();

  std::vector<CostScenery> out;
  for (int scenery : {1, 2}) {
    CostScenery s{key, std::to_string(scenery), {}};
    for (const auto& p : points) {
      if (p.scenery != scenery) continue;
      CostCandidate c;
      c.cost = CostPoint::derive(p.label, col == 0 ? p.latency_v100 : p.latency_p100,
                                 col == 0 ? p.bandwidth_v100 : p.bandwidth_p100);
      s.candidates.push_back(std::move(c));
    }
    for (const auto& sp : switches) {
      if (sp.scenery != scenery || sp.threshold != "N_l") continue;
      auto& more = s.candidates.back();
      const double total = *(col == 0 ? sp.sync_cycles_v100 : sp.sync_cycles_p100);
      more.sync.level = scenery == 1 ? SyncLevel::kWarpTile : SyncLevel::kBlock;
      more.sync.per_invocation_count = kSwitchPointSyncCount;
      more.sync.latency_cycles = total / kSwitchPointSyncCount;
    }
    out.push_back(std::move(s));
  }
  return out;
}

BarrierTable barrier_table() {
  BarrierTable table;
  for (const auto& r : launch_overhead_table()) {
    if (r.launch_type == "traditional") table.launch.traditional_ns = r.overhead_ns;
    if (r.launch_type == "cooperative") table.launch.cooperative_ns = r.overhead_ns;
    if (r.launch_type == "cooperative_multi_device") table.launch.multi_device_ns = r.overhead_ns;
  }
  for (const auto& r : rows_of(kBarrierLatencyCsv, 5)) {
    BarrierLatency b;
    b.mechanism = barrier_mechanism_from_string(r.at(0));
    b.gpu_count = r.integer(1);
    if (auto v = r.opt(2)) b.blocks_per_sm = static_cast<int>(*v);
    if (auto v = r.opt(3)) b.threads_per_block = static_cast<int>(*v);
    b.latency_ns = r.num(4);
    table.entries.push_back(b);
  }
  return table;
}

std::vector<SweepEntry> block_sync_sweep(const DeviceProfile& profile, double peak_throughput) {
  std::vector<SweepEntry> sweep;
  for (int threads = profile.warp_size; threads <= profile.max_threads_per_block;
       threads += profile.warp_size) {
    for (int blocks = 1; blocks <= 32; ++blocks) {
      const int warps = active_warps_per_sm(profile, blocks, threads);
      sweep.push_back({{threads, blocks}, peak_throughput * warps / profile.max_warps_per_sm});
    }
  }
  return sweep;
}

std::vector<SwitchPointCheck> check_switch_points(std::string_view device, double tolerance) {
  const std::string key = canonical_device(device);
  const bool v100 = key == "V100";
  const auto reported = switch_point_table();
  std::vector<SwitchPointCheck> out;
  for (const auto& s : cost_table(key)) {
    const int scenery = std::stoi(s.scenery);
    const auto& basic = s.candidates.front();
    const auto& more = s.candidates.back();
    for (const auto& row : reported) {
      if (row.scenery != scenery) continue;
      SwitchPointCheck c{key, scenery, basic.cost.label, more.cost.label, row.threshold,
                         more.sync.total_cycles()};
      if (row.threshold == "N_l") {
        c.computed = switch_point_above(basic.cost, more.cost, more.sync).value_or(0.0);
      } else {
        c.computed = switch_point_between(basic.cost, more.sync);
      }
      c.reported = v100 ? row.switch_point_v100 : row.switch_point_p100;
      c.rel_error = (std::round(c.computed) - c.reported) / c.reported;
      c.within = std::abs(c.rel_error) <= tolerance;
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<ConcurrencyCheck> check_concurrency(std::string_view device, double tolerance) {
  const std::string key = canonical_device(device);
  const bool v100 = key == "V100";
  std::vector<ConcurrencyCheck> out;
  for (const auto& r : concurrency_table()) {
    ConcurrencyCheck c{key, r.scenery, r.label};
    c.computed = little_law_concurrency(v100 ? r.latency_v100 : r.latency_p100,
                                        v100 ? r.bandwidth_v100 : r.bandwidth_p100);
    c.reported = v100 ? r.concurrency_v100 : r.concurrency_p100;
    c.rel_error = (c.computed - c.reported) / c.reported;
    c.within = std::abs(c.rel_error) <= tolerance;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace syncperf::fixtures
