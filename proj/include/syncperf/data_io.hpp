// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "syncperf/cost_model.hpp"
#include "syncperf/device.hpp"
#include "syncperf/measurement.hpp"

namespace syncperf {

// ---------------------------------------------------------------------------
// Measurement files
//
// Line-oriented text: a header of `key: value` lines, then a CSV table.
//
//   # comment
//   schema_version: 1
//   device: V100
//   provenance: emulator
//   experiment: f5x1 kind=fusion launches=5 wait_units=1
//   experiment: f1x5 kind=fusion launches=1 wait_units=5
//   experiment_id,clock_domain,run_index,value
//   f5x1,cpu_ns,0,55405
//   ...
//
// Experiment kinds and their parameters:
//   fusion      launches, wait_units
//   repeat      instr, repeats
//   launch_seq  launches
//   sync        level, blocks_per_sm, threads_per_block, gpus, repeats
//
// The unit of `value` is given by clock_domain (cpu_ns or gpu_cycles).
// Ids, metadata keys and instruction labels are [A-Za-z0-9_.-] tokens.
// A JSON object with the same fields is accepted as an alternative encoding.
// ---------------------------------------------------------------------------

inline constexpr std::string_view kSampleTableHeader = "experiment_id,clock_domain,run_index,value";

MeasurementBatch parse_measurements(std::string_view text);
MeasurementBatch load_measurements(const std::filesystem::path& path);

std::string write_measurements(const MeasurementBatch& batch);
std::string write_measurements_structured(const MeasurementBatch& batch);
void save_measurements(const MeasurementBatch& batch, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Flat `key=value` files (device profiles, emulator settings).
// ---------------------------------------------------------------------------

struct KeyValue {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

std::vector<KeyValue> parse_key_values(std::string_view text);

DeviceProfile parse_device_profile(std::string_view text);
DeviceProfile load_device_profile(const std::filesystem::path& path);
std::string write_device_profile(const DeviceProfile& profile);

// ---------------------------------------------------------------------------
// Cost tables: ordered candidate configurations per (device, scenery).
//
//   device,scenery,label,latency_cycles,throughput_bytes_per_cycle,sync_level,sync_latency_cycles,sync_count
//   V100,1,1 thread,13,0.62,,,
//   V100,1,1 warp,13,19.6,warp_tile,22,5
//
// Candidates appear in increasing worker count. The sync columns of a row
// give the barrier that row's configuration adds over the previous row; they
// are left empty on the first row of a scenery.
// ---------------------------------------------------------------------------

inline constexpr std::string_view kCostTableHeader =
    "device,scenery,label,latency_cycles,throughput_bytes_per_cycle,sync_level,"
    "sync_latency_cycles,sync_count";

struct CostCandidate {
  CostPoint cost;
  SyncCost sync;  // zero latency on the first candidate of a scenery
};

struct CostScenery {
  std::string device;
  std::string scenery;
  std::vector<CostCandidate> candidates;
};

std::vector<CostScenery> parse_cost_table(std::string_view text);
std::vector<CostScenery> load_cost_table(const std::filesystem::path& path);
std::string write_cost_table(const std::vector<CostScenery>& table);

// Text formatting shared by all writers: locale-independent, '.' decimal
// separator. `format_number` uses 6 significant digits; `format_exact` the
// shortest representation that parses back to the same double.
std::string format_number(double value);
std::string format_exact(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace syncperf
