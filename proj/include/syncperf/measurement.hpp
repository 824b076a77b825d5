// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "syncperf/cost_model.hpp"

namespace syncperf {

inline constexpr int kSchemaVersion = 1;

enum class ClockDomain { kCpuNs, kGpuCycles };

std::string_view to_string(ClockDomain domain);
ClockDomain clock_domain_from_string(std::string_view text);

struct TimingSample {
  std::string experiment_id;
  ClockDomain clock_domain = ClockDomain::kCpuNs;
  double value = 0.0;
  int run_index = 0;

  friend bool operator==(const TimingSample&, const TimingSample&) = default;
};

// One arm of a kernel-fusion experiment: `launches` back-to-back launches of a
// kernel that waits `wait_units` units. Paired with its mirror (launches and
// wait_units swapped) to estimate launch overhead.
struct FusionArm {
  int launches = 1;
  int wait_units = 1;
  friend bool operator==(const FusionArm&, const FusionArm&) = default;
};

// One arm of a repeat-differencing experiment: a kernel repeating `instr`
// `repeats` times in a dependent chain.
struct RepeatArm {
  std::string instr;
  int repeats = 1;
  friend bool operator==(const RepeatArm&, const RepeatArm&) = default;
};

// `launches` launches of the same kernel between two host timestamps.
struct LaunchSequenceArm {
  int launches = 1;
  friend bool operator==(const LaunchSequenceArm&, const LaunchSequenceArm&) = default;
};

// One sweep point of a barrier benchmark, repeated `repeats` times in-kernel.
struct SyncArm {
  SyncLevel level = SyncLevel::kBlock;
  int blocks_per_sm = 1;
  int threads_per_block = 32;
  int gpu_count = 1;
  int repeats = 1;
  friend bool operator==(const SyncArm&, const SyncArm&) = default;
};

using ExperimentParams = std::variant<FusionArm, RepeatArm, LaunchSequenceArm, SyncArm>;

std::string_view experiment_kind_name(const ExperimentParams& params);

struct Experiment {
  std::string id;
  ExperimentParams params;
  std::vector<TimingSample> samples;

  friend bool operator==(const Experiment&, const Experiment&) = default;
};

enum class Provenance { kHardware, kEmulator, kFixture };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view text);

struct MeasurementBatch {
  int schema_version = kSchemaVersion;
  std::string device_name;
  Provenance provenance = Provenance::kHardware;
  // Extra header keys (harness version, host name, ...), kept verbatim.
  std::map<std::string, std::string> metadata;
  std::vector<Experiment> experiments;

  // Schema version, unique ids, sample ownership, non-negative values and a
  // single clock domain per experiment. Throws ValidationError.
  void validate() const;

  const Experiment* find(std::string_view id) const;

  friend bool operator==(const MeasurementBatch&, const MeasurementBatch&) = default;
};

}  // namespace syncperf
