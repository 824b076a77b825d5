// SPDX-License-Identifier: Apache-2.0

#include "syncperf/measurement.hpp"

#include <cmath>
#include <set>
#include <string>
#include <type_traits>

#include "syncperf/error.hpp"

namespace syncperf {

std::string_view to_string(ClockDomain domain) {
  return domain == ClockDomain::kCpuNs ? "cpu_ns" : "gpu_cycles";
}

ClockDomain clock_domain_from_string(std::string_view text) {
  if (text == "cpu_ns") return ClockDomain::kCpuNs;
  if (text == "gpu_cycles") return ClockDomain::kGpuCycles;
  throw Error(ErrorCode::kUnitMismatch, "unknown clock domain '" + std::string(text) + "'");
}

std::string_view experiment_kind_name(const ExperimentParams& params) {
  struct Visitor {
    std::string_view operator()(const FusionArm&) const { return "fusion"; }
    std::string_view operator()(const RepeatArm&) const { return "repeat"; }
    std::string_view operator()(const LaunchSequenceArm&) const { return "launch_seq"; }
    std::string_view operator()(const SyncArm&) const { return "sync"; }
  };
  return std::visit(Visitor{}, params);
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kHardware:
      return "hardware";
    case Provenance::kEmulator:
      return "emulator";
    case Provenance::kFixture:
      return "fixture";
  }
  return "hardware";
}

Provenance provenance_from_string(std::string_view text) {
  if (text == "hardware") return Provenance::kHardware;
  if (text == "emulator") return Provenance::kEmulator;
  if (text == "fixture") return Provenance::kFixture;
  throw ValidationError("unknown provenance '" + std::string(text) + "'");
}

namespace {

void validate_params(const Experiment& e) {
  auto positive = [&e](int v, const char* field) {
    if (v <= 0) {
      throw ValidationError("experiment '" + e.id + "': " + field + " must be positive");
    }
  };
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, FusionArm>) {
          positive(p.launches, "launches");
          positive(p.wait_units, "wait_units");
        } else if constexpr (std::is_same_v<T, RepeatArm>) {
          if (p.instr.empty()) throw ValidationError("experiment '" + e.id + "': empty instr");
          positive(p.repeats, "repeats");
        } else if constexpr (std::is_same_v<T, LaunchSequenceArm>) {
          positive(p.launches, "launches");
        } else {
          positive(p.blocks_per_sm, "blocks_per_sm");
          positive(p.threads_per_block, "threads_per_block");
          positive(p.gpu_count, "gpus");
          positive(p.repeats, "repeats");
        }
      },
      e.params);
}

}  // namespace

void MeasurementBatch::validate() const {
  if (schema_version != kSchemaVersion) {
    throw Error(ErrorCode::kSchema,
                "unsupported schema_version " + std::to_string(schema_version));
  }
  std::set<std::string_view> ids;
  for (const auto& e : experiments) {
    if (e.id.empty()) throw ValidationError("experiment with empty id");
    if (!ids.insert(e.id).second) {
      throw ValidationError("duplicate experiment id '" + e.id + "'");
    }
    validate_params(e);
    for (const auto& s : e.samples) {
      if (s.experiment_id != e.id) {
        throw ValidationError("sample of '" + s.experiment_id + "' filed under '" + e.id + "'");
      }
      if (!(s.value >= 0.0) || !std::isfinite(s.value)) {
        throw ValidationError("experiment '" + e.id + "' run " + std::to_string(s.run_index) +
                              ": sample value must be finite and non-negative");
      }
      if (s.clock_domain != e.samples.front().clock_domain) {
        throw Error(ErrorCode::kUnitMismatch,
                    "experiment '" + e.id + "' mixes clock domains");
      }
    }
  }
}

const Experiment* MeasurementBatch::find(std::string_view id) const {
  for (const auto& e : experiments) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

}  // namespace syncperf
