// SPDX-License-Identifier: Apache-2.0

#include "syncperf/emulator.hpp"

#include <charconv>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "syncperf/data_io.hpp"
#include "syncperf/error.hpp"

namespace syncperf {

namespace {

struct ArmSpec {
  std::string id;
  ExperimentParams params;
  ClockDomain domain;
  double mean;
};

double draw(std::mt19937_64& rng, double mean, double sigma) {
  if (sigma == 0.0) return mean;
  std::normal_distribution<double> noise(0.0, sigma);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double v = mean + noise(rng);
    if (v >= 0.0) return v;
  }
  return 0.0;
}

MeasurementBatch build(const EmulatedDevice& dev, const std::vector<ArmSpec>& arms, int runs) {
  if (runs < 1) throw ValidationError("runs must be at least 1");
  dev.validate();
  std::mt19937_64 rng(dev.seed);
  MeasurementBatch b;
  b.device_name = dev.name;
  b.provenance = Provenance::kEmulator;
  b.metadata["seed"] = std::to_string(dev.seed);
  b.metadata["noise_sigma"] = format_exact(dev.noise_sigma);
  for (const auto& a : arms) {
    if (b.find(a.id)) continue;
    Experiment e{a.id, a.params, {}};
    for (int r = 0; r < runs; ++r) {
      e.samples.push_back({a.id, a.domain, draw(rng, a.mean, dev.noise_sigma), r});
    }
    b.experiments.push_back(std::move(e));
  }
  return b;
}

void require_positive(int v, const char* what) {
  if (v < 1) throw ValidationError(std::string(what) + " must be at least 1");
}

void require_ordered(int hi, int lo, const char* what) {
  require_positive(lo, what);
  if (hi <= lo) throw ValidationError(std::string(what) + ": first count must exceed the second");
}

std::string sync_id(const SyncArm& p) {
  return "sync_" + std::string(to_string(p.level)) + "_b" + std::to_string(p.blocks_per_sm) +
         "_t" + std::to_string(p.threads_per_block) + "_g" + std::to_string(p.gpu_count) + "_r" +
         std::to_string(p.repeats);
}

std::vector<ArmSpec> fusion_arms(const EmulatedDevice& dev, int i, int j) {
  std::vector<ArmSpec> arms;
  for (auto [x, y] : {std::pair{i, j}, std::pair{j, i}}) {
    arms.push_back({"fusion_i" + std::to_string(x) + "_j" + std::to_string(y), FusionArm{x, y},
                    ClockDomain::kCpuNs,
                    x * dev.launch_overhead_ns + static_cast<double>(x) * y * dev.wait_unit_ns});
  }
  return arms;
}

std::vector<ArmSpec> repeat_arms(const EmulatedDevice& dev, std::string_view instr, int r1,
                                 int r2) {
  auto it = dev.instr_latency_cycles.find(std::string(instr));
  if (it == dev.instr_latency_cycles.end()) {
    throw ValidationError("emulated device has no latency for instruction '" +
                          std::string(instr) + "'");
  }
  std::vector<ArmSpec> arms;
  for (int r : {r1, r2}) {
    arms.push_back({"repeat_" + it->first + "_r" + std::to_string(r),
                    RepeatArm{it->first, r}, ClockDomain::kGpuCycles,
                    dev.base_cycles + r * it->second});
  }
  return arms;
}

std::vector<ArmSpec> sequence_arms(const EmulatedDevice& dev, int a, int b) {
  std::vector<ArmSpec> arms;
  for (int n : {a, b}) {
    arms.push_back({"launch_seq_n" + std::to_string(n), LaunchSequenceArm{n}, ClockDomain::kCpuNs,
                    dev.host_overhead_ns + n * dev.kernel_total_latency_ns});
  }
  return arms;
}

std::vector<ArmSpec> sync_arms(const EmulatedDevice& dev, SyncArm point, int r1, int r2) {
  const SyncPointKey key{point.level, point.blocks_per_sm, point.threads_per_block,
                         point.gpu_count};
  auto it = dev.sync_latency.find(key);
  if (it == dev.sync_latency.end()) {
    throw ValidationError("emulated device has no " + std::string(to_string(point.level)) +
                          " latency at " + std::to_string(point.blocks_per_sm) + " blocks/SM, " +
                          std::to_string(point.threads_per_block) + " threads/block, " +
                          std::to_string(point.gpu_count) + " GPU(s)");
  }
  std::vector<ArmSpec> arms;
  for (int r : {r1, r2}) {
    point.repeats = r;
    arms.push_back({sync_id(point), point, ClockDomain::kGpuCycles,
                    dev.base_cycles + r * it->second});
  }
  return arms;
}

template <typename T>
T number(const KeyValue& kv) {
  T v{};
  const char* end = kv.value.data() + kv.value.size();
  const auto [ptr, ec] = std::from_chars(kv.value.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(ErrorCode::kParse, kv.line, kv.key.size() + 2,
                     "'" + kv.key + "' expects a number, got '" + kv.value + "'");
  }
  return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos == s.npos ? s.npos : pos - start));
    if (pos == s.npos) return parts;
    start = pos + 1;
  }
}

}  // namespace

void EmulatedDevice::validate() const {
  auto check = [](double v, const std::string& what) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError(what + " must be finite and >= 0");
  };
  check(launch_overhead_ns, "launch_overhead_ns");
  check(wait_unit_ns, "wait_unit_ns");
  check(noise_sigma, "noise_sigma");
  check(base_cycles, "base_cycles");
  check(kernel_total_latency_ns, "kernel_total_latency_ns");
  check(host_overhead_ns, "host_overhead_ns");
  for (const auto& [label, v] : instr_latency_cycles) {
    if (label.empty()) throw ValidationError("empty instruction label");
    check(v, "latency of '" + label + "'");
  }
  for (const auto& [key, v] : sync_latency) {
    const auto& [level, bps, tpb, gpus] = key;
    if (bps < 1 || tpb < 1 || gpus < 1) {
      throw ValidationError("sync point counts must be at least 1");
    }
    check(v, std::string(to_string(level)) + " latency");
  }
}

EmulatedDevice emulated_v100() {
  EmulatedDevice d;
  d.name = "V100";
  d.instr_latency_cycles = {{"fadd", 4.0}, {"dadd", 8.0}};
  d.sync_latency = {
      {{SyncLevel::kWarpTile, 1, 32, 1}, 14.0},
      {{SyncLevel::kWarpCoalesced, 1, 32, 1}, 14.0},
      {{SyncLevel::kBlock, 1, 1024, 1}, 22.0},
  };
  return d;
}

MeasurementBatch generate_fusion_batch(const EmulatedDevice& dev, int i, int j, int runs) {
  require_positive(i, "launches");
  require_positive(j, "wait units");
  return build(dev, fusion_arms(dev, i, j), runs);
}

MeasurementBatch generate_repeatdiff_batch(const EmulatedDevice& dev, std::string_view instr,
                                           int r1, int r2, int runs) {
  require_ordered(r1, r2, "repeats");
  return build(dev, repeat_arms(dev, instr, r1, r2), runs);
}

MeasurementBatch generate_launch_sequence_batch(const EmulatedDevice& dev, int reps_a, int reps_b,
                                                int runs) {
  require_ordered(reps_b, reps_a, "launches");
  return build(dev, sequence_arms(dev, reps_a, reps_b), runs);
}

MeasurementBatch generate_sync_batch(const EmulatedDevice& dev, const SyncArm& point, int r1,
                                     int r2, int runs) {
  require_ordered(r1, r2, "barrier repeats");
  return build(dev, sync_arms(dev, point, r1, r2), runs);
}

MeasurementBatch generate_suite(const EmulatedDevice& dev, int runs) {
  std::vector<ArmSpec> arms = fusion_arms(dev, 5, 1);
  for (const auto& [label, _] : dev.instr_latency_cycles) {
    for (auto& a : repeat_arms(dev, label, 256, 32)) arms.push_back(std::move(a));
  }
  for (auto& a : sequence_arms(dev, 1, 10)) arms.push_back(std::move(a));
  for (const auto& [key, _] : dev.sync_latency) {
    const auto& [level, bps, tpb, gpus] = key;
    for (auto& a : sync_arms(dev, SyncArm{level, bps, tpb, gpus, 0}, 1000, 100)) {
      arms.push_back(std::move(a));
    }
  }
  return build(dev, arms, runs);
}

EmulatedDevice parse_emulated_device(std::string_view text) {
  EmulatedDevice d;
  for (const auto& kv : parse_key_values(text)) {
    if (kv.key == "name") {
      d.name = kv.value;
    } else if (kv.key == "launch_overhead_ns") {
      d.launch_overhead_ns = number<double>(kv);
    } else if (kv.key == "wait_unit_ns") {
      d.wait_unit_ns = number<double>(kv);
    } else if (kv.key == "noise_sigma") {
      d.noise_sigma = number<double>(kv);
    } else if (kv.key == "seed") {
      d.seed = number<std::uint64_t>(kv);
    } else if (kv.key == "base_cycles") {
      d.base_cycles = number<double>(kv);
    } else if (kv.key == "kernel_total_latency_ns") {
      d.kernel_total_latency_ns = number<double>(kv);
    } else if (kv.key == "host_overhead_ns") {
      d.host_overhead_ns = number<double>(kv);
    } else if (kv.key.rfind("instr.", 0) == 0 && kv.key.size() > 6) {
      d.instr_latency_cycles[kv.key.substr(6)] = number<double>(kv);
    } else if (kv.key.rfind("sync.", 0) == 0) {
      const auto parts = split(kv.key, '.');
      if (parts.size() != 5) {
        throw ParseError(ErrorCode::kParse, kv.line, 1,
                         "sync keys look like sync.<level>.<bps>.<tpb>.<gpus>");
      }
      auto field = [&](const std::string& s) {
        return number<int>(KeyValue{kv.key, s, kv.line});
      };
      SyncLevel level;
      try {
        level = sync_level_from_string(parts[1]);
      } catch (const Error& e) {
        throw ParseError(ErrorCode::kParse, kv.line, 6, e.what());
      }
      d.sync_latency[{level, field(parts[2]), field(parts[3]), field(parts[4])}] =
          number<double>(kv);
    } else {
      throw ParseError(ErrorCode::kParse, kv.line, 1,
                       "unknown emulated device key '" + kv.key + "'");
    }
  }
  d.validate();
  return d;
}

std::string write_emulated_device(const EmulatedDevice& d) {
  std::string out;
  auto put = [&](const std::string& k, const std::string& v) { out += k + "=" + v + "\n"; };
  put("name", d.name);
  put("launch_overhead_ns", format_exact(d.launch_overhead_ns));
  put("wait_unit_ns", format_exact(d.wait_unit_ns));
  put("noise_sigma", format_exact(d.noise_sigma));
  put("seed", std::to_string(d.seed));
  put("base_cycles", format_exact(d.base_cycles));
  put("kernel_total_latency_ns", format_exact(d.kernel_total_latency_ns));
  put("host_overhead_ns", format_exact(d.host_overhead_ns));
  for (const auto& [label, v] : d.instr_latency_cycles) put("instr." + label, format_exact(v));
  for (const auto& [key, v] : d.sync_latency) {
    const auto& [level, bps, tpb, gpus] = key;
    put("sync." + std::string(to_string(level)) + "." + std::to_string(bps) + "." +
            std::to_string(tpb) + "." + std::to_string(gpus),
        format_exact(v));
  }
  return out;
}

}  // namespace syncperf
