// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <random>
#include <string>

#include "syncperf/emulator.hpp"
#include "syncperf/measurement.hpp"

namespace syncperf::testing {

inline std::string random_token(std::mt19937_64& rng, std::size_t max_len = 12) {
  static constexpr char kChars[] =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-.";
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, sizeof(kChars) - 2);
  std::string s;
  for (std::size_t k = len(rng); k > 0; --k) s += kChars[pick(rng)];
  return s;
}

// Values spanning many magnitudes, including exact zero, to stress exact
// round trips.
inline double random_value(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> exponent(-290, 290);
  switch (kind(rng)) {
    case 0:
      return 0.0;
    case 1:
      return std::floor(unit(rng) * 1e6);
    case 2:
      return (0.1 + 0.9 * unit(rng)) * std::pow(10.0, exponent(rng));
    default:
      return unit(rng) * 1e5;
  }
}

inline MeasurementBatch random_batch(std::mt19937_64& rng) {
  MeasurementBatch b;
  b.device_name = random_token(rng);
  b.provenance = static_cast<Provenance>(std::uniform_int_distribution<int>(0, 2)(rng));
  std::uniform_int_distribution<int> small(1, 64);
  for (int k = std::uniform_int_distribution<int>(0, 3)(rng); k > 0; --k) {
    b.metadata["meta_" + random_token(rng)] = random_token(rng, 20);
  }
  const int n_exp = std::uniform_int_distribution<int>(0, 6)(rng);
  for (int e = 0; e < n_exp; ++e) {
    Experiment x;
    x.id = "e" + std::to_string(e) + "_" + random_token(rng);
    ClockDomain d = ClockDomain::kCpuNs;
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
      case 0:
        x.params = FusionArm{small(rng), small(rng)};
        break;
      case 1:
        x.params = RepeatArm{random_token(rng), small(rng)};
        d = ClockDomain::kGpuCycles;
        break;
      case 2:
        x.params = LaunchSequenceArm{small(rng)};
        break;
      default:
        x.params = SyncArm{static_cast<SyncLevel>(std::uniform_int_distribution<int>(0, 6)(rng)),
                           small(rng), 32 * small(rng) % 1025 + 1, small(rng) % 8 + 1, small(rng)};
        d = ClockDomain::kGpuCycles;
    }
    const int n_samples = std::uniform_int_distribution<int>(0, 8)(rng);
    for (int s = 0; s < n_samples; ++s) x.samples.push_back({x.id, d, random_value(rng), s});
    b.experiments.push_back(std::move(x));
  }
  return b;
}

inline EmulatedDevice random_device(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 20000.0);
  std::uniform_int_distribution<int> small(1, 32);
  EmulatedDevice d;
  d.name = random_token(rng);
  d.launch_overhead_ns = u(rng);
  d.wait_unit_ns = u(rng);
  d.noise_sigma = std::uniform_int_distribution<int>(0, 1)(rng) ? u(rng) / 100.0 : 0.0;
  d.seed = rng();
  d.base_cycles = u(rng);
  d.kernel_total_latency_ns = u(rng);
  d.host_overhead_ns = u(rng);
  for (int k = std::uniform_int_distribution<int>(1, 3)(rng); k > 0; --k) {
    d.instr_latency_cycles[random_token(rng)] = u(rng) / 1000.0;
  }
  for (int k = std::uniform_int_distribution<int>(0, 3)(rng); k > 0; --k) {
    const auto level = static_cast<SyncLevel>(std::uniform_int_distribution<int>(0, 6)(rng));
    d.sync_latency[{level, small(rng), 32 * small(rng), small(rng) % 8 + 1}] = u(rng) / 10.0;
  }
  return d;
}

}  // namespace syncperf::testing
