// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace syncperf {

enum class Interconnect { kPcie, kNvlink, kNone };

std::string_view to_string(Interconnect ic);
Interconnect interconnect_from_string(std::string_view text);

// Static description of one GPU model plus how many of them share a node.
// Occupancy limiters other than the warp cap (registers, shared memory) are
// expressed by lowering max_warps_per_sm.
struct DeviceProfile {
  std::string name;
  int sm_count = 0;
  int warp_size = 32;
  int max_warps_per_sm = 0;
  int max_threads_per_block = 0;
  double clock_mhz = 0.0;
  int gpu_count = 1;
  Interconnect interconnect = Interconnect::kNone;

  // Throws ValidationError naming the first violated invariant.
  void validate() const;

  double ns_to_cycles(double ns) const { return ns * clock_mhz * 1e-3; }
  double cycles_to_ns(double cycles) const { return cycles / (clock_mhz * 1e-3); }

  friend bool operator==(const DeviceProfile&, const DeviceProfile&) = default;
};

}  // namespace syncperf
