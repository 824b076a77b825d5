// SPDX-License-Identifier: Apache-2.0

#include "syncperf/device.hpp"

#include <string>

#include "syncperf/error.hpp"

namespace syncperf {

std::string_view to_string(Interconnect ic) {
  switch (ic) {
    case Interconnect::kPcie:
      return "pcie";
    case Interconnect::kNvlink:
      return "nvlink";
    case Interconnect::kNone:
      return "none";
  }
  return "none";
}

Interconnect interconnect_from_string(std::string_view text) {
  if (text == "pcie") return Interconnect::kPcie;
  if (text == "nvlink") return Interconnect::kNvlink;
  if (text == "none") return Interconnect::kNone;
  throw ValidationError("unknown interconnect '" + std::string(text) + "'");
}

void DeviceProfile::validate() const {
  auto require_positive = [this](int value, const char* field) {
    if (value <= 0) {
      throw ValidationError("device '" + name + "': " + field + " must be positive, got " +
                            std::to_string(value));
    }
  };
  require_positive(sm_count, "sm_count");
  require_positive(warp_size, "warp_size");
  require_positive(max_warps_per_sm, "max_warps_per_sm");
  require_positive(max_threads_per_block, "max_threads_per_block");
  require_positive(gpu_count, "gpu_count");
  if (!(clock_mhz > 0.0)) {
    throw ValidationError("device '" + name + "': clock_mhz must be positive");
  }
  if (max_threads_per_block % warp_size != 0) {
    throw ValidationError("device '" + name +
                          "': warp_size must divide max_threads_per_block");
  }
  if (static_cast<long long>(max_warps_per_sm) * warp_size < max_threads_per_block) {
    throw ValidationError("device '" + name +
                          "': max_warps_per_sm * warp_size is below max_threads_per_block");
  }
}

}  // namespace syncperf
