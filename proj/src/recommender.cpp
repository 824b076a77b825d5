// SPDX-License-Identifier: Apache-2.0

#include "syncperf/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "syncperf/error.hpp"

namespace syncperf {

namespace {

std::string bytes(double v) { return format_number(v) + " B"; }

bool fewer_wins(double n, const CostCandidate& basic, const CostCandidate& more,
                double safety_factor) {
  if (safety_factor == 1.0) return prefer_fewer_workers(n, basic.cost, more.cost, more.sync);
  return fewer_workers_by_threshold(n, basic.cost, more.cost, more.sync, safety_factor);
}

std::string describe(double n, const CostCandidate& basic, const CostCandidate& more,
                     const SwitchScenario& s, bool fewer) {
  const std::string& b = basic.cost.label;
  const std::string& m = more.cost.label;
  std::string text = "n=" + bytes(n) + "; ";
  switch (s.kind) {
    case ScenarioKind::kBelowBasic:
      text += "fits within the concurrency of " + b + " (" + bytes(basic.cost.concurrency_bytes) +
              ")";
      break;
    case ScenarioKind::kBetween:
      text += "between the concurrency of " + b + " (" + bytes(basic.cost.concurrency_bytes) +
              ") and " + m + " (" + bytes(more.cost.concurrency_bytes) + "); N_m=" +
              bytes(*s.applicable_threshold);
      break;
    case ScenarioKind::kAboveMore:
      text += "exceeds the concurrency of " + m + " (" + bytes(more.cost.concurrency_bytes) + "); ";
      text += s.applicable_threshold ? "N_l=" + bytes(*s.applicable_threshold)
                                     : std::string("no crossover");
      break;
  }
  text += "; barrier cost " + format_number(more.sync.total_cycles()) + " cycles (" +
          std::to_string(more.sync.per_invocation_count) + " x " +
          format_number(more.sync.latency_cycles) + "); ";
  text += fewer ? b + " beats " + m : m + " beats " + b;
  return text;
}

}  // namespace

double reduction_cost(double n_bytes, const std::vector<CostCandidate>& candidates,
                      std::size_t index) {
  const auto& c = candidates.at(index);
  double barriers = 0.0;
  for (std::size_t k = 1; k <= index; ++k) barriers += candidates[k].sync.total_cycles();
  return c.cost.latency_cycles + barriers +
         std::max(0.0, n_bytes - c.cost.concurrency_bytes) / c.cost.throughput_bytes_per_cycle;
}

Recommendation recommend_reduction_config(const ReductionQuery& q) {
  if (q.candidates.size() < 2) {
    throw ValidationError("a reduction query needs at least two candidate configurations");
  }
  if (q.element_bytes <= 0) throw ValidationError("element_bytes must be positive");
  q.device.validate();
  for (std::size_t k = 0; k < q.candidates.size(); ++k) {
    q.candidates[k].cost.validate();
    if (k > 0) {
      q.candidates[k].sync.validate();
      if (q.candidates[k].cost.concurrency_bytes < q.candidates[k - 1].cost.concurrency_bytes) {
        throw ValidationError("inconsistent candidates: concurrency of '" +
                              q.candidates[k].cost.label + "' is below that of '" +
                              q.candidates[k - 1].cost.label + "'");
      }
    }
  }
  const double n = static_cast<double>(q.input_bytes);

  std::size_t chosen = 0;
  std::size_t pair_hi = 1;
  bool fewer = false;
  for (std::size_t k = 1; k < q.candidates.size(); ++k) {
    pair_hi = k;
    fewer = fewer_wins(n, q.candidates[k - 1], q.candidates[k], q.safety_factor);
    if (fewer) break;
    chosen = k;
  }

  const auto& basic = q.candidates[pair_hi - 1];
  const auto& more = q.candidates[pair_hi];
  Recommendation r;
  r.chosen = q.candidates[chosen].cost.label;
  r.compared_with = (chosen == pair_hi ? basic : more).cost.label;
  r.scenario = resolve_scenario(n, basic.cost, more.cost, more.sync, q.safety_factor);
  r.n_m = switch_point_between(basic.cost, more.sync) * q.safety_factor;
  if (auto nl = switch_point_above(basic.cost, more.cost, more.sync)) {
    r.n_l = *nl * q.safety_factor;
  }
  r.rationale = describe(n, basic, more, r.scenario, fewer) + "; choose " + r.chosen;
  if (q.safety_factor != 1.0) {
    r.rationale += " (thresholds scaled by " + format_number(q.safety_factor) + ")";
  }
  return r;
}

// ---------------------------------------------------------------------------

std::string_view to_string(BarrierMechanism m) {
  switch (m) {
    case BarrierMechanism::kImplicitLaunch:
      return "implicit_launch";
    case BarrierMechanism::kGrid:
      return "grid";
    case BarrierMechanism::kCpuSide:
      return "cpu_side";
    case BarrierMechanism::kMultiGrid:
      return "multi_grid";
    case BarrierMechanism::kMultiDeviceLaunch:
      return "multi_device_launch";
  }
  return "implicit_launch";
}

BarrierMechanism barrier_mechanism_from_string(std::string_view text) {
  for (auto m : {BarrierMechanism::kImplicitLaunch, BarrierMechanism::kGrid,
                 BarrierMechanism::kCpuSide, BarrierMechanism::kMultiGrid,
                 BarrierMechanism::kMultiDeviceLaunch}) {
    if (to_string(m) == text) return m;
  }
  throw ValidationError("unknown barrier mechanism '" + std::string(text) + "'");
}

namespace {

constexpr BarrierMechanism kAllMechanisms[] = {
    BarrierMechanism::kImplicitLaunch, BarrierMechanism::kGrid, BarrierMechanism::kCpuSide,
    BarrierMechanism::kMultiGrid, BarrierMechanism::kMultiDeviceLaunch};

double launch_cost(BarrierMechanism m, const LaunchOverheads& launch) {
  switch (m) {
    case BarrierMechanism::kImplicitLaunch:
    case BarrierMechanism::kCpuSide:
      return launch.traditional_ns;
    case BarrierMechanism::kGrid:
      return launch.cooperative_ns;
    case BarrierMechanism::kMultiGrid:
    case BarrierMechanism::kMultiDeviceLaunch:
      return launch.multi_device_ns;
  }
  return 0.0;
}

// Fastest tabulated configuration of a mechanism at this GPU count.
const BarrierLatency* lookup(const BarrierTable& table, BarrierMechanism m, int gpus) {
  const BarrierLatency* best = nullptr;
  for (const auto& e : table.entries) {
    if (e.mechanism != m || e.gpu_count != gpus) continue;
    if (!best || e.latency_ns < best->latency_ns) best = &e;
  }
  return best;
}

std::string ns(double v) { return format_number(v) + " ns"; }

}  // namespace

BarrierRecommendation recommend_barrier(const BarrierQuery& q, const BarrierTable& table) {
  if (q.iterations < 1) throw ValidationError("iterations must be at least 1");
  if (q.gpu_count < 1) throw ValidationError("gpu_count must be at least 1");
  if (!(q.slack >= 1.0)) throw ValidationError("slack factor must be at least 1");

  BarrierRecommendation rec;
  std::vector<BarrierMechanism> wanted = q.mechanisms;
  const bool explicit_request = !wanted.empty();
  if (!explicit_request) {
    for (auto m : kAllMechanisms) {
      if (lookup(table, m, q.gpu_count)) wanted.push_back(m);
    }
  }
  for (auto m : wanted) {
    const BarrierLatency* e = lookup(table, m, q.gpu_count);
    if (!e) {
      rec.missing.push_back(m);
      continue;
    }
    BarrierOption o{m, e->latency_ns, launch_cost(m, table.launch), 0.0};
    o.total_ns = o.launch_ns + o.per_barrier_ns * static_cast<double>(q.iterations);
    rec.ranked.push_back(o);
  }

  if (!rec.missing.empty() || rec.ranked.empty()) {
    rec.sufficient_data = false;
    rec.ranked.clear();
    rec.rationale = "insufficient data: no latency on " + std::to_string(q.gpu_count) + " GPU(s)";
    if (!rec.missing.empty()) {
      rec.rationale += " for";
      for (auto m : rec.missing) rec.rationale += " " + std::string(to_string(m));
    }
    return rec;
  }

  std::stable_sort(rec.ranked.begin(), rec.ranked.end(),
                   [](const BarrierOption& a, const BarrierOption& b) {
                     return a.total_ns < b.total_ns;
                   });
  const BarrierOption& win = rec.ranked.front();
  rec.chosen = win.mechanism;
  if (rec.ranked.size() > 1) rec.margin_ns = rec.ranked[1].total_ns - win.total_ns;

  rec.rationale = std::string(to_string(win.mechanism)) + " wins: " + ns(win.total_ns) + " for " +
                  std::to_string(q.iterations) + " barrier(s) on " +
                  std::to_string(q.gpu_count) + " GPU(s)";
  for (std::size_t k = 1; k < rec.ranked.size(); ++k) {
    rec.rationale += "; " + std::string(to_string(rec.ranked[k].mechanism)) + " +" +
                     ns(rec.ranked[k].total_ns - win.total_ns);
  }
  for (const auto& o : rec.ranked) {
    if (o.mechanism != BarrierMechanism::kMultiGrid) continue;
    rec.multi_grid_ratio = o.total_ns / win.total_ns;
    rec.multi_grid_within_slack = *rec.multi_grid_ratio <= q.slack;
    if (o.mechanism != win.mechanism && rec.multi_grid_within_slack) {
      rec.rationale += "; multi_grid is " + format_number(*rec.multi_grid_ratio) +
                       "x the winner, within " + format_number(q.slack) +
                       "x slack: acceptable if a single persistent kernel is simpler";
    }
  }
  return rec;
}

bool multi_grid_config_ok(const DeviceProfile& profile, int blocks_per_sm, int threads_per_block) {
  return blocks_per_sm <= 8 && active_warps_per_sm(profile, blocks_per_sm, threads_per_block) <= 32;
}

}  // namespace syncperf
