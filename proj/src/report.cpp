// SPDX-License-Identifier: Apache-2.0

#include "syncperf/report.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "syncperf/error.hpp"

namespace syncperf {

namespace {

using Row = std::vector<Cell>;

Cell opt(const std::optional<double>& v) {
  if (!v) return std::monostate{};
  return *v;
}

Cell integer(long long v) { return v; }

std::string text_of(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return "NA"; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(const std::string& v) const { return v; }
  } visitor;
  return std::visit(visitor, c);
}

nlohmann::json json_of(const Cell& c) {
  struct {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(long long v) const { return v; }
    nlohmann::json operator()(double v) const {
      return std::strtod(format_number(v).c_str(), nullptr);
    }
    nlohmann::json operator()(const std::string& v) const { return v; }
  } visitor;
  return std::visit(visitor, c);
}

nlohmann::json json_of(const Report& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t k = 0; k < r.columns.size(); ++k) {
      obj[r.columns[k]] = k < row.size() ? json_of(row[k]) : nlohmann::json(nullptr);
    }
    rows.push_back(std::move(obj));
  }
  return {{"kind", r.kind}, {"columns", r.columns}, {"rows", std::move(rows)}};
}

std::string tsv_of(const Report& r) {
  std::string out = "# " + r.kind + "\n";
  for (std::size_t k = 0; k < r.columns.size(); ++k) {
    out += (k ? "\t" : "") + r.columns[k];
  }
  out += "\n";
  for (const auto& row : r.rows) {
    for (std::size_t k = 0; k < r.columns.size(); ++k) {
      out += (k ? "\t" : "") + (k < row.size() ? text_of(row[k]) : std::string("NA"));
    }
    out += "\n";
  }
  return out;
}

std::vector<Cell> estimate_cells(const Estimate& e) {
  return {e.value, opt(e.stddev), opt(e.standard_error)};
}

void append(Row& row, std::vector<Cell> more) {
  for (auto& c : more) row.push_back(std::move(c));
}

}  // namespace

ReportFormat report_format_from_string(std::string_view text) {
  if (text == "tsv") return ReportFormat::kTsv;
  if (text == "structured") return ReportFormat::kStructured;
  throw ValidationError("unknown output format '" + std::string(text) + "' (tsv, structured)");
}

std::string emit_report(const Report& report, ReportFormat format) {
  return emit_reports(std::span<const Report>(&report, 1), format);
}

std::string emit_reports(std::span<const Report> reports, ReportFormat format) {
  if (format == ReportFormat::kStructured) {
    nlohmann::json all = nlohmann::json::array();
    for (const auto& r : reports) all.push_back(json_of(r));
    return nlohmann::json{{"reports", std::move(all)}}.dump(2) + "\n";
  }
  std::string out;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    if (k) out += "\n";
    out += tsv_of(reports[k]);
  }
  return out;
}

std::vector<Report> analysis_reports(const AnalysisReport& a) {
  std::vector<Report> out;
  const std::vector<std::string> est = {"value", "stddev", "standard_error"};
  auto with_est = [&](std::vector<std::string> cols) {
    cols.insert(cols.end(), est.begin(), est.end());
    return cols;
  };

  Report lo{"launch_overhead",
            with_est({"device", "arm_ij", "arm_ji", "launches_i", "wait_units_j", "domain"}),
            {}};
  lo.columns.push_back("min_kernel_exec_latency");
  lo.columns.push_back("saturated");
  for (const auto& r : a.launch_overheads) {
    Row row{a.device_name, r.arm_ij, r.arm_ji, integer(r.launches_i), integer(r.wait_units_j),
            std::string(to_string(r.domain))};
    append(row, estimate_cells(r.overhead));
    row.push_back(r.min_kernel_exec_latency);
    row.push_back(std::string(r.saturated ? "yes" : "no"));
    lo.rows.push_back(std::move(row));
  }
  out.push_back(std::move(lo));

  Report il{"instruction_latency", with_est({"device", "instr", "repeats_r1", "repeats_r2", "domain"}),
            {}};
  for (const auto& r : a.instruction_latencies) {
    Row row{a.device_name, r.instr, integer(r.repeats_r1), integer(r.repeats_r2),
            std::string(to_string(r.domain))};
    append(row, estimate_cells(r.latency));
    il.rows.push_back(std::move(row));
  }
  out.push_back(std::move(il));

  Report kl{"kernel_total_latency", with_est({"device", "launches_a", "launches_b", "domain"}), {}};
  for (const auto& r : a.kernel_latencies) {
    Row row{a.device_name, integer(r.launches_a), integer(r.launches_b),
            std::string(to_string(r.domain))};
    append(row, estimate_cells(r.latency));
    kl.rows.push_back(std::move(row));
  }
  out.push_back(std::move(kl));

  Report sl{"sync_latency",
            with_est({"device", "level", "blocks_per_sm", "threads_per_block", "gpu_count",
                      "repeats_r1", "repeats_r2", "domain"}),
            {}};
  for (const auto& r : a.sync_latencies) {
    Row row{a.device_name,
            std::string(to_string(r.point.level)),
            integer(r.point.blocks_per_sm),
            integer(r.point.threads_per_block),
            integer(r.point.gpu_count),
            integer(r.point.repeats),
            integer(r.repeats_r2),
            std::string(to_string(r.domain))};
    append(row, estimate_cells(r.latency));
    sl.rows.push_back(std::move(row));
  }
  out.push_back(std::move(sl));
  return out;
}

Report switch_point_report(const std::vector<CostScenery>& table) {
  Report r{"switch_points",
           {"device", "scenery", "basic", "more", "sync_cycles", "C_basic", "C_more", "N_l", "N_m"},
           {}};
  for (const auto& s : table) {
    for (std::size_t k = 1; k < s.candidates.size(); ++k) {
      const auto& b = s.candidates[k - 1];
      const auto& m = s.candidates[k];
      r.rows.push_back({s.device, s.scenery, b.cost.label, m.cost.label, m.sync.total_cycles(),
                        b.cost.concurrency_bytes, m.cost.concurrency_bytes,
                        opt(switch_point_above(b.cost, m.cost, m.sync)),
                        switch_point_between(b.cost, m.sync)});
    }
  }
  return r;
}

Report recommendation_report(std::span<const std::pair<std::string, Recommendation>> recs) {
  Report r{"reduction_recommendation",
           {"scenery", "chosen", "compared_with", "scenario", "threshold", "N_l", "N_m",
            "rationale"},
           {}};
  for (const auto& [scenery, rec] : recs) {
    r.rows.push_back({scenery, rec.chosen, rec.compared_with,
                      std::string(to_string(rec.scenario.kind)),
                      opt(rec.scenario.applicable_threshold), opt(rec.n_l), opt(rec.n_m),
                      rec.rationale});
  }
  return r;
}

Report barrier_report(const BarrierRecommendation& rec) {
  Report r{"barrier_recommendation",
           {"rank", "mechanism", "launch_ns", "per_barrier_ns", "total_ns", "delta_ns",
            "ratio_to_winner"},
           {}};
  for (std::size_t k = 0; k < rec.ranked.size(); ++k) {
    const auto& o = rec.ranked[k];
    const double best = rec.ranked.front().total_ns;
    r.rows.push_back({integer(static_cast<long long>(k + 1)), std::string(to_string(o.mechanism)),
                      o.launch_ns, o.per_barrier_ns, o.total_ns, o.total_ns - best,
                      best > 0.0 ? Cell(o.total_ns / best) : Cell(std::monostate{})});
  }
  return r;
}

Report heatmap_report(const std::string& kind, std::span<const SweepEntry> sweep) {
  std::map<int, std::map<int, double>> grid;
  std::map<int, bool> blocks;
  for (const auto& e : sweep) {
    grid[e.config.threads_per_block][e.config.blocks_per_sm] = e.throughput;
    blocks[e.config.blocks_per_sm] = true;
  }
  Report r{kind, {"threads_per_block"}, {}};
  for (const auto& [b, _] : blocks) r.columns.push_back(std::to_string(b));
  for (const auto& [t, cols] : grid) {
    Row row{integer(t)};
    for (const auto& [b, _] : blocks) {
      auto it = cols.find(b);
      row.push_back(it == cols.end() ? Cell(std::monostate{}) : Cell(it->second));
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

Report reduction_cost_report(const CostScenery& scenery, std::span<const double> sizes) {
  Report r{"reduction_cost", {"input_bytes"}, {}};
  for (const auto& c : scenery.candidates) r.columns.push_back(c.cost.label);
  for (double n : sizes) {
    Row row{n};
    for (std::size_t k = 0; k < scenery.candidates.size(); ++k) {
      row.push_back(reduction_cost(n, scenery.candidates, k));
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

Report barrier_cost_report(const BarrierTable& table, int gpu_count,
                           std::span<const long long> iterations) {
  Report r{"barrier_cost", {"iterations"}, {}};
  bool header_done = false;
  for (long long it : iterations) {
    BarrierQuery q;
    q.iterations = it;
    q.gpu_count = gpu_count;
    const auto rec = recommend_barrier(q, table);
    if (!rec.sufficient_data) throw ValidationError(rec.rationale);
    auto ranked = rec.ranked;
    std::sort(ranked.begin(), ranked.end(),
              [](const BarrierOption& a, const BarrierOption& b) { return a.mechanism < b.mechanism; });
    if (!header_done) {
      for (const auto& o : ranked) r.columns.push_back(std::string(to_string(o.mechanism)));
      header_done = true;
    }
    Row row{integer(it)};
    for (const auto& o : ranked) row.push_back(o.total_ns);
    r.rows.push_back(std::move(row));
  }
  return r;
}

}  // namespace syncperf
