// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "syncperf/analysis.hpp"
#include "syncperf/data_io.hpp"
#include "syncperf/recommender.hpp"

namespace syncperf {

// Empty cells print as NA.
using Cell = std::variant<std::monostate, long long, double, std::string>;

struct Report {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

enum class ReportFormat { kTsv, kStructured };

ReportFormat report_format_from_string(std::string_view text);

// TSV: a "# kind" line, the header, then one line per row; reports separated
// by a blank line. Structured: {"reports": [{"kind", "columns", "rows"}]}
// with each row an object keyed by column name. Reals carry 6 significant
// digits in both.
std::string emit_report(const Report& report, ReportFormat format);
std::string emit_reports(std::span<const Report> reports, ReportFormat format);

std::vector<Report> analysis_reports(const AnalysisReport& analysis);

// Adjacent-pair thresholds of every scenery.
Report switch_point_report(const std::vector<CostScenery>& table);

Report recommendation_report(std::span<const std::pair<std::string, Recommendation>> recs);
Report barrier_report(const BarrierRecommendation& rec);

// Matrix over threads/block (rows) and blocks/SM (columns), row-major.
Report heatmap_report(const std::string& kind, std::span<const SweepEntry> sweep);

// Reduction cost of every candidate of a scenery over input sizes.
Report reduction_cost_report(const CostScenery& scenery, std::span<const double> sizes_bytes);

// Total barrier cost of every mechanism over iteration counts.
Report barrier_cost_report(const BarrierTable& table, int gpu_count,
                           std::span<const long long> iterations);

}  // namespace syncperf
