// SPDX-License-Identifier: Apache-2.0

#include "syncperf/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "syncperf/analysis.hpp"
#include "syncperf/data_io.hpp"
#include "syncperf/emulator.hpp"
#include "syncperf/error.hpp"
#include "syncperf/fixtures.hpp"
#include "syncperf/recommender.hpp"
#include "syncperf/report.hpp"

namespace syncperf {

namespace {

struct Options {
  // shared
  std::string format;
  std::string out_path;
  std::string device_path;
  std::string fixtures;
  std::vector<std::string> measurements;
  std::string costs_path;
  std::string scenery = "all";
  // analyze
  std::string reducer = "mean";
  std::string latency_domain;
  // recommend
  std::string kind;
  long long bytes = -1;
  long long elements = -1;
  int element_bytes = 8;
  double safety_factor = 1.0;
  long long iterations = 1;
  int gpus = 1;
  std::vector<std::string> mechanisms;
  double slack = 3.0;
  // emit-plot
  std::string plot;
  // emulate
  std::string spec_path;
  std::string experiment = "suite";
  std::optional<std::uint64_t> seed;
  std::optional<double> sigma;
  int runs = 10;
  int i = 5;
  int j = 1;
  std::string instr = "fadd";
  int r1 = 0;
  int r2 = 0;
  std::string level = "block";
  int bps = 1;
  int tpb = 1024;
};

class Context {
 public:
  Context(const Options& o, std::istream& in, std::ostream& out, std::ostream& err)
      : o_(o), in_(in), out_(out), err_(err) {}

  const Options& opt() const { return o_; }
  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }

  std::string read_input(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(in_), {}};
    return read_text_file(path);
  }

  // Machine output goes to --out (tsv unless --format says otherwise) or, with
  // --format alone, replaces the human summary on stdout.
  void finish(std::span<const Report> reports, const std::string& summary) {
    const ReportFormat fmt =
        o_.format.empty() ? ReportFormat::kTsv : report_format_from_string(o_.format);
    if (!o_.out_path.empty()) {
      write_text_file(o_.out_path, emit_reports(reports, fmt));
      out_ << summary;
    } else if (!o_.format.empty()) {
      out_ << emit_reports(reports, fmt);
    } else {
      out_ << summary;
    }
  }

 private:
  const Options& o_;
  std::istream& in_;
  std::ostream& out_;
  std::ostream& err_;
};

std::string num(double v) { return format_number(v); }

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : "NA"; }

std::string percent(double rel) { return (rel >= 0 ? "+" : "") + num(rel * 100.0) + "%"; }

std::vector<std::string> fixture_devices(const std::string& name) {
  if (name.empty() || name == "all") return {"V100", "P100"};
  return {fixtures::canonical_device(name)};
}

bool scenery_selected(const std::string& want, const std::string& scenery) {
  return want == "all" || want == scenery;
}

std::string estimate_text(const Estimate& e, ClockDomain d) {
  return num(e.value) + " " + std::string(to_string(d)) + " (stddev " + opt_num(e.stddev) +
         ", standard error " + opt_num(e.standard_error) + ")";
}

// ---------------------------------------------------------------------------

int cmd_analyze(Context& ctx) {
  const auto& o = ctx.opt();
  AnalysisOptions options;
  if (!o.device_path.empty()) {
    options.device = load_device_profile(o.device_path);
  } else if (!o.fixtures.empty()) {
    options.device = fixtures::profile_for(o.fixtures);
  }
  options.warp_sync_reducer = o.reducer == "min" ? Reducer::kMin : Reducer::kMean;
  if (!o.latency_domain.empty()) options.latency_domain = clock_domain_from_string(o.latency_domain);

  std::vector<AnalysisReport> parts;
  for (const auto& path : o.measurements) {
    parts.push_back(analyze_batch(parse_measurements(ctx.read_input(path)), options));
  }
  const AnalysisReport merged = merge_reports(std::move(parts));
  for (const auto& w : merged.warnings) ctx.err() << "warning: " << w << "\n";

  std::string s;
  for (const auto& r : merged.launch_overheads) {
    s += "launch overhead i=" + std::to_string(r.launches_i) + " j=" +
         std::to_string(r.wait_units_j) + ": " + estimate_text(r.overhead, r.domain) +
         (r.saturated ? "" : " [not saturated]") + "\n";
  }
  for (const auto& r : merged.instruction_latencies) {
    s += "instruction " + r.instr + " r=" + std::to_string(r.repeats_r1) + "/" +
         std::to_string(r.repeats_r2) + ": " + estimate_text(r.latency, r.domain) + "\n";
  }
  for (const auto& r : merged.kernel_latencies) {
    s += "kernel total latency n=" + std::to_string(r.launches_b) + "/" +
         std::to_string(r.launches_a) + ": " + estimate_text(r.latency, r.domain) + "\n";
  }
  for (const auto& r : merged.sync_latencies) {
    s += "sync " + std::string(to_string(r.point.level)) + " " +
         std::to_string(r.point.blocks_per_sm) + "x" + std::to_string(r.point.threads_per_block) +
         " on " + std::to_string(r.point.gpu_count) + " GPU(s) r=" +
         std::to_string(r.point.repeats) + "/" + std::to_string(r.repeats_r2) + ": " +
         estimate_text(r.latency, r.domain) + "\n";
  }
  if (s.empty()) s = "no estimates\n";
  const auto reports = analysis_reports(merged);
  ctx.finish(reports, s);
  return 0;
}

// ---------------------------------------------------------------------------

std::optional<double> reported_switch_point(const std::string& device, const std::string& scenery,
                                            const std::string& more_label,
                                            const std::string& threshold) {
  std::string key;
  try {
    key = fixtures::canonical_device(device);
  } catch (const Error&) {
    return std::nullopt;
  }
  for (const auto& row : fixtures::switch_point_table()) {
    if (std::to_string(row.scenery) != scenery || row.label != more_label ||
        row.threshold != threshold) {
      continue;
    }
    return key == "V100" ? row.switch_point_v100 : row.switch_point_p100;
  }
  return std::nullopt;
}

int cmd_predict(Context& ctx) {
  const auto& o = ctx.opt();
  std::vector<CostScenery> table;
  if (!o.costs_path.empty()) {
    table = load_cost_table(o.costs_path);
  } else {
    for (const auto& d : fixture_devices(o.fixtures)) {
      for (auto& s : fixtures::cost_table(d)) table.push_back(std::move(s));
    }
  }
  Report r{"switch_points",
           {"device", "scenery", "basic", "more", "sync_cycles", "threshold", "computed",
            "reported", "rel_error"},
           {}};
  std::string s;
  for (const auto& sc : table) {
    if (!scenery_selected(o.scenery, sc.scenery)) continue;
    for (std::size_t k = 1; k < sc.candidates.size(); ++k) {
      const auto& b = sc.candidates[k - 1];
      const auto& m = sc.candidates[k];
      const std::pair<std::string, std::optional<double>> thresholds[] = {
          {"N_l", switch_point_above(b.cost, m.cost, m.sync)},
          {"N_m", switch_point_between(b.cost, m.sync)}};
      for (const auto& [name, value] : thresholds) {
        std::optional<double> reported;
        if (sc.candidates.size() == 2) reported = reported_switch_point(sc.device, sc.scenery,
                                                                         m.cost.label, name);
        std::optional<double> rel;
        if (value && reported) rel = (std::round(*value) - *reported) / *reported;
        r.rows.push_back({sc.device, sc.scenery, b.cost.label, m.cost.label,
                          m.sync.total_cycles(), name,
                          value ? Cell(*value) : Cell(std::monostate{}),
                          reported ? Cell(*reported) : Cell(std::monostate{}),
                          rel ? Cell(*rel) : Cell(std::monostate{})});
        s += sc.device + " scenery " + sc.scenery + " " + b.cost.label + " -> " + m.cost.label +
             " sync " + num(m.sync.total_cycles()) + " cycles: " + name + "=" +
             (value ? num(*value) + " B" : std::string("none (no crossover)"));
        if (reported) {
          s += " (reported " + num(*reported) + " B" + (rel ? ", " + percent(*rel) : "") + ")";
        }
        s += "\n";
      }
    }
  }
  ctx.finish(std::span<const Report>(&r, 1), s);
  return 0;
}

// ---------------------------------------------------------------------------

int recommend_reduction(Context& ctx) {
  const auto& o = ctx.opt();
  if ((o.bytes < 0) == (o.elements < 0)) {
    throw CLI::ValidationError("recommend", "reduction needs exactly one of --bytes, --elements");
  }
  std::vector<CostScenery> table;
  DeviceProfile device;
  if (!o.costs_path.empty()) {
    table = load_cost_table(o.costs_path);
    if (!o.device_path.empty()) {
      device = load_device_profile(o.device_path);
    } else if (!table.empty()) {
      device = fixtures::profile_for(table.front().device);
    }
  } else {
    const std::string name = o.fixtures.empty() ? "v100" : o.fixtures;
    table = fixtures::cost_table(name);
    device = o.device_path.empty() ? fixtures::profile_for(name) : load_device_profile(o.device_path);
  }
  const std::uint64_t bytes = o.bytes >= 0 ? static_cast<std::uint64_t>(o.bytes)
                                           : static_cast<std::uint64_t>(o.elements) *
                                                 static_cast<std::uint64_t>(o.element_bytes);

  std::vector<std::pair<std::string, Recommendation>> recs;
  std::string s;
  for (const auto& sc : table) {
    if (!scenery_selected(o.scenery, sc.scenery)) continue;
    ReductionQuery q;
    q.input_bytes = bytes;
    q.element_bytes = o.element_bytes;
    q.device = device;
    q.candidates = sc.candidates;
    q.safety_factor = o.safety_factor;
    auto rec = recommend_reduction_config(q);
    s += sc.device + " scenery " + sc.scenery + ": " + rec.chosen + " (" +
         std::string(to_string(rec.scenario.kind)) + "): " + rec.rationale + "\n";
    recs.emplace_back(sc.scenery, std::move(rec));
  }
  if (recs.empty()) throw Error(ErrorCode::kInsufficientData, "no scenery matches the request");
  const Report r = recommendation_report(recs);
  ctx.finish(std::span<const Report>(&r, 1), s);
  return 0;
}

int recommend_barrier_cmd(Context& ctx) {
  const auto& o = ctx.opt();
  if (!o.fixtures.empty() && fixtures::canonical_device(o.fixtures) != "V100") {
    throw Error(ErrorCode::kInsufficientData, "barrier latencies are bundled for V100 only");
  }
  BarrierQuery q;
  q.iterations = o.iterations;
  q.gpu_count = o.gpus;
  q.slack = o.slack;
  for (const auto& m : o.mechanisms) q.mechanisms.push_back(barrier_mechanism_from_string(m));
  const auto rec = recommend_barrier(q, fixtures::barrier_table());
  if (!rec.sufficient_data) throw Error(ErrorCode::kInsufficientData, rec.rationale);

  std::string s = "winner: " + std::string(to_string(*rec.chosen)) + "\n";
  s += "margin: " + num(rec.margin_ns) + " ns\n";
  if (rec.multi_grid_ratio) {
    s += "multi_grid: " + num(*rec.multi_grid_ratio) + "x the winner, " +
         (rec.multi_grid_within_slack ? "within " : "outside ") + num(o.slack) + "x slack\n";
  }
  for (const auto& opt : rec.ranked) {
    s += "  " + std::string(to_string(opt.mechanism)) + ": " + num(opt.total_ns) + " ns (launch " +
         num(opt.launch_ns) + " + " + std::to_string(o.iterations) + " x " +
         num(opt.per_barrier_ns) + ")\n";
  }
  s += rec.rationale + "\n";
  const Report r = barrier_report(rec);
  ctx.finish(std::span<const Report>(&r, 1), s);
  return 0;
}

int cmd_recommend(Context& ctx) {
  if (ctx.opt().kind == "reduction") return recommend_reduction(ctx);
  return recommend_barrier_cmd(ctx);
}

// ---------------------------------------------------------------------------

int cmd_emit_plot(Context& ctx) {
  const auto& o = ctx.opt();
  const std::string name = o.fixtures.empty() ? "v100" : o.fixtures;
  Report r;
  if (o.plot == "block_sync_heatmap") {
    const auto device = o.device_path.empty() ? fixtures::profile_for(name)
                                              : load_device_profile(o.device_path);
    double peak = 0.0;
    const bool v100 = fixtures::canonical_device(name) == "V100";
    for (const auto& w : fixtures::warp_sync_table()) {
      if (w.type == "block_warp") peak = v100 ? w.throughput_v100 : w.throughput_p100;
    }
    const auto sweep = fixtures::block_sync_sweep(device, peak);
    r = heatmap_report("block_sync_throughput", sweep);
  } else if (o.plot == "reduction_cost") {
    const auto table =
        o.costs_path.empty() ? fixtures::cost_table(name) : load_cost_table(o.costs_path);
    const std::string want = o.scenery == "all" ? "2" : o.scenery;
    std::vector<double> sizes;
    for (double n = 8; n <= 65536; n *= 2) sizes.push_back(n);
    const CostScenery* sc = nullptr;
    for (const auto& t : table) {
      if (t.scenery == want) sc = &t;
    }
    if (!sc) throw Error(ErrorCode::kInsufficientData, "no scenery '" + want + "' in the cost table");
    r = reduction_cost_report(*sc, sizes);
  } else {
    if (fixtures::canonical_device(name) != "V100") {
      throw Error(ErrorCode::kInsufficientData, "barrier latencies are bundled for V100 only");
    }
    const std::vector<long long> iterations = {1, 10, 100, 1000, 10000};
    r = barrier_cost_report(fixtures::barrier_table(), o.gpus, iterations);
  }
  const ReportFormat fmt = o.format.empty() ? ReportFormat::kTsv : report_format_from_string(o.format);
  const std::string text = emit_report(r, fmt);
  if (o.out_path.empty()) {
    ctx.out() << text;
  } else {
    write_text_file(o.out_path, text);
    ctx.out() << "wrote " << r.kind << " (" << r.rows.size() << " rows) to " << o.out_path << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_emulate(Context& ctx) {
  const auto& o = ctx.opt();
  EmulatedDevice dev =
      o.spec_path.empty() ? emulated_v100() : parse_emulated_device(ctx.read_input(o.spec_path));
  if (o.seed) dev.seed = *o.seed;
  if (o.sigma) dev.noise_sigma = *o.sigma;

  MeasurementBatch batch;
  if (o.experiment == "suite") {
    batch = generate_suite(dev, o.runs);
  } else if (o.experiment == "fusion") {
    batch = generate_fusion_batch(dev, o.i, o.j, o.runs);
  } else if (o.experiment == "repeat") {
    batch = generate_repeatdiff_batch(dev, o.instr, o.r1 ? o.r1 : 256, o.r2 ? o.r2 : 32, o.runs);
  } else if (o.experiment == "launch_seq") {
    batch = generate_launch_sequence_batch(dev, o.r2 ? o.r2 : 1, o.r1 ? o.r1 : 10, o.runs);
  } else {
    SyncArm point{sync_level_from_string(o.level), o.bps, o.tpb, o.gpus, 0};
    batch = generate_sync_batch(dev, point, o.r1 ? o.r1 : 1000, o.r2 ? o.r2 : 100, o.runs);
  }
  const std::string text = o.format == "structured" ? write_measurements_structured(batch)
                                                     : write_measurements(batch);
  if (o.out_path.empty()) {
    ctx.out() << text;
  } else {
    write_text_file(o.out_path, text);
    std::size_t samples = 0;
    for (const auto& e : batch.experiments) samples += e.samples.size();
    ctx.out() << "wrote " << batch.experiments.size() << " experiments (" << samples
              << " samples) to " << o.out_path << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_validate(Context& ctx) {
  const auto& o = ctx.opt();
  std::string s;
  std::vector<std::string> failures;
  Report r{"validation", {"check", "subject", "computed", "reported", "rel_error", "ok"}, {}};
  auto yes_no = [](bool ok) { return std::string(ok ? "yes" : "no"); };

  const bool only_files =
      o.fixtures.empty() && (!o.measurements.empty() || !o.device_path.empty() || !o.costs_path.empty());
  if (!only_files) {
    const auto devices = fixture_devices(o.fixtures);
    const auto bad = fixtures::corrupted_tables();
    const auto tables = fixtures::all_tables();
    for (auto id : tables) {
      const bool ok = std::find(bad.begin(), bad.end(), id) == bad.end();
      r.rows.push_back({"checksum", std::string(fixtures::table_name(id)), std::monostate{},
                        std::monostate{}, std::monostate{}, yes_no(ok)});
      if (!ok) failures.push_back("fixture table '" + std::string(fixtures::table_name(id)) +
                                  "' does not match its checksum");
    }
    s += "checksums: " + std::to_string(tables.size() - bad.size()) + "/" +
         std::to_string(tables.size()) + " tables intact\n";

    std::size_t conc_ok = 0, conc_all = 0, sp_ok = 0, sp_all = 0;
    for (const auto& d : devices) {
      for (const auto& c : fixtures::check_concurrency(d)) {
        ++conc_all;
        conc_ok += c.within;
        const std::string subject = c.device + " scenery " + std::to_string(c.scenery) + " " + c.label;
        r.rows.push_back({"concurrency", subject, c.computed, c.reported, c.rel_error, yes_no(c.within)});
        if (!c.within) failures.push_back("concurrency of " + subject + " is " + num(c.computed) +
                                          " B, reported " + num(c.reported) + " B");
      }
      for (const auto& c : fixtures::check_switch_points(d)) {
        ++sp_all;
        sp_ok += c.within;
        const std::string subject =
            c.device + " scenery " + std::to_string(c.scenery) + " " + c.threshold;
        r.rows.push_back({"switch_point", subject, c.computed, c.reported, c.rel_error, yes_no(c.within)});
        if (!c.within) failures.push_back("switch point " + subject + " is " + num(c.computed) +
                                          " B, reported " + num(c.reported) + " B");
      }
    }
    s += "concurrency: " + std::to_string(conc_ok) + "/" + std::to_string(conc_all) +
         " within 2%\n";
    s += std::to_string(sp_ok) + "/" + std::to_string(sp_all) + " switch points within 1.5%\n";
  }

  auto check_file = [&](const std::string& what, const std::string& path, auto&& fn) {
    try {
      const std::string detail = fn();
      s += path + ": ok (" + detail + ")\n";
      r.rows.push_back({what, path, std::monostate{}, std::monostate{}, std::monostate{}, yes_no(true)});
    } catch (const Error& e) {
      failures.push_back(path + ": " + std::string(error_code_name(e.code())) + " " + e.what());
      r.rows.push_back({what, path, std::monostate{}, std::monostate{}, std::monostate{}, yes_no(false)});
    }
  };
  for (const auto& path : o.measurements) {
    check_file("measurements", path, [&] {
      const auto b = parse_measurements(ctx.read_input(path));
      std::size_t samples = 0;
      for (const auto& e : b.experiments) samples += e.samples.size();
      return std::to_string(b.experiments.size()) + " experiments, " + std::to_string(samples) +
             " samples";
    });
  }
  if (!o.device_path.empty()) {
    check_file("device_profile", o.device_path,
               [&] { return "device " + load_device_profile(o.device_path).name; });
  }
  if (!o.costs_path.empty()) {
    check_file("cost_table", o.costs_path, [&] {
      return std::to_string(load_cost_table(o.costs_path).size()) + " sceneries";
    });
  }

  ctx.finish(std::span<const Report>(&r, 1), s);
  for (const auto& f : failures) ctx.err() << "E_VALIDATION: " << f << "\n";
  return failures.empty() ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  Options o;
  CLI::App app{"GPU synchronization cost model and micro-benchmark analysis", "syncperf"};
  app.require_subcommand(1, 1);
  app.option_defaults()->always_capture_default();

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Machine output format (tsv, structured)")
        ->check(CLI::IsMember({"tsv", "structured"}));
    sub->add_option("--out", o.out_path, "Write machine output to this file");
  };
  auto add_fixtures = [&](CLI::App* sub, const char* help) {
    sub->add_option("--fixtures", o.fixtures, help)
        ->check(CLI::IsMember({"v100", "p100", "all", "V100", "P100"}));
  };
  auto add_scenery = [&](CLI::App* sub) {
    sub->add_option("--scenery", o.scenery, "Scenery id (1, 2, all)")
        ->check(CLI::IsMember({"1", "2", "all"}));
  };

  auto* analyze = app.add_subcommand("analyze", "Measurements to launch/instruction/barrier estimates");
  analyze->add_option("--measurements", o.measurements, "Measurement files ('-' reads stdin)")
      ->required();
  analyze->add_option("--device", o.device_path, "Device profile (key=value)");
  add_fixtures(analyze, "Use a bundled device profile (v100, p100)");
  analyze->add_option("--reducer", o.reducer, "Reducer for warp-level barrier arms")
      ->check(CLI::IsMember({"mean", "min"}));
  analyze->add_option("--latency-domain", o.latency_domain,
                      "Report instruction and barrier latencies in cpu_ns or gpu_cycles")
      ->check(CLI::IsMember({"cpu_ns", "gpu_cycles"}));
  add_output(analyze);

  auto* predict = app.add_subcommand("predict", "Switch points N_l and N_m from cost tables");
  add_fixtures(predict, "Bundled cost tables (v100, p100, all)");
  predict->add_option("--costs", o.costs_path, "Cost table CSV instead of the bundled tables");
  add_scenery(predict);
  add_output(predict);

  auto* recommend = app.add_subcommand("recommend", "Reduction configuration or barrier mechanism");
  recommend->add_option("--kind", o.kind, "reduction or barrier")
      ->required()
      ->check(CLI::IsMember({"reduction", "barrier"}));
  recommend->add_option("--bytes", o.bytes, "Reduction input size in bytes");
  recommend->add_option("--elements", o.elements, "Reduction input size in elements");
  recommend->add_option("--element-bytes", o.element_bytes, "Bytes per element")
      ->check(CLI::PositiveNumber);
  recommend->add_option("--safety-factor", o.safety_factor, "Stretch factor for both switch points")
      ->check(CLI::PositiveNumber);
  recommend->add_option("--iterations", o.iterations, "Barrier count")->check(CLI::PositiveNumber);
  recommend->add_option("--gpus", o.gpus, "GPU count")->check(CLI::PositiveNumber);
  recommend->add_option("--mechanisms", o.mechanisms,
                        "Barrier mechanisms to compare (default: all with data)");
  recommend->add_option("--slack", o.slack, "Multi-grid slack factor")->check(CLI::Range(1.0, 1e9));
  recommend->add_option("--costs", o.costs_path, "Cost table CSV");
  recommend->add_option("--device", o.device_path, "Device profile (key=value)");
  add_fixtures(recommend, "Bundled tables (v100, p100)");
  add_scenery(recommend);
  add_output(recommend);

  auto* plot = app.add_subcommand("emit-plot", "Plot data as TSV matrices or series");
  plot->add_option("--plot", o.plot, "block_sync_heatmap, reduction_cost or barrier_cost")
      ->required()
      ->check(CLI::IsMember({"block_sync_heatmap", "reduction_cost", "barrier_cost"}));
  add_fixtures(plot, "Bundled tables (v100, p100)");
  plot->add_option("--device", o.device_path, "Device profile (key=value)");
  plot->add_option("--costs", o.costs_path, "Cost table CSV");
  add_scenery(plot);
  plot->add_option("--gpus", o.gpus, "GPU count for barrier_cost")->check(CLI::PositiveNumber);
  add_output(plot);

  auto* emulate = app.add_subcommand("emulate", "Synthetic measurement files from an emulated device");
  emulate->add_option("--spec", o.spec_path, "Emulated device (key=value); default V100-like");
  emulate->add_option("--experiment", o.experiment, "suite, fusion, repeat, launch_seq or sync")
      ->check(CLI::IsMember({"suite", "fusion", "repeat", "launch_seq", "sync"}));
  emulate->add_option("--seed", o.seed, "Noise seed");
  emulate->add_option("--sigma", o.sigma, "Noise standard deviation")->check(CLI::NonNegativeNumber);
  emulate->add_option("--runs", o.runs, "Samples per arm")->check(CLI::PositiveNumber);
  emulate->add_option("--i", o.i, "Fusion launches")->check(CLI::PositiveNumber);
  emulate->add_option("--j", o.j, "Fusion wait units")->check(CLI::PositiveNumber);
  emulate->add_option("--instr", o.instr, "Instruction label");
  emulate->add_option("--r1", o.r1, "Larger repeat or launch count");
  emulate->add_option("--r2", o.r2, "Smaller repeat or launch count");
  emulate->add_option("--level", o.level, "Sync level");
  emulate->add_option("--bps", o.bps, "Blocks per SM")->check(CLI::PositiveNumber);
  emulate->add_option("--tpb", o.tpb, "Threads per block")->check(CLI::PositiveNumber);
  emulate->add_option("--gpus", o.gpus, "GPU count")->check(CLI::PositiveNumber);
  add_output(emulate);

  auto* validate = app.add_subcommand("validate", "Recompute derived fixture values; check files");
  add_fixtures(validate, "Fixture devices to recompute (v100, p100, all)");
  validate->add_option("--measurements", o.measurements, "Measurement files to schema-check");
  validate->add_option("--device", o.device_path, "Device profile to check");
  validate->add_option("--costs", o.costs_path, "Cost table to check");
  add_output(validate);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "E_USAGE: " << e.what() << "\n";
    return 2;
  }

  Context ctx(o, in, out, err);
  try {
    if (*analyze) return cmd_analyze(ctx);
    if (*predict) return cmd_predict(ctx);
    if (*recommend) return cmd_recommend(ctx);
    if (*plot) return cmd_emit_plot(ctx);
    if (*emulate) return cmd_emulate(ctx);
    return cmd_validate(ctx);
  } catch (const CLI::Error& e) {
    err << "E_USAGE: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << error_code_name(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "E_INTERNAL: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace syncperf
