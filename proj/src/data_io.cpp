// SPDX-License-Identifier: Apache-2.0

#include "syncperf/data_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <system_error>
#include <type_traits>

#include <nlohmann/json.hpp>

#include "syncperf/error.hpp"

namespace syncperf {

namespace {

using json = nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// Splits on '\n', keeping 1-based line numbers.
std::vector<std::pair<std::size_t, std::string_view>> split_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t line = 1;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view l = text.substr(0, nl);
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    lines.emplace_back(line++, l);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

struct Field {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Field> split_csv(std::string_view line) {
  std::vector<Field> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    const auto end = comma == std::string_view::npos ? line.size() : comma;
    fields.push_back({trim(line.substr(start, end - start)), start + 1});
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) return std::nullopt;
  }
  return value;
}

template <typename T>
T require_number(std::string_view s, std::size_t line, std::size_t column, std::string_view what) {
  auto v = parse_number<T>(s);
  if (!v) {
    throw ParseError(ErrorCode::kParse, line, column,
                     "expected a number for " + std::string(what) + ", got '" +
                         std::string(s) + "'");
  }
  return *v;
}

// Rethrows a validation failure with the position of the offending input.
template <typename Fn>
auto at_position(std::size_t line, std::size_t column, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.code(), line, column, e.what());
  }
}

ExperimentParams parse_experiment_params(std::string_view kind,
                                         const std::map<std::string, std::string>& kv,
                                         std::size_t line) {
  std::map<std::string, std::string> rest = kv;
  auto take = [&](const char* key) -> std::string {
    auto it = rest.find(key);
    if (it == rest.end()) {
      throw ParseError(ErrorCode::kParse, line, 0,
                       "experiment of kind '" + std::string(kind) + "' needs '" + key + "'");
    }
    std::string v = it->second;
    rest.erase(it);
    return v;
  };
  auto take_int = [&](const char* key) {
    return require_number<int>(take(key), line, 0, key);
  };

  ExperimentParams params;
  if (kind == "fusion") {
    FusionArm p;
    p.launches = take_int("launches");
    p.wait_units = take_int("wait_units");
    params = p;
  } else if (kind == "repeat") {
    RepeatArm p;
    p.instr = take("instr");
    p.repeats = take_int("repeats");
    params = p;
  } else if (kind == "launch_seq") {
    params = LaunchSequenceArm{take_int("launches")};
  } else if (kind == "sync") {
    SyncArm p;
    const std::string level = take("level");
    p.level = at_position(line, 0, [&] { return sync_level_from_string(level); });
    p.blocks_per_sm = take_int("blocks_per_sm");
    p.threads_per_block = take_int("threads_per_block");
    p.gpu_count = take_int("gpus");
    p.repeats = take_int("repeats");
    params = p;
  } else {
    throw ParseError(ErrorCode::kUnknownExperiment, line, 0,
                     "unknown experiment kind '" + std::string(kind) + "'");
  }
  if (!rest.empty()) {
    throw ParseError(ErrorCode::kParse, line, 0,
                     "unexpected parameter '" + rest.begin()->first + "' for kind '" +
                         std::string(kind) + "'");
  }
  return params;
}

Experiment parse_experiment_line(std::string_view value, std::size_t line) {
  std::istringstream in{std::string(value)};
  std::string id;
  in >> id;
  if (id.empty() || id.find('=') != std::string::npos) {
    throw ParseError(ErrorCode::kParse, line, 0, "experiment line must start with an id");
  }
  std::map<std::string, std::string> kv;
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ParseError(ErrorCode::kParse, line, 0, "expected key=value, got '" + token + "'");
    }
    if (!kv.emplace(token.substr(0, eq), token.substr(eq + 1)).second) {
      throw ParseError(ErrorCode::kParse, line, 0, "repeated key in '" + token + "'");
    }
  }
  auto kind = kv.find("kind");
  if (kind == kv.end()) throw ParseError(ErrorCode::kParse, line, 0, "experiment needs kind=");
  const std::string k = kind->second;
  kv.erase(kind);
  return Experiment{id, parse_experiment_params(k, kv, line), {}};
}

std::string experiment_line(const Experiment& e) {
  std::string out = e.id + " kind=" + std::string(experiment_kind_name(e.params));
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        auto add = [&](const char* k, const auto& v) {
          out += ' ';
          out += k;
          out += '=';
          if constexpr (std::is_arithmetic_v<std::decay_t<decltype(v)>>) {
            out += std::to_string(v);
          } else {
            out += v;
          }
        };
        if constexpr (std::is_same_v<T, FusionArm>) {
          add("launches", p.launches);
          add("wait_units", p.wait_units);
        } else if constexpr (std::is_same_v<T, RepeatArm>) {
          add("instr", p.instr);
          add("repeats", p.repeats);
        } else if constexpr (std::is_same_v<T, LaunchSequenceArm>) {
          add("launches", p.launches);
        } else {
          add("level", std::string(to_string(p.level)));
          add("blocks_per_sm", p.blocks_per_sm);
          add("threads_per_block", p.threads_per_block);
          add("gpus", p.gpu_count);
          add("repeats", p.repeats);
        }
      },
      e.params);
  return out;
}

MeasurementBatch parse_text_measurements(std::string_view text) {
  MeasurementBatch batch;
  std::map<std::string, std::size_t, std::less<>> index;
  bool have_version = false;
  bool have_device = false;
  bool in_table = false;

  for (const auto& [line, raw] : split_lines(text)) {
    const std::string_view l = trim(raw);
    if (l.empty() || l.front() == '#') continue;

    if (!in_table) {
      if (l == kSampleTableHeader) {
        in_table = true;
        continue;
      }
      const auto colon = l.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(ErrorCode::kParse, line, 1,
                         "expected 'key: value' header line or the sample table header");
      }
      const std::string key{trim(l.substr(0, colon))};
      const std::string_view value = trim(l.substr(colon + 1));
      const std::size_t value_col = static_cast<std::size_t>(value.data() - raw.data()) + 1;
      if (key == "schema_version") {
        batch.schema_version = require_number<int>(value, line, value_col, "schema_version");
        if (batch.schema_version != kSchemaVersion) {
          throw ParseError(ErrorCode::kSchema, line, value_col,
                           "unsupported schema_version " + std::to_string(batch.schema_version));
        }
        have_version = true;
      } else if (key == "device") {
        batch.device_name = std::string(value);
        have_device = true;
      } else if (key == "provenance") {
        batch.provenance =
            at_position(line, value_col, [&] { return provenance_from_string(value); });
      } else if (key == "experiment") {
        Experiment e = parse_experiment_line(value, line);
        if (!index.emplace(e.id, batch.experiments.size()).second) {
          throw ParseError(ErrorCode::kParse, line, value_col,
                           "duplicate experiment id '" + e.id + "'");
        }
        batch.experiments.push_back(std::move(e));
      } else if (key.empty()) {
        throw ParseError(ErrorCode::kParse, line, 1, "empty header key");
      } else {
        batch.metadata[key] = std::string(value);
      }
      continue;
    }

    const auto fields = split_csv(raw);
    if (fields.size() != 4) {
      throw ParseError(ErrorCode::kParse, line, 1,
                       "expected 4 fields (experiment_id,clock_domain,run_index,value), got " +
                           std::to_string(fields.size()));
    }
    auto it = index.find(fields[0].text);
    if (it == index.end()) {
      throw ParseError(ErrorCode::kUnknownExperiment, line, fields[0].column,
                       "sample refers to undeclared experiment '" + std::string(fields[0].text) +
                           "'");
    }
    TimingSample s;
    s.experiment_id = it->first;
    s.clock_domain = at_position(line, fields[1].column,
                                 [&] { return clock_domain_from_string(fields[1].text); });
    s.run_index = require_number<int>(fields[2].text, line, fields[2].column, "run_index");
    s.value = require_number<double>(fields[3].text, line, fields[3].column, "value");
    if (s.value < 0.0) {
      throw ParseError(ErrorCode::kValidation, line, fields[3].column,
                       "negative sample value " + std::string(fields[3].text) + " for '" +
                           s.experiment_id + "' run " + std::to_string(s.run_index));
    }
    auto& exp = batch.experiments[it->second];
    if (!exp.samples.empty() && exp.samples.front().clock_domain != s.clock_domain) {
      throw ParseError(ErrorCode::kUnitMismatch, line, fields[1].column,
                       "experiment '" + exp.id + "' mixes clock domains");
    }
    exp.samples.push_back(std::move(s));
  }

  if (!have_version) throw ParseError(ErrorCode::kSchema, 0, 0, "missing schema_version header");
  if (!have_device) throw ParseError(ErrorCode::kParse, 0, 0, "missing device header");
  if (!in_table) throw ParseError(ErrorCode::kParse, 0, 0, "missing sample table header");
  batch.validate();
  return batch;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

MeasurementBatch parse_structured_measurements(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(ErrorCode::kParse, line, col, "malformed structured measurements");
  }
  try {
    MeasurementBatch batch;
    batch.schema_version = doc.at("schema_version").get<int>();
    if (batch.schema_version != kSchemaVersion) {
      throw Error(ErrorCode::kSchema,
                  "unsupported schema_version " + std::to_string(batch.schema_version));
    }
    batch.device_name = doc.at("device").get<std::string>();
    batch.provenance = provenance_from_string(doc.value("provenance", std::string("hardware")));
    if (doc.contains("metadata")) {
      batch.metadata = doc.at("metadata").get<std::map<std::string, std::string>>();
    }
    for (const auto& je : doc.at("experiments")) {
      std::map<std::string, std::string> kv;
      for (const auto& [k, v] : je.at("params").items()) {
        kv[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
      Experiment e{je.at("id").get<std::string>(),
                   parse_experiment_params(je.at("kind").get<std::string>(), kv, 0),
                   {}};
      for (const auto& js : je.at("samples")) {
        TimingSample s;
        s.experiment_id = e.id;
        s.clock_domain = clock_domain_from_string(js.at("clock_domain").get<std::string>());
        s.run_index = js.at("run_index").get<int>();
        s.value = js.at("value").get<double>();
        e.samples.push_back(std::move(s));
      }
      batch.experiments.push_back(std::move(e));
    }
    batch.validate();
    return batch;
  } catch (const json::exception& e) {
    throw ParseError(ErrorCode::kParse, 0, 0, std::string("structured measurements: ") + e.what());
  }
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto r =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 6);
  return std::string(buf.data(), r.ptr);
}

std::string format_exact(double value) {
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), r.ptr);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path.string() + "' failed");
}

MeasurementBatch parse_measurements(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    throw ParseError(ErrorCode::kParse, 1, 1, "empty measurement file");
  }
  if (text[first] == '{') return parse_structured_measurements(text);
  return parse_text_measurements(text);
}

MeasurementBatch load_measurements(const std::filesystem::path& path) {
  return parse_measurements(read_text_file(path));
}

namespace {

bool is_token(std::string_view s) {
  if (s.empty()) return false;
  for (unsigned char c : s) {
    if (!(std::isalnum(c) || c == '_' || c == '-' || c == '.')) return false;
  }
  return true;
}

bool is_line_safe(std::string_view s) {
  return s.find_first_of("\r\n") == std::string_view::npos && trim(s) == s;
}

// The text format cannot carry ids with separators or multi-line values.
void check_writable(const MeasurementBatch& batch) {
  batch.validate();
  if (!is_line_safe(batch.device_name) || batch.device_name.empty()) {
    throw ValidationError("device name must be a non-empty single line without edge blanks");
  }
  for (const auto& [k, v] : batch.metadata) {
    if (!is_token(k) || k == "schema_version" || k == "device" || k == "provenance" ||
        k == "experiment") {
      throw ValidationError("metadata key '" + k + "' is reserved or not a plain token");
    }
    if (!is_line_safe(v)) throw ValidationError("metadata '" + k + "' must be a single line");
  }
  for (const auto& e : batch.experiments) {
    if (!is_token(e.id)) {
      throw ValidationError("experiment id '" + e.id + "' must use [A-Za-z0-9_.-] only");
    }
    if (const auto* r = std::get_if<RepeatArm>(&e.params); r && !is_token(r->instr)) {
      throw ValidationError("instruction label '" + r->instr + "' must use [A-Za-z0-9_.-] only");
    }
  }
}

}  // namespace

std::string write_measurements(const MeasurementBatch& batch) {
  check_writable(batch);
  std::string out;
  out += "# syncperf measurements\n";
  out += "schema_version: " + std::to_string(batch.schema_version) + "\n";
  out += "device: " + batch.device_name + "\n";
  out += "provenance: " + std::string(to_string(batch.provenance)) + "\n";
  for (const auto& [k, v] : batch.metadata) out += k + ": " + v + "\n";
  for (const auto& e : batch.experiments) out += "experiment: " + experiment_line(e) + "\n";
  out += std::string(kSampleTableHeader) + "\n";
  for (const auto& e : batch.experiments) {
    for (const auto& s : e.samples) {
      out += s.experiment_id;
      out += ',';
      out += to_string(s.clock_domain);
      out += ',';
      out += std::to_string(s.run_index);
      out += ',';
      out += format_exact(s.value);
      out += '\n';
    }
  }
  return out;
}

std::string write_measurements_structured(const MeasurementBatch& batch) {
  json doc;
  doc["schema_version"] = batch.schema_version;
  doc["device"] = batch.device_name;
  doc["provenance"] = std::string(to_string(batch.provenance));
  doc["metadata"] = batch.metadata;
  doc["experiments"] = json::array();
  for (const auto& e : batch.experiments) {
    json je;
    je["id"] = e.id;
    je["kind"] = std::string(experiment_kind_name(e.params));
    json params = json::object();
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, FusionArm>) {
            params["launches"] = p.launches;
            params["wait_units"] = p.wait_units;
          } else if constexpr (std::is_same_v<T, RepeatArm>) {
            params["instr"] = p.instr;
            params["repeats"] = p.repeats;
          } else if constexpr (std::is_same_v<T, LaunchSequenceArm>) {
            params["launches"] = p.launches;
          } else {
            params["level"] = std::string(to_string(p.level));
            params["blocks_per_sm"] = p.blocks_per_sm;
            params["threads_per_block"] = p.threads_per_block;
            params["gpus"] = p.gpu_count;
            params["repeats"] = p.repeats;
          }
        },
        e.params);
    je["params"] = params;
    je["samples"] = json::array();
    for (const auto& s : e.samples) {
      je["samples"].push_back({{"clock_domain", std::string(to_string(s.clock_domain))},
                               {"run_index", s.run_index},
                               {"value", s.value}});
    }
    doc["experiments"].push_back(std::move(je));
  }
  return doc.dump(2) + "\n";
}

void save_measurements(const MeasurementBatch& batch, const std::filesystem::path& path) {
  write_text_file(path, write_measurements(batch));
}

// ---------------------------------------------------------------------------

std::vector<KeyValue> parse_key_values(std::string_view text) {
  std::vector<KeyValue> out;
  for (const auto& [line, raw] : split_lines(text)) {
    const std::string_view l = trim(raw);
    if (l.empty() || l.front() == '#') continue;
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(ErrorCode::kParse, line, 1, "expected key=value");
    }
    KeyValue kv{std::string(trim(l.substr(0, eq))), std::string(trim(l.substr(eq + 1))), line};
    if (kv.key.empty()) throw ParseError(ErrorCode::kParse, line, 1, "empty key");
    for (const auto& prev : out) {
      if (prev.key == kv.key) {
        throw ParseError(ErrorCode::kParse, line, 1, "duplicate key '" + kv.key + "'");
      }
    }
    out.push_back(std::move(kv));
  }
  return out;
}

DeviceProfile parse_device_profile(std::string_view text) {
  DeviceProfile p;
  std::map<std::string, bool> seen{{"name", false},
                                   {"sm_count", false},
                                   {"warp_size", false},
                                   {"max_warps_per_sm", false},
                                   {"max_threads_per_block", false},
                                   {"clock_mhz", false},
                                   {"gpu_count", false},
                                   {"interconnect", false}};
  for (const auto& kv : parse_key_values(text)) {
    auto it = seen.find(kv.key);
    if (it == seen.end()) {
      throw ParseError(ErrorCode::kParse, kv.line, 1, "unknown device profile key '" + kv.key + "'");
    }
    it->second = true;
    const auto col = kv.key.size() + 2;
    auto as_int = [&] { return require_number<int>(kv.value, kv.line, col, kv.key); };
    if (kv.key == "name") p.name = kv.value;
    else if (kv.key == "sm_count") p.sm_count = as_int();
    else if (kv.key == "warp_size") p.warp_size = as_int();
    else if (kv.key == "max_warps_per_sm") p.max_warps_per_sm = as_int();
    else if (kv.key == "max_threads_per_block") p.max_threads_per_block = as_int();
    else if (kv.key == "clock_mhz") p.clock_mhz = require_number<double>(kv.value, kv.line, col, kv.key);
    else if (kv.key == "gpu_count") p.gpu_count = as_int();
    else p.interconnect = at_position(kv.line, col, [&] { return interconnect_from_string(kv.value); });
  }
  for (const auto& [key, present] : seen) {
    if (!present) throw ParseError(ErrorCode::kParse, 0, 0, "device profile lacks '" + key + "'");
  }
  p.validate();
  return p;
}

DeviceProfile load_device_profile(const std::filesystem::path& path) {
  return parse_device_profile(read_text_file(path));
}

std::string write_device_profile(const DeviceProfile& p) {
  std::string out;
  out += "name=" + p.name + "\n";
  out += "sm_count=" + std::to_string(p.sm_count) + "\n";
  out += "warp_size=" + std::to_string(p.warp_size) + "\n";
  out += "max_warps_per_sm=" + std::to_string(p.max_warps_per_sm) + "\n";
  out += "max_threads_per_block=" + std::to_string(p.max_threads_per_block) + "\n";
  out += "clock_mhz=" + format_exact(p.clock_mhz) + "\n";
  out += "gpu_count=" + std::to_string(p.gpu_count) + "\n";
  out += "interconnect=" + std::string(to_string(p.interconnect)) + "\n";
  return out;
}

// ---------------------------------------------------------------------------

std::vector<CostScenery> parse_cost_table(std::string_view text) {
  std::vector<CostScenery> table;
  bool have_header = false;
  for (const auto& [line, raw] : split_lines(text)) {
    const std::string_view l = trim(raw);
    if (l.empty() || l.front() == '#') continue;
    if (!have_header) {
      if (l != kCostTableHeader) {
        throw ParseError(ErrorCode::kParse, line, 1,
                         "expected cost table header '" + std::string(kCostTableHeader) + "'");
      }
      have_header = true;
      continue;
    }
    const auto f = split_csv(raw);
    if (f.size() != 8) {
      throw ParseError(ErrorCode::kParse, line, 1,
                       "expected 8 fields, got " + std::to_string(f.size()));
    }
    const std::string device{f[0].text};
    const std::string scenery{f[1].text};
    CostCandidate c;
    const double t = require_number<double>(f[3].text, line, f[3].column, "latency_cycles");
    const double thr =
        require_number<double>(f[4].text, line, f[4].column, "throughput_bytes_per_cycle");
    c.cost = at_position(line, f[3].column,
                         [&] { return CostPoint::derive(std::string(f[2].text), t, thr); });

    const bool no_sync = f[5].text.empty() && f[6].text.empty() && f[7].text.empty();
    if (!no_sync) {
      c.sync.level = at_position(line, f[5].column, [&] { return sync_level_from_string(f[5].text); });
      c.sync.latency_cycles =
          require_number<double>(f[6].text, line, f[6].column, "sync_latency_cycles");
      c.sync.per_invocation_count = require_number<int>(f[7].text, line, f[7].column, "sync_count");
      at_position(line, f[6].column, [&] {
        c.sync.validate();
        return 0;
      });
    }

    if (table.empty() || table.back().device != device || table.back().scenery != scenery) {
      for (const auto& s : table) {
        if (s.device == device && s.scenery == scenery) {
          throw ParseError(ErrorCode::kParse, line, 1,
                           "rows of scenery '" + device + "/" + scenery + "' are not contiguous");
        }
      }
      if (!no_sync) {
        throw ParseError(ErrorCode::kParse, line, f[5].column,
                         "the first candidate of a scenery carries no barrier");
      }
      table.push_back({device, scenery, {}});
    } else if (no_sync) {
      throw ParseError(ErrorCode::kParse, line, f[5].column,
                       "candidate '" + c.cost.label + "' needs its barrier cost");
    }
    table.back().candidates.push_back(std::move(c));
  }
  if (!have_header) throw ParseError(ErrorCode::kParse, 1, 1, "empty cost table");
  return table;
}

std::vector<CostScenery> load_cost_table(const std::filesystem::path& path) {
  return parse_cost_table(read_text_file(path));
}

std::string write_cost_table(const std::vector<CostScenery>& table) {
  std::string out = std::string(kCostTableHeader) + "\n";
  for (const auto& s : table) {
    for (std::size_t i = 0; i < s.candidates.size(); ++i) {
      const auto& c = s.candidates[i];
      out += s.device + "," + s.scenery + "," + c.cost.label + "," +
             format_exact(c.cost.latency_cycles) + "," +
             format_exact(c.cost.throughput_bytes_per_cycle) + ",";
      if (i == 0) {
        out += ",,\n";
      } else {
        out += std::string(to_string(c.sync.level)) + "," + format_exact(c.sync.latency_cycles) +
               "," + std::to_string(c.sync.per_invocation_count) + "\n";
      }
    }
  }
  return out;
}

}  // namespace syncperf
