// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "random_batch.hpp"
#include "syncperf/data_io.hpp"
#include "syncperf/error.hpp"
#include "syncperf/fixtures.hpp"

using namespace syncperf;

namespace {

constexpr std::string_view kSample = R"(# sample
schema_version: 1
device: V100
provenance: hardware
host: node17
experiment: f5x1 kind=fusion launches=5 wait_units=1
experiment: f1x5 kind=fusion launches=1 wait_units=5
experiment: add256 kind=repeat instr=fadd repeats=256
experiment_id,clock_domain,run_index,value
f5x1,cpu_ns,0,55405
f1x5,cpu_ns,0,51081
add256,gpu_cycles,0,2024.5
)";

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIo;
}

std::string replace(std::string s, std::string_view from, std::string_view to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

}  // namespace

TEST(Measurements, ParsesSample) {
  const auto b = parse_measurements(kSample);
  EXPECT_EQ(b.device_name, "V100");
  EXPECT_EQ(b.provenance, Provenance::kHardware);
  EXPECT_EQ(b.metadata.at("host"), "node17");
  ASSERT_EQ(b.experiments.size(), 3u);
  EXPECT_EQ(std::get<FusionArm>(b.experiments[0].params).launches, 5);
  EXPECT_EQ(std::get<RepeatArm>(b.experiments[2].params).instr, "fadd");
  EXPECT_DOUBLE_EQ(b.experiments[2].samples[0].value, 2024.5);
  EXPECT_EQ(b.experiments[2].samples[0].clock_domain, ClockDomain::kGpuCycles);
}

TEST(Measurements, EmptyFileIsParseError) {
  try {
    parse_measurements("  \n\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(Measurements, NegativeValueReportsLine) {
  const std::string text = replace(std::string(kSample), "f1x5,cpu_ns,0,51081", "f1x5,cpu_ns,0,-3");
  try {
    parse_measurements(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidation);
    EXPECT_EQ(e.line(), 11u);
    EXPECT_NE(std::string(e.what()).find("line 11"), std::string::npos);
  }
}

TEST(Measurements, ErrorCodes) {
  const std::string s(kSample);
  EXPECT_EQ(code_of([&] { parse_measurements(replace(s, "schema_version: 1", "schema_version: 2")); }),
            ErrorCode::kSchema);
  EXPECT_EQ(code_of([&] { parse_measurements(replace(s, "add256,gpu_cycles", "nope,gpu_cycles")); }),
            ErrorCode::kUnknownExperiment);
  EXPECT_EQ(code_of([&] { parse_measurements(s + "add256,cpu_ns,1,3\n"); }),
            ErrorCode::kUnitMismatch);
  EXPECT_EQ(code_of([&] { parse_measurements(replace(s, "run_index,value", "run,value")); }),
            ErrorCode::kParse);
  EXPECT_EQ(code_of([&] { parse_measurements(replace(s, "kind=fusion", "kind=magic")); }),
            ErrorCode::kUnknownExperiment);
  EXPECT_EQ(code_of([&] { parse_measurements(replace(s, "2024.5", "12abc")); }), ErrorCode::kParse);
}

TEST(Measurements, StructuredEncodingMatchesText) {
  const auto b = parse_measurements(kSample);
  const std::string json = write_measurements_structured(b);
  ASSERT_EQ(json.front(), '{');
  EXPECT_EQ(parse_measurements(json), b);
}

TEST(Measurements, WriterRejectsUnwritableIds) {
  auto b = parse_measurements(kSample);
  b.experiments[0].id = "has,comma";
  for (auto& s : b.experiments[0].samples) s.experiment_id = "has,comma";
  EXPECT_THROW(write_measurements(b), ValidationError);
}

TEST(Measurements, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "syncperf_io_test.txt";
  const auto b = parse_measurements(kSample);
  save_measurements(b, path);
  EXPECT_EQ(load_measurements(path), b);
  std::filesystem::remove(path);
  EXPECT_EQ(code_of([&] { load_measurements(path); }), ErrorCode::kIo);
}

TEST(MeasurementsFuzz, RoundTripIsExactAndStable) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 100; ++k) {
    const auto b = syncperf::testing::random_batch(rng);
    const std::string text = write_measurements(b);
    const auto back = parse_measurements(text);
    ASSERT_EQ(back, b) << "case " << k << "\n" << text;
    EXPECT_EQ(write_measurements(back), text);
    const std::string json = write_measurements_structured(b);
    ASSERT_EQ(parse_measurements(json), b) << "case " << k;
    EXPECT_EQ(write_measurements_structured(parse_measurements(json)), json);
  }
}

TEST(DeviceProfileIo, RoundTripAndErrors) {
  const auto v100 = fixtures::v100_profile();
  EXPECT_EQ(v100.sm_count, 80);
  EXPECT_DOUBLE_EQ(v100.clock_mhz, 1312.0);
  EXPECT_EQ(parse_device_profile(write_device_profile(v100)), v100);
  const std::string text(fixtures::profile_text("p100"));
  EXPECT_EQ(code_of([&] { parse_device_profile(text + "color=blue\n"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([&] { parse_device_profile(replace(text, "sm_count=56\n", "")); }),
            ErrorCode::kParse);
  EXPECT_EQ(code_of([&] { parse_device_profile(replace(text, "sm_count=56", "sm_count=-1")); }),
            ErrorCode::kValidation);
}

TEST(CostTableIo, RoundTripsFixtureTables) {
  for (const char* dev : {"v100", "p100"}) {
    const auto table = fixtures::cost_table(dev);
    const std::string text = write_cost_table(table);
    EXPECT_EQ(text.substr(0, kCostTableHeader.size()), kCostTableHeader);
    const auto back = parse_cost_table(text);
    ASSERT_EQ(back.size(), table.size());
    for (std::size_t s = 0; s < back.size(); ++s) {
      ASSERT_EQ(back[s].candidates.size(), table[s].candidates.size());
      for (std::size_t c = 0; c < back[s].candidates.size(); ++c) {
        const auto& x = back[s].candidates[c];
        const auto& y = table[s].candidates[c];
        EXPECT_EQ(x.cost.label, y.cost.label);
        EXPECT_DOUBLE_EQ(x.cost.latency_cycles, y.cost.latency_cycles);
        EXPECT_DOUBLE_EQ(x.cost.throughput_bytes_per_cycle, y.cost.throughput_bytes_per_cycle);
        EXPECT_DOUBLE_EQ(x.sync.total_cycles(), y.sync.total_cycles());
      }
    }
    EXPECT_EQ(write_cost_table(back), text);
  }
}

TEST(CostTableIo, RejectsBadRows) {
  const std::string header(kCostTableHeader);
  EXPECT_EQ(code_of([&] { parse_cost_table("device,label\n"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([&] { parse_cost_table(header + "\nV100,1,a,13,x,,,\n"); }), ErrorCode::kParse);
}

TEST(Formatting, SixSignificantDigitsAndExact) {
  EXPECT_EQ(format_number(70.42783), "70.4278");
  EXPECT_EQ(format_number(1081.0), "1081");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_exact(0.1), "0.1");
  EXPECT_EQ(std::stod(format_exact(1.0 / 3.0)), 1.0 / 3.0);
}
