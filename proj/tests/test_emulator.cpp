// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "random_batch.hpp"
#include "syncperf/analysis.hpp"
#include "syncperf/data_io.hpp"
#include "syncperf/emulator.hpp"
#include "syncperf/error.hpp"

using namespace syncperf;

namespace {

double sample_stddev(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

FusionExperiment fusion_of(const MeasurementBatch& b, int i, int j) {
  FusionExperiment e{i, j, {}, {}};
  for (const auto& x : b.experiments) {
    const auto& p = std::get<FusionArm>(x.params);
    (p.launches == i && p.wait_units == j ? e.latency_ij : e.latency_ji) = x.samples;
  }
  return e;
}

RepeatDiffExperiment repeat_of(const MeasurementBatch& b, int r1, int r2) {
  RepeatDiffExperiment e{r1, r2, b.experiments[0].samples, b.experiments[1].samples};
  return e;
}

}  // namespace

TEST(Emulator, FusionRecoversOverheadForAllDesigns) {
  EmulatedDevice dev = emulated_v100();
  for (int i = 1; i <= 10; ++i) {
    for (int j = 1; j <= 10; ++j) {
      if (i == j) continue;
      const auto b = generate_fusion_batch(dev, i, j, 1);
      EXPECT_EQ(b.provenance, Provenance::kEmulator);
      const double o = launch_overhead(fusion_of(b, i, j)).value;
      EXPECT_LE(std::abs(o - 1081.0) / 1081.0, 1e-9) << i << "," << j;
    }
  }
}

TEST(Emulator, SingleRunHasNoSpread) {
  const auto b = generate_fusion_batch(emulated_v100(), 5, 1, 1);
  EXPECT_FALSE(launch_overhead(fusion_of(b, 5, 1)).stddev);
}

TEST(Emulator, FaddLatencyIsExactlyFour) {
  const auto b = generate_repeatdiff_batch(emulated_v100(), "fadd", 256, 32, 3);
  const auto e = instruction_latency(repeat_of(b, 256, 32));
  EXPECT_EQ(e.value, 4.0);
  EXPECT_EQ(*e.stddev, 0.0);
}

TEST(Emulator, ZeroLatencyAndOffsetInvariance) {
  EmulatedDevice dev = emulated_v100();
  dev.instr_latency_cycles["nop"] = 0.0;
  EXPECT_EQ(instruction_latency(repeat_of(generate_repeatdiff_batch(dev, "nop", 9, 2, 1), 9, 2)).value,
            0.0);
  dev.base_cycles += 1e6;
  EXPECT_EQ(instruction_latency(repeat_of(generate_repeatdiff_batch(dev, "fadd", 64, 8, 1), 64, 8))
                .value,
            4.0);
}

TEST(Emulator, UnknownInstructionAndBadCounts) {
  EXPECT_THROW(generate_repeatdiff_batch(emulated_v100(), "fsqrt", 2, 1, 1), ValidationError);
  EXPECT_THROW(generate_repeatdiff_batch(emulated_v100(), "fadd", 1, 1, 1), ValidationError);
  EXPECT_THROW(generate_fusion_batch(emulated_v100(), 0, 1, 1), ValidationError);
  EXPECT_THROW(generate_fusion_batch(emulated_v100(), 2, 1, 0), ValidationError);
  EXPECT_THROW(generate_sync_batch(emulated_v100(), SyncArm{SyncLevel::kGrid, 1, 32, 1, 0}, 2, 1, 1),
               ValidationError);
}

TEST(Emulator, LaunchSequenceRecoversTotalLatency) {
  EmulatedDevice dev = emulated_v100();
  dev.kernel_total_latency_ns = 10248.0;
  const auto b = generate_launch_sequence_batch(dev, 1, 10, 1);
  const double l1 = b.experiments[0].samples[0].value;
  const double l10 = b.experiments[1].samples[0].value;
  EXPECT_DOUBLE_EQ(kernel_total_latency(0.0, l1, l1 + l10, 1, 10), 10248.0);
  const auto r = analyze_batch(b);
  ASSERT_EQ(r.kernel_latencies.size(), 1u);
  EXPECT_DOUBLE_EQ(r.kernel_latencies[0].latency.value, 10248.0);
}

TEST(Emulator, NoisyLaunchSequenceStaysNearTotalLatency) {
  EmulatedDevice dev = emulated_v100();
  dev.kernel_total_latency_ns = 10248.0;
  dev.noise_sigma = 50.0;
  dev.seed = 11;
  const auto r = analyze_batch(generate_launch_sequence_batch(dev, 1, 10, 200));
  const auto& e = r.kernel_latencies[0].latency;
  EXPECT_NEAR(e.value, 10248.0, 4.0 * *e.standard_error);
}

TEST(Emulator, SuiteRoundTripsThroughAnalysis) {
  const auto b = generate_suite(emulated_v100(), 1);
  const auto r = analyze_batch(parse_measurements(write_measurements(b)));
  ASSERT_EQ(r.launch_overheads.size(), 1u);
  EXPECT_DOUBLE_EQ(r.launch_overheads[0].overhead.value, 1081.0);
  ASSERT_EQ(r.instruction_latencies.size(), 2u);
  EXPECT_EQ(r.instruction_latencies[1].instr, "fadd");
  EXPECT_DOUBLE_EQ(r.instruction_latencies[1].latency.value, 4.0);
  ASSERT_EQ(r.sync_latencies.size(), 3u);
  for (const auto& s : r.sync_latencies) {
    const auto key = SyncPointKey{s.point.level, s.point.blocks_per_sm, s.point.threads_per_block,
                                  s.point.gpu_count};
    EXPECT_DOUBLE_EQ(s.latency.value, emulated_v100().sync_latency.at(key));
  }
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Emulator, SeedsChangeSamplesNotMeans) {
  EmulatedDevice a = emulated_v100();
  a.noise_sigma = 200.0;
  a.seed = 1;
  EmulatedDevice b = a;
  b.seed = 2;
  const auto ba = generate_fusion_batch(a, 5, 1, 100000);
  const auto bb = generate_fusion_batch(b, 5, 1, 100000);
  EXPECT_NE(ba.experiments[0].samples[0].value, bb.experiments[0].samples[0].value);
  for (std::size_t arm = 0; arm < 2; ++arm) {
    std::vector<double> va, vb;
    for (const auto& s : ba.experiments[arm].samples) va.push_back(s.value);
    for (const auto& s : bb.experiments[arm].samples) vb.push_back(s.value);
    const auto sa = summarize(va), sb = summarize(vb);
    const double se = std::hypot(*sa.standard_error, *sb.standard_error);
    EXPECT_LT(std::abs(sa.mean - sb.mean), 3.0 * se);
  }
}

TEST(EmulatorMonteCarlo, LaunchOverheadSpreadMatchesPropagation) {
  EmulatedDevice dev = emulated_v100();
  dev.noise_sigma = 200.0;
  for (auto [i, j] : {std::pair{5, 1}, std::pair{2, 7}, std::pair{10, 9}}) {
    std::vector<double> estimates;
    for (int t = 0; t < 10000; ++t) {
      dev.seed = static_cast<std::uint64_t>(t) * 7919 + i;
      estimates.push_back(launch_overhead(fusion_of(generate_fusion_batch(dev, i, j, 1), i, j)).value);
    }
    const double predicted = std::sqrt(2.0) * 200.0 / std::abs(i - j);
    EXPECT_NEAR(sample_stddev(estimates) / predicted, 1.0, 0.1) << i << "," << j;
  }
}

TEST(EmulatorMonteCarlo, StandardErrorMatchesSpreadOfMeans) {
  EmulatedDevice dev = emulated_v100();
  dev.noise_sigma = 200.0;
  std::vector<double> estimates;
  double predicted = 0.0;
  for (int t = 0; t < 10000; ++t) {
    dev.seed = static_cast<std::uint64_t>(t) + 1000000;
    const auto e = launch_overhead(fusion_of(generate_fusion_batch(dev, 5, 1, 10), 5, 1));
    estimates.push_back(e.value);
    predicted += *e.standard_error;
  }
  predicted /= 10000.0;
  EXPECT_NEAR(sample_stddev(estimates) / predicted, 1.0, 0.1);
}

TEST(EmulatorMonteCarlo, InstructionLatencySpreadMatchesPropagation) {
  EmulatedDevice dev = emulated_v100();
  dev.noise_sigma = 20.0;
  std::vector<double> estimates;
  double predicted_se = 0.0;
  for (int t = 0; t < 10000; ++t) {
    dev.seed = static_cast<std::uint64_t>(t) + 42;
    const auto e = instruction_latency(repeat_of(generate_repeatdiff_batch(dev, "fadd", 64, 32, 4), 64, 32));
    estimates.push_back(e.value);
    predicted_se += *e.standard_error;
  }
  predicted_se /= 10000.0;
  const double sd = sample_stddev(estimates);
  EXPECT_NEAR(sd / (std::sqrt(2.0 * 20.0 * 20.0 / 4.0) / 32.0), 1.0, 0.1);
  EXPECT_NEAR(sd / predicted_se, 1.0, 0.1);
}

TEST(EmulatorFuzz, DeterministicAndRoundTrips) {
  std::mt19937_64 rng(1234);
  for (int k = 0; k < 100; ++k) {
    const auto dev = syncperf::testing::random_device(rng);
    const std::string spec = write_emulated_device(dev);
    const auto parsed = parse_emulated_device(spec);
    ASSERT_EQ(parsed, dev) << spec;
    EXPECT_EQ(write_emulated_device(parsed), spec);
    const auto a = generate_suite(dev, 3);
    const auto b = generate_suite(parsed, 3);
    ASSERT_EQ(write_measurements(a), write_measurements(b));
    EXPECT_EQ(parse_measurements(write_measurements(a)), a);
    for (const auto& e : a.experiments) {
      for (const auto& s : e.samples) EXPECT_GE(s.value, 0.0);
    }
  }
}

TEST(EmulatorFuzz, NoiselessSuiteIsRecoveredExactly) {
  std::mt19937_64 rng(77);
  for (int k = 0; k < 100; ++k) {
    auto dev = syncperf::testing::random_device(rng);
    dev.noise_sigma = 0.0;
    const auto r = analyze_batch(generate_suite(dev, 1));
    ASSERT_EQ(r.launch_overheads.size(), 1u);
    EXPECT_NEAR(r.launch_overheads[0].overhead.value, dev.launch_overhead_ns,
                1e-9 * std::max(1.0, dev.launch_overhead_ns + 5 * dev.wait_unit_ns));
    for (const auto& il : r.instruction_latencies) {
      EXPECT_NEAR(il.latency.value, dev.instr_latency_cycles.at(il.instr),
                  1e-9 * std::max(1.0, dev.base_cycles));
    }
    EXPECT_NEAR(r.kernel_latencies[0].latency.value, dev.kernel_total_latency_ns,
                1e-9 * std::max(1.0, dev.host_overhead_ns + 10 * dev.kernel_total_latency_ns));
  }
}

TEST(EmulatedDeviceIo, RejectsBadKeys) {
  EXPECT_THROW(parse_emulated_device("colour=red\n"), ParseError);
  EXPECT_THROW(parse_emulated_device("sync.block.1.32=4\n"), ParseError);
  EXPECT_THROW(parse_emulated_device("sync.bogus.1.32.1=4\n"), ParseError);
  EXPECT_THROW(parse_emulated_device("noise_sigma=-1\n"), ValidationError);
  const auto d = parse_emulated_device("instr.imul=6\nseed=9\n");
  EXPECT_EQ(d.seed, 9u);
  EXPECT_DOUBLE_EQ(d.instr_latency_cycles.at("imul"), 6.0);
}
