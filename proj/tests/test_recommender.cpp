// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "syncperf/error.hpp"
#include "syncperf/fixtures.hpp"
#include "syncperf/recommender.hpp"

using namespace syncperf;

namespace {

ReductionQuery query_for(const char* device, const char* scenery, std::uint64_t bytes) {
  ReductionQuery q;
  q.input_bytes = bytes;
  q.device = fixtures::profile_for(device);
  for (const auto& s : fixtures::cost_table(device)) {
    if (s.scenery == scenery) q.candidates = s.candidates;
  }
  return q;
}

// Independent oracle: full cost of every candidate, lowest wins, ties go to
// the larger configuration.
std::size_t brute_force(double n, double t, const std::vector<double>& thr,
                        const std::vector<double>& sync) {
  std::size_t best = 0;
  double best_cost = 0.0;
  double barriers = 0.0;
  for (std::size_t k = 0; k < thr.size(); ++k) {
    if (k > 0) barriers += sync[k];
    const double cost = t + barriers + std::max(0.0, n - t * thr[k]) / thr[k];
    if (k == 0 || cost <= best_cost) {
      best = k;
      best_cost = cost;
    }
  }
  return best;
}

bool unimodal(double n, double t, const std::vector<double>& thr, const std::vector<double>& sync) {
  std::vector<double> cost;
  double barriers = 0.0;
  for (std::size_t k = 0; k < thr.size(); ++k) {
    if (k > 0) barriers += sync[k];
    cost.push_back(t + barriers + std::max(0.0, n - t * thr[k]) / thr[k]);
  }
  std::size_t k = 1;
  while (k < cost.size() && cost[k] <= cost[k - 1]) ++k;
  while (k < cost.size() && cost[k] > cost[k - 1]) ++k;
  return k == cost.size();
}

}  // namespace

TEST(Reduction, WarpFor32Doubles) {
  const auto r = recommend_reduction_config(query_for("v100", "1", 32 * 8));
  EXPECT_EQ(r.chosen, "1 warp");
  EXPECT_EQ(r.scenario.kind, ScenarioKind::kAboveMore);
  EXPECT_NEAR(*r.n_l, 70.43, 0.01);
  EXPECT_NE(r.rationale.find("choose 1 warp"), std::string::npos);
}

TEST(Reduction, ThirtyTwoThreadsFor1024Doubles) {
  const auto r = recommend_reduction_config(query_for("v100", "2", 1024 * 8));
  EXPECT_EQ(r.chosen, "32 threads");
  EXPECT_LT(8192.0, *r.n_l);
  EXPECT_NEAR(*r.n_l, 9057.7, 0.1);
}

TEST(Reduction, LargeInputsPreferMoreWorkers) {
  EXPECT_EQ(recommend_reduction_config(query_for("v100", "2", 1 << 20)).chosen, "1024 threads");
  EXPECT_EQ(recommend_reduction_config(query_for("p100", "2", 1 << 20)).chosen, "1024 threads");
  EXPECT_EQ(recommend_reduction_config(query_for("p100", "2", 16384)).chosen, "32 threads");
}

TEST(Reduction, TinyInputsPreferFewerWorkers) {
  const auto r = recommend_reduction_config(query_for("v100", "1", 8));
  EXPECT_EQ(r.chosen, "1 thread");
  EXPECT_EQ(r.scenario.kind, ScenarioKind::kBelowBasic);
}

TEST(Reduction, SafetyFactorStretchesThresholds) {
  auto q = query_for("v100", "2", 9500);
  EXPECT_EQ(recommend_reduction_config(q).chosen, "1024 threads");
  q.safety_factor = 1.2;
  const auto r = recommend_reduction_config(q);
  EXPECT_EQ(r.chosen, "32 threads");
  EXPECT_NEAR(*r.n_l, 9057.73 * 1.2, 0.1);
}

TEST(Reduction, RejectsBadQueries) {
  auto q = query_for("v100", "2", 100);
  std::swap(q.candidates[0], q.candidates[1]);
  EXPECT_THROW(recommend_reduction_config(q), ValidationError);
  q = query_for("v100", "2", 100);
  q.candidates.pop_back();
  EXPECT_THROW(recommend_reduction_config(q), ValidationError);
}

TEST(Reduction, LadderMatchesBruteForceOnUnimodalCosts) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> t_dist(1.0, 100.0);
  std::uniform_real_distribution<double> growth(1.05, 20.0);
  std::uniform_real_distribution<double> s_dist(0.1, 500.0);
  std::uniform_int_distribution<int> count(2, 6);
  std::uniform_real_distribution<double> log_n(0.0, 6.0);
  int checked = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    const double t = t_dist(rng);
    const int m = count(rng);
    std::vector<double> thr{std::uniform_real_distribution<double>(0.1, 5.0)(rng)};
    std::vector<double> sync{0.0};
    for (int k = 1; k < m; ++k) {
      thr.push_back(thr.back() * growth(rng));
      sync.push_back(s_dist(rng));
    }
    const double n = std::floor(std::pow(10.0, log_n(rng)));
    if (!unimodal(n, t, thr, sync)) continue;
    ReductionQuery q;
    q.input_bytes = static_cast<std::uint64_t>(n);
    q.device = fixtures::v100_profile();
    for (int k = 0; k < m; ++k) {
      CostCandidate c;
      c.cost = CostPoint::derive("c" + std::to_string(k), t, thr[k]);
      c.sync = SyncCost{SyncLevel::kBlock, sync[k], 1};
      q.candidates.push_back(c);
    }
    const auto r = recommend_reduction_config(q);
    const std::size_t want = brute_force(n, t, thr, sync);
    ASSERT_EQ(r.chosen, "c" + std::to_string(want)) << "trial " << trial;
    ++checked;
  }
  EXPECT_GT(checked, 2000);
}

TEST(Reduction, InvariantUnderUnitRescaling) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const double scale = std::ldexp(1.0, std::uniform_int_distribution<int>(-8, 8)(rng));
    auto q = query_for(trial % 2 ? "v100" : "p100", trial % 3 ? "2" : "1",
                       std::uniform_int_distribution<std::uint64_t>(1, 50000)(rng));
    auto scaled = q;
    for (auto& c : scaled.candidates) {
      c.cost = CostPoint::derive(c.cost.label, c.cost.latency_cycles * scale,
                                 c.cost.throughput_bytes_per_cycle / scale);
      c.sync.latency_cycles *= scale;
    }
    const auto a = recommend_reduction_config(q);
    const auto b = recommend_reduction_config(scaled);
    EXPECT_EQ(a.chosen, b.chosen);
    EXPECT_EQ(a.scenario.kind, b.scenario.kind);
    EXPECT_NEAR(*a.n_m, *b.n_m, 1e-9 * *a.n_m);
  }
}

TEST(Barrier, SingleGpuImplicitBeatsGrid) {
  BarrierQuery q;
  const auto r = recommend_barrier(q, fixtures::barrier_table());
  ASSERT_TRUE(r.sufficient_data);
  EXPECT_EQ(*r.chosen, BarrierMechanism::kImplicitLaunch);
  EXPECT_DOUBLE_EQ(r.margin_ns, 2482.0);
  EXPECT_LE(r.margin_ns, 2500.0);
  EXPECT_FALSE(r.multi_grid_ratio);
}

TEST(Barrier, EightGpuCpuSideBeatsMultiGridWithinSlack) {
  BarrierQuery q;
  q.gpu_count = 8;
  const auto r = recommend_barrier(q, fixtures::barrier_table());
  ASSERT_TRUE(r.sufficient_data);
  EXPECT_EQ(*r.chosen, BarrierMechanism::kCpuSide);
  EXPECT_NEAR(r.margin_ns, 16000.0, 1600.0);
  ASSERT_TRUE(r.multi_grid_ratio);
  EXPECT_LE(*r.multi_grid_ratio, 3.0);
  EXPECT_TRUE(r.multi_grid_within_slack);
  EXPECT_NE(r.rationale.find("within 3x slack"), std::string::npos);
}

TEST(Barrier, MissingDataIsReported) {
  BarrierQuery q;
  q.gpu_count = 8;
  q.mechanisms = {BarrierMechanism::kMultiDeviceLaunch, BarrierMechanism::kCpuSide};
  const auto r = recommend_barrier(q, fixtures::barrier_table());
  EXPECT_FALSE(r.sufficient_data);
  EXPECT_FALSE(r.chosen);
  ASSERT_EQ(r.missing.size(), 1u);
  EXPECT_EQ(r.missing[0], BarrierMechanism::kMultiDeviceLaunch);
  q.mechanisms.clear();
  q.gpu_count = 4;
  EXPECT_FALSE(recommend_barrier(q, fixtures::barrier_table()).sufficient_data);
}

TEST(Barrier, SlowerMultiGridNeverWins) {
  auto table = fixtures::barrier_table();
  BarrierQuery q;
  q.gpu_count = 8;
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    q.iterations = std::uniform_int_distribution<long long>(1, 100000)(rng);
    for (auto& e : table.entries) {
      if (e.mechanism == BarrierMechanism::kMultiGrid) e.latency_ns = 1000.0 + 100.0 * trial;
    }
    const auto before = recommend_barrier(q, table);
    for (auto& e : table.entries) {
      if (e.mechanism == BarrierMechanism::kMultiGrid) e.latency_ns += 500.0;
    }
    const auto after = recommend_barrier(q, table);
    if (*before.chosen != BarrierMechanism::kMultiGrid) {
      EXPECT_NE(*after.chosen, BarrierMechanism::kMultiGrid);
    }
  }
}

TEST(Barrier, IterationsScalePerBarrierCost) {
  BarrierQuery q;
  q.iterations = 1000;
  const auto r = recommend_barrier(q, fixtures::barrier_table());
  EXPECT_DOUBLE_EQ(r.ranked[0].total_ns, 1081.0 + 1000 * 1081.0);
  EXPECT_DOUBLE_EQ(r.ranked[1].total_ns, 1063.0 + 1000 * 3581.0);
}

TEST(Barrier, RejectsBadQueries) {
  BarrierQuery q;
  q.iterations = 0;
  EXPECT_THROW(recommend_barrier(q, fixtures::barrier_table()), ValidationError);
  q.iterations = 1;
  q.slack = 0.5;
  EXPECT_THROW(recommend_barrier(q, fixtures::barrier_table()), ValidationError);
  EXPECT_THROW(barrier_mechanism_from_string("teleport"), ValidationError);
}

TEST(Barrier, MultiGridConfigRule) {
  const auto v100 = fixtures::v100_profile();
  EXPECT_TRUE(multi_grid_config_ok(v100, 1, 1024));
  EXPECT_FALSE(multi_grid_config_ok(v100, 2, 1024));
  EXPECT_TRUE(multi_grid_config_ok(v100, 8, 128));
  EXPECT_FALSE(multi_grid_config_ok(v100, 9, 32));
}
