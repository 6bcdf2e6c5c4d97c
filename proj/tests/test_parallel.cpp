#include <gtest/gtest.h>

#include <random>

#include "lexirank/analytics.hpp"
#include "lexirank/parallel.hpp"
#include "lexirank/robustness.hpp"
#include "oracles.hpp"

using namespace lexirank;

TEST(Parallel, SeedsAreDistinctAndStable) {
  EXPECT_EQ(derive_seed(1, 0), derive_seed(1, 0));
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Parallel, ForRethrows) {
  EXPECT_THROW(parallel_for(100, [](std::int64_t i) {
                 if (i == 57) throw ValidationError("boom");
               }),
               ValidationError);
  std::vector<int> hit(1000, 0);
  parallel_for(1000, [&](std::int64_t i) { hit[static_cast<std::size_t>(i)]++; });
  EXPECT_EQ(std::count(hit.begin(), hit.end(), 1), 1000);
}

TEST(Parallel, WorstCaseMatchesSerial) {
  std::mt19937_64 rng(31);
  const LevelMetric metrics[] = {LevelMetric::ap(), LevelMetric::ndcg(), LevelMetric::rbp(0.8),
                                 {ExposureModel::reciprocal(), NormalizationModel::uniform()}};
  for (int t = 0; t < 100; ++t) {
    const std::int64_t d = 40;
    const auto m = 1 + static_cast<std::size_t>(rng() % 14);
    const auto rp = RelevantPositions::from_positions(oracle::random_positions(rng, m, d), d);
    for (const auto& metric : metrics) {
      const auto p = worst_case_user(metric, rp);
      const auto s = serial::worst_case_user(metric, rp);
      ASSERT_EQ(p.value, s.value);
      ASSERT_EQ(p.witness, s.witness);
    }
    const auto p = worst_case_provider(ExposureModel::log2(), rp);
    const auto s = serial::worst_case_provider(ExposureModel::log2(), rp);
    ASSERT_EQ(p.value, s.value);
    ASSERT_EQ(p.witness, s.witness);
  }
}

TEST(Parallel, RankerMatchesSerial) {
  for (std::size_t m = 1; m <= 7; ++m) {
    const auto p = optimal_ranker_worst_case(LevelMetric::ndcg(), 30, m);
    const auto s = serial::optimal_ranker_worst_case(LevelMetric::ndcg(), 30, m);
    EXPECT_EQ(p.deterministic, s.deterministic);
    EXPECT_EQ(p.stochastic, s.stochastic);
  }
}

TEST(Parallel, SimulationIsScheduleIndependent) {
  SimulationConfig config;
  config.corpus_size = 100000;
  config.pair_count = 3000;
  config.seed = 12;
  config.depth = 1000;
  const auto parallel = simulate_pairs(config);
  const auto reference = serial::simulate_pairs(config);
  ASSERT_EQ(parallel.size(), reference.size());
  for (std::size_t i = 0; i < parallel.size(); ++i) {
    ASSERT_EQ(parallel[i].x, reference[i].x);
    ASSERT_EQ(parallel[i].y, reference[i].y);
  }
  for (const auto& metric : {MetricId::ap(), MetricId::ndcg(), MetricId::recall_at(1000)}) {
    const auto a = agreement_with_worst_case(parallel, metric);
    const auto b = serial::agreement_with_worst_case(reference, metric);
    EXPECT_EQ(a.agreement, b.agreement);
    EXPECT_EQ(a.strict_pairs, b.strict_pairs);
  }
}
