#include <gtest/gtest.h>

#include <random>

#include "lexirank/combinations.hpp"
#include "lexirank/metrics.hpp"
#include "lexirank/prefs.hpp"
#include "oracles.hpp"

using namespace lexirank;

namespace {

RelevantPositions rp(std::vector<Position> p, std::int64_t d = 1000) {
  return RelevantPositions::from_positions(std::move(p), d);
}

}  // namespace

TEST(RecallLevel, ApInstances) {
  const auto ap = LevelMetric::ap();
  EXPECT_DOUBLE_EQ(ap(rp({1, 2})), 1.0);
  EXPECT_DOUBLE_EQ(ap(rp({2, 4})), 0.5);
  EXPECT_NEAR(ap(rp({1, 3, 5})), 0.755556, 1e-5);
}

TEST(RecallLevel, ApMatchesTextbookDefinition) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 2000; ++t) {
    const auto v = oracle::random_positions(rng, 1 + t % 20, 200);
    EXPECT_NEAR(evaluate(MetricId::ap(), rp(v)), oracle::textbook_ap(v), 1e-12);
  }
}

TEST(RecallLevel, NdcgOfIdealIsOne) {
  for (std::size_t m = 1; m <= 100; ++m) {
    std::vector<Position> ideal(m);
    std::iota(ideal.begin(), ideal.end(), Position{1});
    EXPECT_NEAR(evaluate(MetricId::ndcg(), rp(ideal)), 1.0, 1e-14) << m;
  }
}

TEST(RecallLevel, NdcgMatchesDcgOverIdcg) {
  const std::vector<Position> v{2, 5, 9};
  double dcg = 0, idcg = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    dcg += 1 / std::log2(v[i] + 1.0);
    idcg += 1 / std::log2(i + 2.0);
  }
  EXPECT_NEAR(evaluate(MetricId::ndcg(), rp(v)), dcg / idcg, 1e-14);
}

TEST(Evaluate, FlatMetrics) {
  EXPECT_DOUBLE_EQ(evaluate(MetricId::rr(), rp({3, 7})), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(evaluate(MetricId::recall_at(10), rp({2, 99, 100}, 100)), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(evaluate(MetricId::recall_error(), rp({1, 2, 3})), 0.0);
  EXPECT_DOUBLE_EQ(evaluate(MetricId::recall_error(), rp({2, 3, 7})), 2.0);
  EXPECT_DOUBLE_EQ(evaluate(MetricId::esl3(), rp({2, 3, 7})), 4.0);
  EXPECT_DOUBLE_EQ(evaluate(MetricId::rprecision(), rp({1, 3, 7})), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(evaluate(MetricId::rbp(0.8), rp({1})), 0.2);
  EXPECT_THROW(MetricId::recall_at(0), ValidationError);
}

TEST(Tse, Values) {
  EXPECT_DOUBLE_EQ(tse(rp({2, 3, 8})), 0.125);
  EXPECT_DOUBLE_EQ(tse(rp({1})), 1.0);
  EXPECT_DOUBLE_EQ(tse(rp({1})), evaluate(MetricId::rr(), rp({1})));
  EXPECT_NEAR(tse(rp({1, 4}), ExposureModel::geometric(0.8)), 0.1024, 1e-15);
  EXPECT_DOUBLE_EQ(evaluate(MetricId::tse(ExposureModel::log2()), rp({1, 3})), 0.5);
}

TEST(Tse, DependsOnlyOnLastPosition) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 1000; ++t) {
    auto v = oracle::random_positions(rng, 2 + t % 6, 100);
    auto w = oracle::random_positions(rng, v.size() - 1, v.back() - 1);
    w.push_back(v.back());
    EXPECT_EQ(tse(rp(v)), tse(rp(w)));
    // And RR only on the first.
    auto u = oracle::random_positions(rng, v.size() - 1, 100 - v.front());
    for (auto& p : u) p += v.front();
    u.insert(u.begin(), v.front());
    EXPECT_EQ(evaluate(MetricId::rr(), rp(v)), evaluate(MetricId::rr(), rp(u)));
  }
}

TEST(MetricId, ParseAndName) {
  for (const char* text : {"ap", "rr", "ndcg", "rbp:0.8", "recall@1000", "recall@10",
                           "rprecision", "tse", "tse:log2", "tse:geometric:0.5", "esl3",
                           "recall_error", "metric_lexirecall:1/2", "metric_lexirecall:1/3"}) {
    EXPECT_EQ(MetricId::parse(text).name(), text);
  }
  EXPECT_EQ(MetricId::parse("rbp"), MetricId::rbp(0.8));
  EXPECT_EQ(MetricId::parse("metric_lexirecall:2/4"), MetricId::metric_lexirecall(mpq_class(1, 2)));
  EXPECT_THROW(MetricId::parse("map"), ValidationError);
  EXPECT_THROW(MetricId::parse("recall@"), ValidationError);
  EXPECT_THROW(MetricId::parse("rbp:1.5"), ValidationError);
  EXPECT_THROW(MetricId::parse("metric_lexirecall:3/2"), ValidationError);
  EXPECT_FALSE(MetricId::esl3().higher_is_better());
  EXPECT_FALSE(MetricId::recall_error().higher_is_better());
  EXPECT_TRUE(MetricId::tse().higher_is_better());
}

TEST(MetricLexirecall, SingleLevel) {
  const mpq_class eps(1, 2);
  EXPECT_EQ(metric_lexirecall(rp({3}, 10), eps), mpq_class(7, 10));
}

TEST(MetricLexirecall, WeightsSumToOneExactly) {
  for (std::size_t m : {1u, 2u, 5u, 20u, 50u}) {
    for (std::int64_t d : {50, 1000, 1000000}) {
      for (const mpq_class& eps : {mpq_class(1, 2), mpq_class(1, 7), mpq_class(99, 100)}) {
        const auto w = metric_lexirecall_weights(m, d, eps);
        mpq_class sum = 0;
        for (const auto& x : w) sum += x;
        EXPECT_EQ(sum, 1) << m << " " << d;
      }
    }
  }
}

TEST(MetricLexirecall, WeightsFollowClosedForm) {
  const std::int64_t d = 10;
  const mpq_class eps(1, 2);
  const mpq_class delta = 1 / (d + eps);
  const auto w = metric_lexirecall_weights(4, d, eps);
  mpq_class one_plus = 1 + delta;
  auto pow = [](mpq_class b, int e) {
    mpq_class r = 1;
    while (e-- > 0) r *= b;
    return r;
  };
  EXPECT_EQ(w[0], pow(delta, 3) / pow(one_plus, 3));
  for (int i = 2; i <= 4; ++i) {
    EXPECT_EQ(w[i - 1], pow(delta, 4 - i) / pow(one_plus, 5 - i));
  }
}

TEST(MetricLexirecall, OrderMatchesLexirecallOnAllPairs) {
  const std::int64_t d = 10;
  const auto vectors = oracle::all_vectors(2, d);
  ASSERT_EQ(vectors.size(), 45u);
  std::vector<mpq_class> scores;
  for (const auto& v : vectors) scores.push_back(metric_lexirecall(rp(v, d), mpq_class(1, 2)));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = 0; j < vectors.size(); ++j) {
      const auto pref = lexirecall_compare(vectors[i], vectors[j]);
      const int c = cmp(scores[i], scores[j]);
      if (pref.outcome == Outcome::prefer_first) EXPECT_GT(c, 0);
      else if (pref.outcome == Outcome::prefer_second) EXPECT_LT(c, 0);
      else EXPECT_EQ(c, 0);
    }
  }
}

TEST(MetricLexirecall, RejectsBadEpsilon) {
  EXPECT_THROW(metric_lexirecall(rp({1}), mpq_class(0)), ValidationError);
  EXPECT_THROW(metric_lexirecall(rp({1}), mpq_class(1)), ValidationError);
}

TEST(TopHeavy, ClassicInstancesHold) {
  EXPECT_TRUE(is_top_heavy(ExposureModel::reciprocal(), NormalizationModel::ap(), 4, 8));
  EXPECT_TRUE(is_top_heavy(ExposureModel::geometric(0.8), NormalizationModel::rbp(), 4, 8));
  EXPECT_TRUE(is_top_heavy(ExposureModel::reciprocal(), NormalizationModel::uniform(), 4, 8));
  EXPECT_TRUE(is_top_heavy(ExposureModel::log2(), NormalizationModel::ndcg(), 4, 8));
  EXPECT_TRUE(is_top_heavy(ExposureModel::reciprocal(), NormalizationModel::rr(), 4, 8));
  EXPECT_TRUE(is_top_heavy(ExposureModel::reciprocal(), NormalizationModel::esl3(), 4, 8));
  EXPECT_TRUE(is_top_heavy(ExposureModel::linear(8), NormalizationModel::ap(), 4, 8));
}

TEST(TopHeavy, BudgetIsEnforced) {
  const auto r = is_top_heavy(ExposureModel::reciprocal(), NormalizationModel::ap(), 13, 20);
  EXPECT_EQ(r.status, TopHeavyCheck::Status::truncated);
  EXPECT_FALSE(r);
  const auto big = is_top_heavy(ExposureModel::reciprocal(), NormalizationModel::ap(), 12, 1000);
  EXPECT_EQ(big.status, TopHeavyCheck::Status::truncated);
}

TEST(Combinations, EnumeratesEverySubsetOnce) {
  std::size_t count = 0;
  std::vector<Position> prev;
  for_each_combination(3, 7, [&](const std::vector<Position>& c) {
    if (!prev.empty()) EXPECT_LT(prev, c);
    prev = c;
    ++count;
  });
  EXPECT_EQ(count, 35u);
}
