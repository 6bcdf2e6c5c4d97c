#pragma once

// Randomized checks of the axiomatic metric properties: retrieval-size
// monotonicity, nonrelevance and relevance monotonicity, swap-up
// monotonicity and concavity in contiguous swap depth. Each returns the
// number of violating instances; shared by the unit and acceptance tests.

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lexirank/metrics.hpp"
#include "lexirank/prefs.hpp"
#include "oracles.hpp"

namespace property {

using namespace lexirank;

inline constexpr int kCases = 10000;

// Every normalization here is strictly positive at every level.
inline std::vector<LevelMetric> positive_metrics() {
  return {LevelMetric::ap(), LevelMetric::ndcg(), LevelMetric::rbp(0.8),
          {ExposureModel::reciprocal(), NormalizationModel::uniform()},
          {ExposureModel::geometric(0.9), NormalizationModel::ap()}};
}

/// A top-k list over a corpus, with its relevant set.
struct TopK {
  std::int64_t corpus_size = 0;
  std::set<ItemId> relevant;
  std::vector<ItemId> items;

  RelevantPositions project() const {
    return project_and_impute(RankedList("q", items, corpus_size), JudgmentSet("q", relevant));
  }
  std::size_t missing() const {
    return relevant.size() - static_cast<std::size_t>(std::count_if(
                                 items.begin(), items.end(),
                                 [&](const ItemId& id) { return relevant.contains(id); }));
  }
  bool can_append_relevant() const {
    // The appended item must land strictly above the imputed block.
    return missing() > 0 &&
           static_cast<std::int64_t>(items.size() + missing()) < corpus_size;
  }
  bool can_append_nonrelevant() const {
    return static_cast<std::int64_t>(items.size() + 1 + missing()) <= corpus_size;
  }
  TopK with_relevant() const {
    TopK t = *this;
    for (const auto& id : relevant) {
      if (std::find(items.begin(), items.end(), id) == items.end()) {
        t.items.push_back(id);
        break;
      }
    }
    return t;
  }
  TopK with_nonrelevant() const {
    TopK t = *this;
    t.items.push_back("x" + std::to_string(items.size()));
    return t;
  }
};

template <class Rng>
TopK random_topk(Rng& rng) {
  TopK t;
  t.corpus_size = std::uniform_int_distribution<std::int64_t>(12, 60)(rng);
  const auto m = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
  for (std::size_t i = 0; i < m; ++i) t.relevant.insert("r" + std::to_string(i));
  const auto k_max = static_cast<std::size_t>(t.corpus_size) - m;
  const auto k = std::uniform_int_distribution<std::size_t>(1, k_max)(rng);
  std::vector<ItemId> pool(t.relevant.begin(), t.relevant.end());
  for (std::size_t i = 0; i < k; ++i) pool.push_back("n" + std::to_string(i));
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(k);
  t.items = std::move(pool);
  return t;
}

/// Appending any item never lowers a metric or the lexirecall standing.
inline std::size_t monotone_in_retrieval_size(std::uint64_t seed, int cases = kCases) {
  std::mt19937_64 rng(seed);
  const auto metrics = positive_metrics();
  std::size_t violations = 0;
  for (int checked = 0; checked < cases;) {
    const auto t = random_topk(rng);
    const bool relevant = rng() & 1;
    if (relevant ? !t.can_append_relevant() : !t.can_append_nonrelevant()) continue;
    const auto before = t.project();
    const auto after = (relevant ? t.with_relevant() : t.with_nonrelevant()).project();
    bool ok = tse(after) >= tse(before) &&
              lexirecall_compare(after, before).outcome != Outcome::prefer_second;
    for (const auto& metric : metrics) ok = ok && metric(after) >= metric(before);
    violations += !ok;
    ++checked;
  }
  return violations;
}

/// Appending a nonrelevant item leaves every value unchanged.
inline std::size_t nonrelevance_leaves_values_equal(std::uint64_t seed, int cases = kCases) {
  std::mt19937_64 rng(seed);
  const auto metrics = positive_metrics();
  std::size_t violations = 0;
  for (int checked = 0; checked < cases;) {
    const auto t = random_topk(rng);
    if (!t.can_append_nonrelevant()) continue;
    const auto before = t.project();
    const auto after = t.with_nonrelevant().project();
    bool ok = lexirecall_compare(after, before) == Preference::tie();
    for (const auto& metric : metrics) ok = ok && metric(after) == metric(before);
    for (const auto& id : {MetricId::recall_at(10), MetricId::rprecision(), MetricId::tse()}) {
      ok = ok && evaluate(id, after) == evaluate(id, before);
    }
    violations += !ok;
    ++checked;
  }
  return violations;
}

/// Appending a relevant item strictly improves metrics with N > 0 and lexirecall.
inline std::size_t strictly_increasing_in_relevance(std::uint64_t seed, int cases = kCases) {
  std::mt19937_64 rng(seed);
  const auto metrics = positive_metrics();
  std::size_t violations = 0;
  for (int checked = 0; checked < cases;) {
    const auto t = random_topk(rng);
    if (!t.can_append_relevant()) continue;
    const auto before = t.project();
    const auto after = t.with_relevant().project();
    bool ok = lexirecall_compare(after, before).outcome == Outcome::prefer_first;
    for (const auto& metric : metrics) ok = ok && metric(after) > metric(before);
    violations += !ok;
    ++checked;
  }
  return violations;
}

/// Moving a relevant item above a nonrelevant one.
inline std::size_t swap_up_never_hurts(std::uint64_t seed, int cases = kCases) {
  std::mt19937_64 rng(seed);
  const auto metrics = positive_metrics();
  std::size_t violations = 0;
  for (int checked = 0; checked < cases;) {
    const std::int64_t d = std::uniform_int_distribution<std::int64_t>(5, 60)(rng);
    const auto m = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    if (static_cast<std::int64_t>(m) >= d) continue;
    const auto x = oracle::random_positions(rng, m, d);
    const auto j = std::uniform_int_distribution<std::size_t>(0, m - 1)(rng);
    std::vector<Position> open;
    for (Position p = 1; p < x[j]; ++p) {
      if (!std::binary_search(x.begin(), x.end(), p)) open.push_back(p);
    }
    if (open.empty()) continue;
    auto y = x;
    y[j] = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
    std::sort(y.begin(), y.end());
    const auto rx = RelevantPositions::from_positions(x, d);
    const auto ry = RelevantPositions::from_positions(y, d);
    bool ok = lexirecall_compare(ry, rx).outcome == Outcome::prefer_first;
    for (const auto& metric : metrics) ok = ok && metric(ry) > metric(rx);
    // Metrics with zero weight at some levels only need the weak version.
    for (const auto& id : {MetricId::rr(), MetricId::tse(), MetricId::recall_at(5)}) {
      ok = ok && evaluate(id, ry) >= evaluate(id, rx);
    }
    violations += !ok;
    ++checked;
  }
  return violations;
}

/// A contiguous swap gains more near the top than deeper down, for
/// exposures with positive second derivative.
inline std::size_t concave_in_contiguous_swap_depth(std::uint64_t seed, int cases = kCases) {
  std::mt19937_64 rng(seed);
  const std::vector<LevelMetric> metrics{
      LevelMetric::ap(), LevelMetric::rbp(0.8),
      {ExposureModel::reciprocal(), NormalizationModel::uniform()},
      {ExposureModel::geometric(0.9), NormalizationModel::ap()}};
  std::size_t violations = 0;
  for (int checked = 0; checked < cases;) {
    const std::int64_t d = std::uniform_int_distribution<std::int64_t>(6, 60)(rng);
    const auto m = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    if (static_cast<std::int64_t>(m) + 2 >= d) continue;
    const auto x = oracle::random_positions(rng, m, d);
    const auto j = std::uniform_int_distribution<std::size_t>(0, m - 1)(rng);
    const Position above = j ? x[j - 1] : 0;
    const Position below = j + 1 < m ? x[j + 1] : d + 1;
    // Both x_j and a deeper y_j need a nonrelevant item directly above.
    if (x[j] - 1 <= above || x[j] + 1 >= below) continue;
    auto y = x;
    y[j] = std::uniform_int_distribution<Position>(x[j] + 1, below - 1)(rng);
    auto x_up = x, y_up = y;
    --x_up[j];
    --y_up[j];
    const auto rx = RelevantPositions::from_positions(x, d);
    const auto ry = RelevantPositions::from_positions(y, d);
    const auto rxu = RelevantPositions::from_positions(x_up, d);
    const auto ryu = RelevantPositions::from_positions(y_up, d);
    bool ok = true;
    for (const auto& metric : metrics) {
      ok = ok && metric(rxu) - metric(rx) > metric(ryu) - metric(ry);
    }
    violations += !ok;
    ++checked;
  }
  return violations;
}

/// Antisymmetry, tie iff identical, and transitivity on random triples.
inline std::size_t lexirecall_total_preorder(std::uint64_t seed, int cases = kCases) {
  std::mt19937_64 rng(seed);
  std::size_t violations = 0;
  auto vec = [](const RelevantPositions& r) {
    return std::vector<Position>(r.positions().begin(), r.positions().end());
  };
  for (int t = 0; t < cases; ++t) {
    const std::int64_t d = std::uniform_int_distribution<std::int64_t>(4, 12)(rng);
    const auto m = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    const auto a = RelevantPositions::from_positions(oracle::random_positions(rng, m, d), d);
    const auto b = RelevantPositions::from_positions(oracle::random_positions(rng, m, d), d);
    const auto c = RelevantPositions::from_positions(oracle::random_positions(rng, m, d), d);
    const auto ab = lexirecall_compare(a, b);
    const auto bc = lexirecall_compare(b, c);
    bool ok = lexirecall_compare(b, a) == ab.flipped() &&
              (ab.outcome == Outcome::tie) == (vec(a) == vec(b));
    if (ab.outcome == Outcome::prefer_first && bc.outcome == Outcome::prefer_first) {
      ok = ok && lexirecall_compare(a, c).outcome == Outcome::prefer_first;
    }
    violations += !ok;
  }
  return violations;
}

}  // namespace property
