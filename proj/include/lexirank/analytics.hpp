#pragma once

// Exact tie probabilities, synthetic pair simulation, agreement with the
// worst-case order, metric orientation, and judgment degradation.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexirank/core.hpp"
#include "lexirank/metrics.hpp"
#include "lexirank/prefs.hpp"

namespace lexirank {

enum class TieMetric { tse, recall_at_k, rprecision, lexirecall };

TieMetric parse_tie_metric(std::string_view text);
std::string_view to_string(TieMetric metric) noexcept;

struct ExactProbability {
  mpz_class numerator;
  mpz_class denominator;
  double float_view = 0.0;

  mpq_class value() const { return mpq_class(numerator, denominator); }
};

/// Probability that two rankings drawn uniformly at random tie under
/// `metric`, for m relevant items in a corpus of D. `k` is the Recall@k
/// cutoff; values above D behave as D.
ExactProbability tie_probability(TieMetric metric, std::int64_t corpus_size,
                                 std::int64_t m,
                                 std::optional<std::int64_t> k = std::nullopt);

/// Whether two position vectors tie under `metric` (integer test, no
/// floating point involved).
bool positions_tie(TieMetric metric, std::span<const Position> x,
                   std::span<const Position> y, std::int64_t k = 1000);

struct SimulationConfig {
  std::int64_t corpus_size = 1000;
  std::int64_t m_lo = 5;
  std::int64_t m_hi = 50;
  std::size_t pair_count = 10000;
  std::optional<std::int64_t> depth;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SimulatedPair {
  RelevantPositions x;
  RelevantPositions y;

  std::size_t m() const noexcept { return x.size(); }
};

/// Uniform m-subset of [1..D] as a sorted vector (Floyd's algorithm).
template <class Rng>
std::vector<Position> sample_positions(Rng& rng, std::int64_t m,
                                       std::int64_t corpus_size);

/// Pair t depends only on (seed, t), so the stream is schedule-independent.
std::vector<SimulatedPair> simulate_pairs(const SimulationConfig& config);

/// Cut a complete vector at depth k and impute the rest pessimistically.
RelevantPositions truncate_at_depth(std::span<const Position> positions,
                                    std::int64_t corpus_size, std::int64_t depth);

struct Agreement {
  /// Absent when no pair has a strict worst-case order.
  std::optional<double> agreement;
  double tied_fraction = 0.0;
  std::size_t pairs = 0;
  std::size_t strict_pairs = 0;
  std::size_t agreeing = 0;
};

/// Over pairs whose TSE order is strict, the fraction where `metric`
/// prefers the same ranking. A metric tie counts as disagreement.
Agreement agreement_with_worst_case(std::span<const SimulatedPair> pairs,
                                    const MetricId& metric,
                                    double tolerance = kDefaultTolerance);

Agreement agreement_with_worst_case(std::span<const SimulatedPair> pairs,
                                    const ComparisonMethod& method,
                                    double tolerance = kDefaultTolerance);

/// Fair-coin baseline.
Agreement random_agreement(std::span<const SimulatedPair> pairs,
                           std::uint64_t seed);

/// Fraction of pairs the method leaves tied.
double tie_fraction(std::span<const SimulatedPair> pairs,
                    const ComparisonMethod& method,
                    double tolerance = kDefaultTolerance);

/// Empirical tie rate over `pairs` random pairs with fixed m.
double empirical_tie_fraction(TieMetric metric, std::int64_t corpus_size,
                              std::int64_t m, std::int64_t k, std::size_t pairs,
                              std::uint64_t seed);

struct Orientation {
  double precision;
  double recall;
};

/// Metric degradation when the best-placed (precision) or worst-placed
/// (recall) relevant item is moved to the bottom. TSE is min-max scaled by
/// [exposure(D), exposure(m)]; lower-is-better metrics are sign-flipped so
/// that a positive value always means the metric penalizes the move.
Orientation orientation(const MetricId& metric, std::int64_t corpus_size,
                        std::int64_t m);

/// round-half-up(fraction * m), capped so that one item remains.
std::size_t degraded_removal_count(std::size_t m, double fraction);

/// Removes items uniformly without replacement. With a fixed seed the removed
/// set for a smaller fraction is a subset of the one for a larger fraction.
JudgmentSet degrade_judgments(const JudgmentSet& judgments, double fraction,
                              std::uint64_t seed);

struct DegradationRow {
  double fraction;
  std::string method;
  double tie_fraction;
  std::optional<double> agreement;
};

/// For each fraction and method: mean over `samples` of the tie fraction of
/// degraded-label preferences and their agreement with full-label strict
/// preferences, over all (request, run pair) cells.
std::vector<DegradationRow> degradation_study(
    std::span<const Run> runs, const JudgmentMap& judgments,
    std::int64_t corpus_size, std::span<const double> fractions,
    std::span<const ComparisonMethod> methods, std::size_t samples,
    std::uint64_t seed, double tolerance = kDefaultTolerance,
    Imputation mode = Imputation::pessimistic);

namespace serial {

std::vector<SimulatedPair> simulate_pairs(const SimulationConfig& config);
Agreement agreement_with_worst_case(std::span<const SimulatedPair> pairs,
                                    const MetricId& metric,
                                    double tolerance = kDefaultTolerance);

}  // namespace serial

template <class Rng>
std::vector<Position> sample_positions(Rng& rng, std::int64_t m,
                                       std::int64_t corpus_size) {
  std::vector<Position> chosen;
  chosen.reserve(static_cast<std::size_t>(m));
  for (std::int64_t j = corpus_size - m + 1; j <= corpus_size; ++j) {
    std::uniform_int_distribution<std::int64_t> pick(1, j);
    const auto t = pick(rng);
    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) {
      chosen.push_back(t);
    } else {
      chosen.push_back(j);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace lexirank
