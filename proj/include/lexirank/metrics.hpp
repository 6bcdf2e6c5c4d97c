#pragma once

// Scalar evaluation metrics over relevant-position vectors.
//
// A recall-level metric sums exposure(RPx_i) * N(i, m) over the m recall
// levels. AP, RR, NDCG, RBP and TSE are instances of that form; Recall@k,
// R-Precision, ESL3 and recall error are standalone formulas.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexirank/core.hpp"

namespace lexirank {

class NormalizationModel {
 public:
  enum class Kind { ap, rr, ndcg, rbp, esl3, uniform };

  constexpr explicit NormalizationModel(Kind kind) noexcept : kind_(kind) {}

  static constexpr NormalizationModel ap() noexcept { return NormalizationModel{Kind::ap}; }
  static constexpr NormalizationModel rr() noexcept { return NormalizationModel{Kind::rr}; }
  static constexpr NormalizationModel ndcg() noexcept { return NormalizationModel{Kind::ndcg}; }
  static constexpr NormalizationModel rbp() noexcept { return NormalizationModel{Kind::rbp}; }
  static constexpr NormalizationModel esl3() noexcept { return NormalizationModel{Kind::esl3}; }
  static constexpr NormalizationModel uniform() noexcept { return NormalizationModel{Kind::uniform}; }

  static NormalizationModel parse(std::string_view text);

  /// N(i, m) for 1 <= i <= m.
  double weight(std::size_t level, std::size_t m) const;

  /// N(1,1) == 1, the precondition of the worst-case-user equality.
  bool unit_at_singleton() const { return weight(1, 1) == 1.0; }

  Kind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept;

  friend bool operator==(const NormalizationModel&, const NormalizationModel&) = default;

 private:
  Kind kind_;
};

/// 1 / sum_{k=1..m} 1/log2(k+1): the ideal binary DCG normalizer.
double ndcg_normalizer(std::size_t m);

struct LevelMetric {
  ExposureModel exposure;
  NormalizationModel normalization;

  static LevelMetric ap() { return {ExposureModel::reciprocal(), NormalizationModel::ap()}; }
  static LevelMetric rr() { return {ExposureModel::reciprocal(), NormalizationModel::rr()}; }
  static LevelMetric ndcg() { return {ExposureModel::log2(), NormalizationModel::ndcg()}; }
  static LevelMetric rbp(double gamma = 0.8) {
    return {ExposureModel::geometric(gamma), NormalizationModel::rbp()};
  }
  static LevelMetric tse(const ExposureModel& exposure = ExposureModel::reciprocal()) {
    return {exposure, NormalizationModel::esl3()};
  }

  double operator()(std::span<const Position> positions) const;
  double operator()(const RelevantPositions& rp) const;

  std::string name() const;
};

double recall_level_metric(std::span<const Position> positions,
                           const ExposureModel& exposure,
                           const NormalizationModel& normalization);

double recall_level_metric(const RelevantPositions& rp,
                           const ExposureModel& exposure,
                           const NormalizationModel& normalization);

class MetricId {
 public:
  enum class Kind {
    ap,
    rr,
    ndcg,
    rbp,
    recall_at_k,
    rprecision,
    tse,
    esl3,
    recall_error,
    metric_lexirecall
  };

  static MetricId ap() { return MetricId(Kind::ap); }
  static MetricId rr() { return MetricId(Kind::rr); }
  static MetricId ndcg() { return MetricId(Kind::ndcg); }
  static MetricId rbp(double gamma = 0.8);
  static MetricId recall_at(std::int64_t k = 1000);
  static MetricId rprecision() { return MetricId(Kind::rprecision); }
  static MetricId tse(const ExposureModel& exposure = ExposureModel::reciprocal());
  static MetricId esl3() { return MetricId(Kind::esl3); }
  static MetricId recall_error() { return MetricId(Kind::recall_error); }
  static MetricId metric_lexirecall(const mpq_class& epsilon = mpq_class(1, 2));

  /// "ap", "rr", "ndcg", "rbp[:gamma]", "recall@k", "rprecision",
  /// "tse[:exposure]", "esl3", "recall_error", "metric_lexirecall[:p/q]".
  static MetricId parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  double gamma() const noexcept { return gamma_; }
  std::int64_t cutoff() const noexcept { return cutoff_; }
  const ExposureModel& exposure() const noexcept { return exposure_; }
  const mpq_class& epsilon() const noexcept { return epsilon_; }

  bool higher_is_better() const noexcept;
  /// The Eq.-1 form of this metric, if it has one.
  std::optional<LevelMetric> level_metric() const;
  std::string name() const;

  friend bool operator==(const MetricId& a, const MetricId& b);

 private:
  explicit MetricId(Kind kind) : kind_(kind) {}

  Kind kind_;
  double gamma_ = 0.8;
  std::int64_t cutoff_ = 1000;
  ExposureModel exposure_ = ExposureModel::reciprocal();
  mpq_class epsilon_{1, 2};
};

double evaluate(const MetricId& metric, const RelevantPositions& rp);
double evaluate(const MetricId& metric, std::span<const Position> positions,
                std::int64_t corpus_size);

double tse(const RelevantPositions& rp,
           const ExposureModel& exposure = ExposureModel::reciprocal());

double recall_at(std::span<const Position> positions, std::int64_t k);
double rprecision(std::span<const Position> positions);
double esl3(std::span<const Position> positions);
double recall_error(std::span<const Position> positions);

/// Bottom-heavy weights w_1..w_m with sum exactly 1.
std::vector<mpq_class> metric_lexirecall_weights(std::size_t m,
                                                 std::int64_t corpus_size,
                                                 const mpq_class& epsilon);

mpq_class metric_lexirecall(std::span<const Position> positions,
                            std::int64_t corpus_size, const mpq_class& epsilon);

mpq_class metric_lexirecall(const RelevantPositions& rp,
                            const mpq_class& epsilon = mpq_class(1, 2));

struct TopHeavyCheck {
  enum class Status { holds, violated, truncated };
  Status status = Status::holds;
  /// On violation: the offending vector and prefix length j.
  std::vector<Position> counterexample;
  std::size_t j = 0;

  explicit operator bool() const noexcept { return status == Status::holds; }
};

/// Exhaustive check of the top-heaviness inequality over every RPx with
/// 1 <= m <= m_max in a corpus of size D. Refuses (truncated) when
/// m_max > 12 or the vector count exceeds the enumeration budget.
TopHeavyCheck is_top_heavy(const ExposureModel& exposure,
                           const NormalizationModel& normalization,
                           std::size_t m_max, std::int64_t corpus_size);

}  // namespace lexirank
