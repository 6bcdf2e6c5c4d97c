#pragma once

// Pairwise preferences between two rankings of the same request.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexirank/core.hpp"
#include "lexirank/metrics.hpp"

namespace lexirank {

inline constexpr double kDefaultTolerance = 1e-12;

/// Non-negative utilities sorted in decreasing order (worst-off last).
class UtilityVector {
 public:
  explicit UtilityVector(std::vector<double> values);

  /// Sorts `values` decreasingly before validating.
  static UtilityVector from_unsorted(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
};

/// Scans from the worst-off element upward; the larger value wins at the
/// first difference. deciding_level is the 1-based index into the vector.
Preference leximin_compare(const UtilityVector& x, const UtilityVector& y);

/// Scans recall levels from m downward; the smaller position wins at the
/// first difference.
Preference lexirecall_compare(std::span<const Position> x,
                              std::span<const Position> y);
Preference lexirecall_compare(const RelevantPositions& x,
                              const RelevantPositions& y);

Preference tse_compare(const RelevantPositions& x, const RelevantPositions& y,
                       const ExposureModel& exposure = ExposureModel::reciprocal());

/// |mu(x) - mu(y)| <= tolerance is a tie; otherwise the better value wins.
/// Metric lexirecall compares exact rationals and ignores the tolerance.
/// deciding_level is the deepest recall level where the vectors differ.
Preference metric_compare(const MetricId& metric, const RelevantPositions& x,
                          const RelevantPositions& y,
                          double tolerance = kDefaultTolerance);

class ComparisonMethod {
 public:
  enum class Kind { lexirecall, tse, metric };

  static ComparisonMethod lexirecall() { return ComparisonMethod(Kind::lexirecall); }
  static ComparisonMethod tse(const ExposureModel& exposure = ExposureModel::reciprocal());
  static ComparisonMethod metric(MetricId metric);

  /// "lexirecall", "tse[:exposure]", or "metric:<metric id>".
  static ComparisonMethod parse(std::string_view text);

  Preference compare(const RelevantPositions& x, const RelevantPositions& y,
                     double tolerance = kDefaultTolerance) const;

  Kind kind() const noexcept { return kind_; }
  const MetricId& metric_id() const noexcept { return metric_; }
  /// Preference-only methods are tested with the sign test.
  bool is_preference() const noexcept { return kind_ != Kind::metric; }
  std::string name() const;

 private:
  explicit ComparisonMethod(Kind kind) : kind_(kind) {}

  Kind kind_;
  ExposureModel exposure_ = ExposureModel::reciprocal();
  MetricId metric_ = MetricId::ap();
};

}  // namespace lexirank
