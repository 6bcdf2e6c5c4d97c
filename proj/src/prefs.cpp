#include "lexirank/prefs.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace lexirank {

namespace {

void require_same_shape(const RelevantPositions& x, const RelevantPositions& y) {
  if (x.corpus_size() != y.corpus_size()) {
    throw ValidationError("cannot compare rankings over different corpus sizes");
  }
  if (x.size() != y.size()) {
    throw ValidationError("cannot compare rankings with different m");
  }
}

std::size_t deepest_difference(std::span<const Position> x,
                               std::span<const Position> y) {
  for (std::size_t i = x.size(); i-- > 0;) {
    if (x[i] != y[i]) return i + 1;
  }
  return 0;
}

}  // namespace

UtilityVector::UtilityVector(std::vector<double> values)
    : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0)) {
      throw ValidationError("utilities must be non-negative");
    }
    if (i > 0 && values_[i] > values_[i - 1]) {
      throw ValidationError("utility vector must be sorted decreasingly");
    }
  }
}

UtilityVector UtilityVector::from_unsorted(std::vector<double> values) {
  std::sort(values.begin(), values.end(), std::greater<>());
  return UtilityVector(std::move(values));
}

Preference leximin_compare(const UtilityVector& x, const UtilityVector& y) {
  if (x.size() != y.size()) {
    throw ValidationError("leximin needs equal-length utility vectors");
  }
  const auto a = x.values();
  const auto b = y.values();
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] > b[i]) return Preference::first(i + 1);
    if (a[i] < b[i]) return Preference::second(i + 1);
  }
  return Preference::tie();
}

Preference lexirecall_compare(std::span<const Position> x,
                              std::span<const Position> y) {
  if (x.size() != y.size()) {
    throw ValidationError("cannot compare rankings with different m");
  }
  for (std::size_t i = x.size(); i-- > 0;) {
    if (x[i] < y[i]) return Preference::first(i + 1);
    if (x[i] > y[i]) return Preference::second(i + 1);
  }
  return Preference::tie();
}

Preference lexirecall_compare(const RelevantPositions& x,
                              const RelevantPositions& y) {
  require_same_shape(x, y);
  return lexirecall_compare(x.positions(), y.positions());
}

Preference tse_compare(const RelevantPositions& x, const RelevantPositions& y,
                       const ExposureModel& exposure) {
  require_same_shape(x, y);
  const double ex = exposure.at(x.last());
  const double ey = exposure.at(y.last());
  const auto m = x.size();
  if (ex > ey) return Preference::first(m);
  if (ex < ey) return Preference::second(m);
  return Preference::tie();
}

Preference metric_compare(const MetricId& metric, const RelevantPositions& x,
                          const RelevantPositions& y, double tolerance) {
  if (!(tolerance >= 0.0)) throw ValidationError("tolerance must be >= 0");
  require_same_shape(x, y);
  const auto level = deepest_difference(x.positions(), y.positions());
  if (level == 0) return Preference::tie();

  int sign = 0;
  if (metric.kind() == MetricId::Kind::metric_lexirecall) {
    sign = cmp(metric_lexirecall(x, metric.epsilon()),
               metric_lexirecall(y, metric.epsilon()));
    sign = sign > 0 ? 1 : (sign < 0 ? -1 : 0);
  } else {
    const double a = evaluate(metric, x);
    const double b = evaluate(metric, y);
    if (std::abs(a - b) > tolerance) sign = a > b ? 1 : -1;
  }
  if (!metric.higher_is_better()) sign = -sign;
  if (sign > 0) return Preference::first(level);
  if (sign < 0) return Preference::second(level);
  return Preference::tie();
}

ComparisonMethod ComparisonMethod::tse(const ExposureModel& exposure) {
  ComparisonMethod method(Kind::tse);
  method.exposure_ = exposure;
  return method;
}

ComparisonMethod ComparisonMethod::metric(MetricId metric) {
  ComparisonMethod method(Kind::metric);
  method.metric_ = std::move(metric);
  return method;
}

ComparisonMethod ComparisonMethod::parse(std::string_view text) {
  if (text == "lexirecall") return lexirecall();
  if (text == "tse") return tse();
  if (text.starts_with("tse:")) return tse(ExposureModel::parse(text.substr(4)));
  if (text.starts_with("metric:")) return metric(MetricId::parse(text.substr(7)));
  throw ValidationError("unknown comparison method '" + std::string(text) +
                        "'");
}

Preference ComparisonMethod::compare(const RelevantPositions& x,
                                     const RelevantPositions& y,
                                     double tolerance) const {
  switch (kind_) {
    case Kind::lexirecall: return lexirecall_compare(x, y);
    case Kind::tse: return tse_compare(x, y, exposure_);
    case Kind::metric: return metric_compare(metric_, x, y, tolerance);
  }
  return Preference::tie();
}

std::string ComparisonMethod::name() const {
  switch (kind_) {
    case Kind::lexirecall: return "lexirecall";
    case Kind::tse:
      return exposure_.kind() == ExposureModel::Kind::reciprocal
                 ? std::string("tse")
                 : "tse:" + exposure_.name();
    case Kind::metric: return "metric:" + metric_.name();
  }
  return "?";
}

}  // namespace lexirank
