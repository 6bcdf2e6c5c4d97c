#pragma once

// Significance tests, multiple-comparison correction and discriminative power.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexirank/core.hpp"
#include "lexirank/metrics.hpp"
#include "lexirank/prefs.hpp"

namespace lexirank {

/// I_x(a, b) by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

double student_t_cdf(double t, double df);

struct TTest {
  double t;
  double df;
  /// Two-sided. Zero-variance differences give p = 1 (zero mean) or p = 0
  /// with t = +-inf (nonzero mean).
  double p;
};

TTest paired_t_test(std::span<const double> a, std::span<const double> b);

struct SignTest {
  /// Absent when there are no decisive pairs.
  std::optional<double> p;
  std::size_t decisive = 0;
  std::size_t ties = 0;
};

/// Exact two-sided binomial test at 1/2 over decisive pairs; ties are
/// dropped and reported.
SignTest binomial_sign_test(std::size_t wins_first, std::size_t wins_second,
                            std::size_t ties = 0);

/// Step-down adjusted p-values, returned in input order.
std::vector<double> holm_bonferroni(std::span<const double> p_values);

/// P(Q <= q) for the studentized range of k means with df degrees of
/// freedom. df = infinity is allowed.
double studentized_range_cdf(double q, double k, double df);

/// The q with studentized_range_cdf(q, k, df) = p.
double studentized_range_quantile(double p, double k, double df);

struct ScoreMatrix {
  std::vector<std::string> runs;
  std::vector<std::string> requests;
  /// values[run][request]
  std::vector<std::vector<double>> values;

  void validate() const;
};

struct HsdResult {
  /// Symmetric; diagonal is 1.
  std::vector<std::vector<double>> p;
  double mse = 0.0;
  double df = 0.0;
  /// Zero residual variance: p is 1 for equal run means and 0 otherwise.
  bool degenerate = false;
};

/// Two-way (run, request) additive model, studentized-range p-values.
HsdResult tukey_hsd(const ScoreMatrix& matrix);

struct PreferenceTally {
  std::vector<std::string> runs;
  /// wins[a][b]: requests on which run a is preferred to run b.
  std::vector<std::vector<std::size_t>> wins;
  std::vector<std::vector<std::size_t>> ties;
};

enum class PowerMethod { holm_t, holm_binomial, hsd };

PowerMethod parse_power_method(std::string_view text);
std::string_view to_string(PowerMethod method) noexcept;

/// Fraction of run pairs whose (corrected) p-value is below alpha.
double discriminative_power(const ScoreMatrix& matrix, PowerMethod method,
                            double alpha = 0.05,
                            double tolerance = kDefaultTolerance);
double discriminative_power(const PreferenceTally& tally, double alpha = 0.05);

ScoreMatrix score_matrix(const ProjectedRuns& projected, const MetricId& metric);

PreferenceTally preference_tally(const ProjectedRuns& projected,
                                 const ComparisonMethod& method,
                                 double tolerance = kDefaultTolerance);

/// Per request, each run's (wins + ties/2) / (runs - 1) against the others;
/// lets HSD run on preference-only methods.
ScoreMatrix preference_scores(const ProjectedRuns& projected,
                              const ComparisonMethod& method,
                              double tolerance = kDefaultTolerance);

}  // namespace lexirank
