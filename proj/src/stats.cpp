#include "lexirank/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lexirank/parallel.hpp"

namespace lexirank {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (non-negative half).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
double adaptive_gk(const F& f, double a, double b, double tol, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  if (depth <= 0 || std::abs(kronrod - gauss) <= tol) return kronrod;
  return adaptive_gk(f, a, center, 0.5 * tol, depth - 1) +
         adaptive_gk(f, center, b, 0.5 * tol, depth - 1);
}

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// P(z - w < Z <= z), computed on the tail with less cancellation.
double normal_band(double z, double w) {
  if (z > 0.0) {
    return 0.5 * (std::erfc((z - w) / std::sqrt(2.0)) -
                  std::erfc(z / std::sqrt(2.0)));
  }
  return normal_cdf(z) - normal_cdf(z - w);
}

// Probability that the range of k standard normals is at most w.
double normal_range_cdf(double w, double k) {
  if (w <= 0.0) return 0.0;
  const auto integrand = [&](double z) {
    const double band = normal_band(z, w);
    return band <= 0.0 ? 0.0 : normal_pdf(z) * std::pow(band, k - 1.0);
  };
  const double value = adaptive_gk(integrand, -9.0, 0.0, 1e-13, 40) +
                       adaptive_gk(integrand, 0.0, 9.0, 1e-13, 40);
  return std::clamp(k * value, 0.0, 1.0);
}

double log_binomial(double n, double i) {
  return std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0);
}

bool close_enough(double a, double b, double tolerance) {
  return std::abs(a - b) <= tolerance;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw ValidationError("beta parameters must be > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("beta argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return x;
  if (x > (a + 1.0) / (a + b + 2.0)) {
    return 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
  }
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  // Modified Lentz evaluation of the continued fraction.
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + num * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < eps) break;
  }
  return std::exp(log_front) * h / a;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw ValidationError("degrees of freedom must be > 0");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  if (std::isinf(df)) return normal_cdf(t);
  const double tail =
      0.5 * regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
  return t > 0.0 ? 1.0 - tail : tail;
}

TTest paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("paired samples differ in length");
  const auto n = a.size();
  if (n < 2) throw ValidationError("paired t-test needs at least 2 pairs");
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  const double df = static_cast<double>(n - 1);

  if (std::all_of(d.begin(), d.end(), [&](double v) { return v == d[0]; })) {
    if (d[0] == 0.0) return {0.0, df, 1.0};
    return {d[0] > 0 ? kInf : -kInf, df, 0.0};
  }
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double se = std::sqrt(ss / df / static_cast<double>(n));
  if (se == 0.0) {
    if (mean == 0.0) return {0.0, df, 1.0};
    return {mean > 0 ? kInf : -kInf, df, 0.0};
  }
  const double t = mean / se;
  const double p = regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
  return {t, df, std::clamp(p, 0.0, 1.0)};
}

SignTest binomial_sign_test(std::size_t wins_first, std::size_t wins_second,
                            std::size_t ties) {
  SignTest result;
  result.ties = ties;
  result.decisive = wins_first + wins_second;
  if (result.decisive == 0) return result;
  const double n = static_cast<double>(result.decisive);
  const auto k = std::min(wins_first, wins_second);
  // log of sum_{i<=k} C(n, i), accumulated relative to its largest term.
  std::vector<double> logs(k + 1);
  for (std::size_t i = 0; i <= k; ++i) logs[i] = log_binomial(n, static_cast<double>(i));
  const double top = *std::max_element(logs.begin(), logs.end());
  long double sum = 0.0L;
  for (double v : logs) sum += std::exp(static_cast<long double>(v - top));
  const double log_tail = top + std::log(static_cast<double>(sum)) - n * std::log(2.0);
  result.p = std::min(1.0, 2.0 * std::exp(log_tail));
  return result;
}

std::vector<double> holm_bonferroni(std::span<const double> p_values) {
  const auto n = p_values.size();
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("p-values must lie in [0,1]");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return p_values[i] < p_values[j]; });
  std::vector<double> adjusted(n);
  double running = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double scaled = static_cast<double>(n - r) * p_values[order[r]];
    running = std::max(running, std::min(1.0, scaled));
    adjusted[order[r]] = running;
  }
  return adjusted;
}

double studentized_range_cdf(double q, double k, double df) {
  if (!(k >= 2.0)) throw ValidationError("studentized range needs k >= 2");
  if (!(df > 0.0)) throw ValidationError("degrees of freedom must be > 0");
  if (!(q > 0.0)) return 0.0;
  if (std::isinf(q)) return 1.0;
  if (std::isinf(df) || df > 25000.0) return normal_range_cdf(q, k);

  // Scale s = chi_df / sqrt(df); integrate its density against the
  // normal-range probability at q * s.
  const double half = 0.5 * df;
  const double log_const = half * std::log(df) - std::lgamma(half) -
                           (half - 1.0) * std::log(2.0);
  const auto integrand = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double log_density =
        log_const + (df - 1.0) * std::log(s) - half * s * s;
    if (log_density < -745.0) return 0.0;
    return std::exp(log_density) * normal_range_cdf(q * s, k);
  };
  const double spread = 9.0 / std::sqrt(df);
  const double mode = std::sqrt(std::max(df - 1.0, 0.0) / df);
  const double lo = std::max(0.0, mode - spread);
  const double hi = 1.0 + std::max(spread, 1.0) * (df < 3.0 ? 1.5 : 1.0);
  double value = adaptive_gk(integrand, lo, mode, 1e-11, 30) +
                 adaptive_gk(integrand, mode, hi, 1e-11, 30);
  return std::clamp(value, 0.0, 1.0);
}

double studentized_range_quantile(double p, double k, double df) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("quantile needs p in (0,1)");
  double lo = 0.0;
  double hi = 8.0;
  while (studentized_range_cdf(hi, k, df) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw ValidationError("studentized range quantile diverged");
  }
  for (int i = 0; i < 100 && hi - lo > 1e-10; ++i) {
    const double mid = 0.5 * (lo + hi);
    (studentized_range_cdf(mid, k, df) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void ScoreMatrix::validate() const {
  if (values.size() != runs.size()) {
    throw ValidationError("score matrix needs one row per run");
  }
  for (const auto& row : values) {
    if (row.size() != requests.size()) {
      throw ValidationError("score matrix rows must cover every request");
    }
  }
}

HsdResult tukey_hsd(const ScoreMatrix& matrix) {
  matrix.validate();
  const auto a = matrix.runs.size();
  const auto n = matrix.requests.size();
  if (a < 2 || n < 2) throw ValidationError("HSD needs >= 2 runs and >= 2 requests");

  std::vector<double> run_mean(a, 0.0), request_mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      run_mean[i] += matrix.values[i][j];
      request_mean[j] += matrix.values[i][j];
    }
  }
  for (auto& v : run_mean) { grand += v; v /= static_cast<double>(n); }
  for (auto& v : request_mean) v /= static_cast<double>(a);
  grand /= static_cast<double>(a * n);

  double sse = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double r = matrix.values[i][j] - run_mean[i] - request_mean[j] + grand;
      sse += r * r;
      scale += matrix.values[i][j] * matrix.values[i][j];
    }
  }
  HsdResult result;
  result.df = static_cast<double>((a - 1) * (n - 1));
  result.mse = sse / result.df;
  result.degenerate = sse <= 1e-24 * std::max(scale, 1e-300);
  result.p.assign(a, std::vector<double>(a, 1.0));

  const double se = std::sqrt(result.mse / static_cast<double>(n));
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = i + 1; j < a; ++j) {
      const double diff = std::abs(run_mean[i] - run_mean[j]);
      double p;
      if (result.degenerate) {
        p = diff <= 1e-12 * std::max(1.0, std::abs(grand)) ? 1.0 : 0.0;
      } else {
        p = 1.0 - studentized_range_cdf(diff / se, static_cast<double>(a), result.df);
      }
      result.p[i][j] = result.p[j][i] = std::clamp(p, 0.0, 1.0);
    }
  }
  return result;
}

PowerMethod parse_power_method(std::string_view text) {
  if (text == "holm_t") return PowerMethod::holm_t;
  if (text == "holm_binomial") return PowerMethod::holm_binomial;
  if (text == "hsd") return PowerMethod::hsd;
  throw ValidationError("unknown power method '" + std::string(text) + "'");
}

std::string_view to_string(PowerMethod method) noexcept {
  switch (method) {
    case PowerMethod::holm_t: return "holm_t";
    case PowerMethod::holm_binomial: return "holm_binomial";
    case PowerMethod::hsd: return "hsd";
  }
  return "?";
}

double discriminative_power(const ScoreMatrix& matrix, PowerMethod method,
                            double alpha, double tolerance) {
  matrix.validate();
  const auto a = matrix.runs.size();
  if (a < 2) throw ValidationError("discriminative power needs >= 2 runs");
  std::vector<double> p;
  if (method == PowerMethod::hsd) {
    const auto hsd = tukey_hsd(matrix);
    for (std::size_t i = 0; i < a; ++i) {
      for (std::size_t j = i + 1; j < a; ++j) p.push_back(hsd.p[i][j]);
    }
  } else {
    for (std::size_t i = 0; i < a; ++i) {
      for (std::size_t j = i + 1; j < a; ++j) {
        const auto& x = matrix.values[i];
        const auto& y = matrix.values[j];
        if (method == PowerMethod::holm_t) {
          p.push_back(paired_t_test(x, y).p);
        } else {
          std::size_t wins = 0, losses = 0, ties = 0;
          for (std::size_t q = 0; q < x.size(); ++q) {
            if (close_enough(x[q], y[q], tolerance)) ++ties;
            else if (x[q] > y[q]) ++wins;
            else ++losses;
          }
          p.push_back(binomial_sign_test(wins, losses, ties).p.value_or(1.0));
        }
      }
    }
    p = holm_bonferroni(p);
  }
  const auto significant = std::count_if(p.begin(), p.end(),
                                         [&](double v) { return v < alpha; });
  return static_cast<double>(significant) / static_cast<double>(p.size());
}

double discriminative_power(const PreferenceTally& tally, double alpha) {
  const auto a = tally.runs.size();
  if (a < 2) throw ValidationError("discriminative power needs >= 2 runs");
  std::vector<double> p;
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = i + 1; j < a; ++j) {
      p.push_back(binomial_sign_test(tally.wins[i][j], tally.wins[j][i],
                                     tally.ties[i][j])
                      .p.value_or(1.0));
    }
  }
  p = holm_bonferroni(p);
  const auto significant = std::count_if(p.begin(), p.end(),
                                         [&](double v) { return v < alpha; });
  return static_cast<double>(significant) / static_cast<double>(p.size());
}

ScoreMatrix score_matrix(const ProjectedRuns& projected, const MetricId& metric) {
  ScoreMatrix m{projected.run_tags, projected.requests, {}};
  const auto n_runs = projected.run_tags.size();
  const auto n_requests = projected.requests.size();
  m.values.assign(n_runs, std::vector<double>(n_requests, 0.0));
  parallel_for(static_cast<std::int64_t>(n_requests), [&](std::int64_t qi) {
    const auto q = static_cast<std::size_t>(qi);
    for (std::size_t r = 0; r < n_runs; ++r) {
      m.values[r][q] = evaluate(metric, projected.positions[q][r]);
    }
  });
  return m;
}

namespace {

// outcomes[q][a * runs + b] for a < b
std::vector<std::vector<Outcome>> pairwise_outcomes(const ProjectedRuns& projected,
                                                    const ComparisonMethod& method,
                                                    double tolerance) {
  const auto n_runs = projected.run_tags.size();
  const auto n_requests = projected.requests.size();
  std::vector<std::vector<Outcome>> out(
      n_requests, std::vector<Outcome>(n_runs * n_runs, Outcome::tie));
  parallel_for(static_cast<std::int64_t>(n_requests), [&](std::int64_t qi) {
    const auto q = static_cast<std::size_t>(qi);
    const auto& row = projected.positions[q];
    for (std::size_t a = 0; a < n_runs; ++a) {
      for (std::size_t b = a + 1; b < n_runs; ++b) {
        out[q][a * n_runs + b] = method.compare(row[a], row[b], tolerance).outcome;
      }
    }
  });
  return out;
}

}  // namespace

PreferenceTally preference_tally(const ProjectedRuns& projected,
                                 const ComparisonMethod& method,
                                 double tolerance) {
  const auto n_runs = projected.run_tags.size();
  PreferenceTally tally{projected.run_tags,
                        std::vector<std::vector<std::size_t>>(n_runs, std::vector<std::size_t>(n_runs, 0)),
                        std::vector<std::vector<std::size_t>>(n_runs, std::vector<std::size_t>(n_runs, 0))};
  for (const auto& outcomes : pairwise_outcomes(projected, method, tolerance)) {
    for (std::size_t a = 0; a < n_runs; ++a) {
      for (std::size_t b = a + 1; b < n_runs; ++b) {
        switch (outcomes[a * n_runs + b]) {
          case Outcome::prefer_first: ++tally.wins[a][b]; break;
          case Outcome::prefer_second: ++tally.wins[b][a]; break;
          case Outcome::tie: ++tally.ties[a][b]; ++tally.ties[b][a]; break;
        }
      }
    }
  }
  return tally;
}

ScoreMatrix preference_scores(const ProjectedRuns& projected,
                              const ComparisonMethod& method, double tolerance) {
  const auto n_runs = projected.run_tags.size();
  const auto n_requests = projected.requests.size();
  if (n_runs < 2) throw ValidationError("preference scores need >= 2 runs");
  ScoreMatrix m{projected.run_tags, projected.requests,
                std::vector<std::vector<double>>(n_runs, std::vector<double>(n_requests, 0.0))};
  const auto outcomes = pairwise_outcomes(projected, method, tolerance);
  for (std::size_t q = 0; q < n_requests; ++q) {
    for (std::size_t a = 0; a < n_runs; ++a) {
      for (std::size_t b = a + 1; b < n_runs; ++b) {
        switch (outcomes[q][a * n_runs + b]) {
          case Outcome::prefer_first: m.values[a][q] += 1.0; break;
          case Outcome::prefer_second: m.values[b][q] += 1.0; break;
          case Outcome::tie:
            m.values[a][q] += 0.5;
            m.values[b][q] += 0.5;
            break;
        }
      }
    }
    for (std::size_t a = 0; a < n_runs; ++a) {
      m.values[a][q] /= static_cast<double>(n_runs - 1);
    }
  }
  return m;
}

}  // namespace lexirank
