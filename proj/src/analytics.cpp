#include "lexirank/analytics.hpp"

#include <cmath>
#include <random>

#include "analytics_kernel.hpp"
#include "lexirank/parallel.hpp"

namespace lexirank {

namespace {

mpz_class binomial(std::int64_t n, std::int64_t k) {
  mpz_class r;
  if (k < 0 || k > n) return r;  // zero
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return r;
}

ExactProbability make_probability(mpz_class numerator, mpz_class denominator) {
  mpq_class q(numerator, denominator);
  q.canonicalize();
  ExactProbability p;
  p.numerator = q.get_num();
  p.denominator = q.get_den();
  p.float_view = q.get_d();
  return p;
}

mpz_class cutoff_tie_count(std::int64_t corpus_size, std::int64_t m,
                           std::int64_t k) {
  // Both rankings place exactly i of the m relevant items in the top k.
  mpz_class total;
  const auto lo = std::max<std::int64_t>(0, m - (corpus_size - k));
  const auto hi = std::min(k, m);
  for (std::int64_t i = lo; i <= hi; ++i) {
    const mpz_class ways = binomial(k, i) * binomial(corpus_size - k, m - i);
    total += ways * ways;
  }
  return total;
}

std::int64_t count_within(std::span<const Position> x, std::int64_t k) {
  return std::upper_bound(x.begin(), x.end(), k) - x.begin();
}

}  // namespace

TieMetric parse_tie_metric(std::string_view text) {
  if (text == "tse") return TieMetric::tse;
  if (text == "recall" || text.starts_with("recall@")) return TieMetric::recall_at_k;
  if (text == "rprecision") return TieMetric::rprecision;
  if (text == "lexirecall") return TieMetric::lexirecall;
  throw ValidationError("unknown tie metric '" + std::string(text) + "'");
}

std::string_view to_string(TieMetric metric) noexcept {
  switch (metric) {
    case TieMetric::tse: return "tse";
    case TieMetric::recall_at_k: return "recall";
    case TieMetric::rprecision: return "rprecision";
    case TieMetric::lexirecall: return "lexirecall";
  }
  return "?";
}

ExactProbability tie_probability(TieMetric metric, std::int64_t corpus_size,
                                 std::int64_t m, std::optional<std::int64_t> k) {
  if (corpus_size < 1) throw ValidationError("corpus size must be positive");
  if (m < 1 || m > corpus_size) {
    throw ValidationError("tie probability needs 1 <= m <= D");
  }
  const mpz_class subsets = binomial(corpus_size, m);
  const mpz_class pairs = subsets * subsets;
  switch (metric) {
    case TieMetric::lexirecall:
      return make_probability(mpz_class(1), subsets);
    case TieMetric::tse: {
      // Pairs sharing the last relevant position i: C(i-1, m-1)^2 each.
      mpz_class ways = 1;  // C(m-1, m-1)
      mpz_class total;
      for (std::int64_t i = m;; ++i) {
        total += ways * ways;
        if (i == corpus_size) break;
        // C(i, m-1) = C(i-1, m-1) * i / (i - m + 1)
        mpz_mul_ui(ways.get_mpz_t(), ways.get_mpz_t(),
                   static_cast<unsigned long>(i));
        mpz_divexact_ui(ways.get_mpz_t(), ways.get_mpz_t(),
                        static_cast<unsigned long>(i - m + 1));
      }
      return make_probability(total, pairs);
    }
    case TieMetric::recall_at_k: {
      const auto cutoff = k.value_or(1000);
      if (cutoff < 1) throw ValidationError("recall@k requires k >= 1");
      return make_probability(
          cutoff_tie_count(corpus_size, m, std::min(cutoff, corpus_size)), pairs);
    }
    case TieMetric::rprecision:
      return make_probability(cutoff_tie_count(corpus_size, m, m), pairs);
  }
  throw ValidationError("unknown tie metric");
}

bool positions_tie(TieMetric metric, std::span<const Position> x,
                   std::span<const Position> y, std::int64_t k) {
  if (x.size() != y.size() || x.empty()) {
    throw ValidationError("tie test needs equal, non-empty vectors");
  }
  switch (metric) {
    case TieMetric::tse:
      return x.back() == y.back();
    case TieMetric::recall_at_k:
      return count_within(x, k) == count_within(y, k);
    case TieMetric::rprecision: {
      const auto m = static_cast<std::int64_t>(x.size());
      return count_within(x, m) == count_within(y, m);
    }
    case TieMetric::lexirecall:
      return std::equal(x.begin(), x.end(), y.begin());
  }
  return false;
}

void SimulationConfig::validate() const {
  if (corpus_size < 1) throw ValidationError("corpus size must be positive");
  if (m_lo < 1 || m_hi < m_lo || m_hi > corpus_size) {
    throw ValidationError("m range must satisfy 1 <= lo <= hi <= D");
  }
  if (pair_count < 1) throw ValidationError("pair count must be >= 1");
  if (depth && (*depth < 1 || *depth > corpus_size)) {
    throw ValidationError("depth must satisfy 1 <= k <= D");
  }
}

RelevantPositions truncate_at_depth(std::span<const Position> positions,
                                    std::int64_t corpus_size,
                                    std::int64_t depth) {
  if (depth < 1 || depth > corpus_size) {
    throw ValidationError("depth must satisfy 1 <= k <= D");
  }
  const auto m = static_cast<std::int64_t>(positions.size());
  const auto retrieved = count_within(positions, depth);
  const auto missing = m - retrieved;
  std::vector<Position> out(positions.begin(), positions.begin() + retrieved);
  for (std::int64_t j = 0; j < missing; ++j) {
    out.push_back(corpus_size - missing + 1 + j);
  }
  return {std::move(out), corpus_size, static_cast<std::size_t>(retrieved),
          Imputation::pessimistic};
}

namespace detail {

SimulatedPair simulated_pair(const SimulationConfig& config, std::uint64_t trial) {
  std::mt19937_64 rng(derive_seed(config.seed, trial));
  std::uniform_int_distribution<std::int64_t> pick_m(config.m_lo, config.m_hi);
  const auto m = pick_m(rng);
  auto xs = sample_positions(rng, m, config.corpus_size);
  auto ys = sample_positions(rng, m, config.corpus_size);
  if (config.depth) {
    return {truncate_at_depth(xs, config.corpus_size, *config.depth),
            truncate_at_depth(ys, config.corpus_size, *config.depth)};
  }
  return {RelevantPositions::from_positions(std::move(xs), config.corpus_size),
          RelevantPositions::from_positions(std::move(ys), config.corpus_size)};
}

int worst_case_vote(const SimulatedPair& pair, const ComparisonMethod& method,
                    double tolerance) {
  const auto worst = tse_compare(pair.x, pair.y);
  if (worst.is_tie()) return -1;
  return method.compare(pair.x, pair.y, tolerance).outcome == worst.outcome;
}

}  // namespace detail

std::vector<SimulatedPair> simulate_pairs(const SimulationConfig& config) {
  config.validate();
  std::vector<std::optional<SimulatedPair>> slots(config.pair_count);
  parallel_for(static_cast<std::int64_t>(config.pair_count), [&](std::int64_t t) {
    slots[static_cast<std::size_t>(t)] =
        detail::simulated_pair(config, static_cast<std::uint64_t>(t));
  });
  std::vector<SimulatedPair> pairs;
  pairs.reserve(slots.size());
  for (auto& slot : slots) pairs.push_back(std::move(*slot));
  return pairs;
}

Agreement agreement_with_worst_case(std::span<const SimulatedPair> pairs,
                                    const ComparisonMethod& method,
                                    double tolerance) {
  std::vector<signed char> votes(pairs.size());
  parallel_for(static_cast<std::int64_t>(pairs.size()), [&](std::int64_t t) {
    const auto i = static_cast<std::size_t>(t);
    votes[i] = static_cast<signed char>(
        detail::worst_case_vote(pairs[i], method, tolerance));
  });
  Agreement a;
  a.pairs = pairs.size();
  for (auto v : votes) {
    if (v < 0) continue;
    ++a.strict_pairs;
    a.agreeing += static_cast<std::size_t>(v);
  }
  if (a.pairs) {
    a.tied_fraction = static_cast<double>(a.pairs - a.strict_pairs) /
                      static_cast<double>(a.pairs);
  }
  if (a.strict_pairs) {
    a.agreement = static_cast<double>(a.agreeing) /
                  static_cast<double>(a.strict_pairs);
  }
  return a;
}

Agreement agreement_with_worst_case(std::span<const SimulatedPair> pairs,
                                    const MetricId& metric, double tolerance) {
  return agreement_with_worst_case(pairs, ComparisonMethod::metric(metric),
                                   tolerance);
}

Agreement random_agreement(std::span<const SimulatedPair> pairs,
                           std::uint64_t seed) {
  Agreement a;
  a.pairs = pairs.size();
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    const auto worst = tse_compare(pairs[t].x, pairs[t].y);
    if (worst.is_tie()) continue;
    ++a.strict_pairs;
    std::mt19937_64 rng(derive_seed(seed, t));
    const auto coin = (rng() >> 63) ? Outcome::prefer_first : Outcome::prefer_second;
    if (coin == worst.outcome) ++a.agreeing;
  }
  if (a.pairs) {
    a.tied_fraction = static_cast<double>(a.pairs - a.strict_pairs) /
                      static_cast<double>(a.pairs);
  }
  if (a.strict_pairs) {
    a.agreement = static_cast<double>(a.agreeing) /
                  static_cast<double>(a.strict_pairs);
  }
  return a;
}

double tie_fraction(std::span<const SimulatedPair> pairs,
                    const ComparisonMethod& method, double tolerance) {
  if (pairs.empty()) return 0.0;
  std::vector<char> tied(pairs.size());
  parallel_for(static_cast<std::int64_t>(pairs.size()), [&](std::int64_t t) {
    const auto i = static_cast<std::size_t>(t);
    tied[i] = method.compare(pairs[i].x, pairs[i].y, tolerance).is_tie();
  });
  const auto ties = std::count(tied.begin(), tied.end(), char{1});
  return static_cast<double>(ties) / static_cast<double>(pairs.size());
}

double empirical_tie_fraction(TieMetric metric, std::int64_t corpus_size,
                              std::int64_t m, std::int64_t k, std::size_t pairs,
                              std::uint64_t seed) {
  SimulationConfig config;
  config.corpus_size = corpus_size;
  config.m_lo = config.m_hi = m;
  config.pair_count = pairs;
  config.seed = seed;
  config.validate();
  std::vector<char> tied(pairs);
  parallel_for(static_cast<std::int64_t>(pairs), [&](std::int64_t t) {
    const auto pair = detail::simulated_pair(config, static_cast<std::uint64_t>(t));
    tied[static_cast<std::size_t>(t)] =
        positions_tie(metric, pair.x.positions(), pair.y.positions(), k);
  });
  const auto ties = std::count(tied.begin(), tied.end(), char{1});
  return static_cast<double>(ties) / static_cast<double>(pairs);
}

Orientation orientation(const MetricId& metric, std::int64_t corpus_size,
                        std::int64_t m) {
  if (corpus_size < 1) throw ValidationError("corpus size must be positive");
  if (m < 1 || m > corpus_size) {
    throw ValidationError("orientation needs 1 <= m <= D");
  }
  const auto mu = [&](const std::vector<Position>& p) {
    return evaluate(metric, p, corpus_size);
  };
  // Precision: the top item falls to the bottom, the rest already there.
  std::vector<Position> top_kept{1}, top_lost;
  for (std::int64_t p = corpus_size - m + 2; p <= corpus_size; ++p) top_kept.push_back(p);
  for (std::int64_t p = corpus_size - m + 1; p <= corpus_size; ++p) top_lost.push_back(p);
  // Recall: the last of an ideal ranking falls to the bottom.
  std::vector<Position> ideal, tail_lost;
  for (std::int64_t p = 1; p <= m; ++p) ideal.push_back(p);
  tail_lost.assign(ideal.begin(), ideal.end() - 1);
  tail_lost.push_back(corpus_size);

  Orientation o{mu(top_kept) - mu(top_lost), mu(ideal) - mu(tail_lost)};
  if (metric.kind() == MetricId::Kind::tse) {
    const auto& e = metric.exposure();
    const double range = e.at(m) - e.at(corpus_size);
    if (range > 0.0) {
      o.precision /= range;
      o.recall /= range;
    } else {
      o = {0.0, 0.0};
    }
  }
  if (!metric.higher_is_better()) o = {-o.precision, -o.recall};
  return o;
}

std::size_t degraded_removal_count(std::size_t m, double fraction) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    throw ValidationError("degradation fraction must lie in [0,1)");
  }
  if (m == 0) return 0;
  const auto wanted = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(m) + 0.5));
  return std::min(wanted, m - 1);
}

JudgmentSet degrade_judgments(const JudgmentSet& judgments, double fraction,
                              std::uint64_t seed) {
  if (judgments.empty()) {
    throw UnevaluableRequest("cannot degrade an empty judgment set");
  }
  const auto remove = degraded_removal_count(judgments.size(), fraction);
  if (remove == 0) return judgments;
  std::vector<ItemId> ids(judgments.relevant().begin(), judgments.relevant().end());
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < remove; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, ids.size() - 1);
    std::swap(ids[i], ids[pick(rng)]);
  }
  std::set<ItemId> kept(std::make_move_iterator(ids.begin() + static_cast<std::ptrdiff_t>(remove)),
                        std::make_move_iterator(ids.end()));
  return {judgments.request_id(), std::move(kept), judgments.source()};
}

std::vector<DegradationRow> degradation_study(
    std::span<const Run> runs, const JudgmentMap& judgments,
    std::int64_t corpus_size, std::span<const double> fractions,
    std::span<const ComparisonMethod> methods, std::size_t samples,
    std::uint64_t seed, double tolerance, Imputation mode) {
  if (samples < 1) throw ValidationError("degradation needs samples >= 1");
  if (runs.size() < 2) throw ValidationError("degradation needs >= 2 runs");
  for (double f : fractions) degraded_removal_count(1, f);

  const auto full = project_runs(runs, judgments, corpus_size, mode);
  const auto n_requests = full.requests.size();
  const auto n_runs = runs.size();
  const auto n_methods = methods.size();
  std::vector<std::pair<std::size_t, std::size_t>> run_pairs;
  for (std::size_t a = 0; a < n_runs; ++a) {
    for (std::size_t b = a + 1; b < n_runs; ++b) run_pairs.emplace_back(a, b);
  }
  const auto cells_per_request = run_pairs.size();

  // Full-label outcomes, [method][request * pairs + pair].
  std::vector<std::vector<Outcome>> reference(
      n_methods, std::vector<Outcome>(n_requests * cells_per_request));
  parallel_for(static_cast<std::int64_t>(n_requests), [&](std::int64_t q) {
    const auto& row = full.positions[static_cast<std::size_t>(q)];
    for (std::size_t k = 0; k < n_methods; ++k) {
      for (std::size_t c = 0; c < cells_per_request; ++c) {
        const auto [a, b] = run_pairs[c];
        reference[k][static_cast<std::size_t>(q) * cells_per_request + c] =
            methods[k].compare(row[a], row[b], tolerance).outcome;
      }
    }
  });
  std::vector<std::size_t> strict(n_methods, 0);
  for (std::size_t k = 0; k < n_methods; ++k) {
    for (auto o : reference[k]) strict[k] += o != Outcome::tie;
  }

  const double cells = static_cast<double>(n_requests * cells_per_request);
  std::vector<DegradationRow> rows;
  for (double fraction : fractions) {
    std::vector<double> tie_sum(n_methods, 0.0), agree_sum(n_methods, 0.0);
    for (std::size_t s = 0; s < samples; ++s) {
      const auto sample_seed = derive_seed(seed, s);
      JudgmentMap degraded;
      for (std::size_t q = 0; q < n_requests; ++q) {
        degraded.emplace(full.requests[q],
                         degrade_judgments(judgments.at(full.requests[q]),
                                           fraction, derive_seed(sample_seed, q)));
      }
      const auto projected = project_runs(runs, degraded, corpus_size, mode);
      // [request][method] -> (ties, agreeing)
      std::vector<std::vector<std::pair<std::size_t, std::size_t>>> counts(
          n_requests, std::vector<std::pair<std::size_t, std::size_t>>(n_methods));
      parallel_for(static_cast<std::int64_t>(n_requests), [&](std::int64_t qi) {
        const auto q = static_cast<std::size_t>(qi);
        const auto& row = projected.positions[q];
        for (std::size_t k = 0; k < n_methods; ++k) {
          for (std::size_t c = 0; c < cells_per_request; ++c) {
            const auto [a, b] = run_pairs[c];
            const auto outcome = methods[k].compare(row[a], row[b], tolerance).outcome;
            const auto expected = reference[k][q * cells_per_request + c];
            counts[q][k].first += outcome == Outcome::tie;
            counts[q][k].second += expected != Outcome::tie && outcome == expected;
          }
        }
      });
      for (std::size_t k = 0; k < n_methods; ++k) {
        std::size_t ties = 0, agreeing = 0;
        for (std::size_t q = 0; q < n_requests; ++q) {
          ties += counts[q][k].first;
          agreeing += counts[q][k].second;
        }
        if (cells > 0) tie_sum[k] += static_cast<double>(ties) / cells;
        if (strict[k]) {
          agree_sum[k] += static_cast<double>(agreeing) / static_cast<double>(strict[k]);
        }
      }
    }
    for (std::size_t k = 0; k < n_methods; ++k) {
      DegradationRow row{fraction, methods[k].name(),
                         tie_sum[k] / static_cast<double>(samples), std::nullopt};
      if (strict[k]) row.agreement = agree_sum[k] / static_cast<double>(samples);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace lexirank
