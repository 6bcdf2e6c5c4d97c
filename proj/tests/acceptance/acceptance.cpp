// Acceptance checks AC1..AC10. Prints one PASS/FAIL line per criterion.
//
//   lexirank_acceptance            run all
//   lexirank_acceptance AC3 AC5    run a subset
//   lexirank_acceptance AC10 --update-golden

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lexirank/analytics.hpp"
#include "lexirank/robustness.hpp"
#include "oracles.hpp"
#include "property_checks.hpp"

using namespace lexirank;
namespace fs = std::filesystem;

namespace {

struct Result {
  bool pass;
  std::string detail;
};

bool update_golden = false;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

RelevantPositions rp(const std::vector<Position>& v, std::int64_t d) {
  return RelevantPositions::from_positions(v, d);
}

// Worst-case user and provider equal TSE exactly.
Result ac1() {
  std::mt19937_64 rng(20240601);
  const LevelMetric metrics[] = {LevelMetric::ap(), LevelMetric::ndcg(), LevelMetric::rr(),
                                 LevelMetric::rbp(0.8)};
  std::size_t checks = 0, equal = 0, flagged = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto m = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
    const auto d = std::uniform_int_distribution<std::int64_t>(static_cast<std::int64_t>(m), 50)(rng);
    const auto r = rp(oracle::random_positions(rng, m, d), d);
    for (const auto& metric : metrics) {
      // The equality needs N(1,1) = 1; anything else is reported, not tested.
      if (!metric.normalization.unit_at_singleton()) {
        ++flagged;
        continue;
      }
      const double target = tse(r, metric.exposure);
      equal += worst_case_user(metric, r).value == target;
      equal += worst_case_provider(metric.exposure, r).value == target;
      checks += 2;
    }
  }
  return {equal == checks && flagged == 0,
          std::to_string(equal) + "/" + std::to_string(checks) +
              " worst-case values bitwise equal to TSE, " + std::to_string(flagged) +
              " flagged"};
}

// Leximin over user and provider populations lifts lexirecall.
Result ac2() {
  const std::int64_t d = 8;
  const auto all = oracle::all_vectors(3, d);
  std::vector<UtilityVector> users, providers;
  for (const auto& v : all) {
    users.push_back(user_utility_vector(LevelMetric::ap(), rp(v, d)));
    providers.push_back(provider_utility_vector(ExposureModel::reciprocal(), rp(v, d)));
  }
  std::size_t pairs = 0, user_match = 0, provider_match = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < all.size(); ++j) {
      const auto expected = lexirecall_compare(all[i], all[j]).outcome;
      user_match += leximin_compare(users[i], users[j]).outcome == expected;
      provider_match += leximin_compare(providers[i], providers[j]).outcome == expected;
      ++pairs;
    }
  }
  return {pairs == 3136 && user_match == pairs && provider_match == pairs,
          "users " + std::to_string(user_match) + "/" + std::to_string(pairs) +
              ", providers " + std::to_string(provider_match) + "/" + std::to_string(pairs)};
}

// Tie-probability tables, three decimals.
Result ac3() {
  struct Cell {
    std::int64_t d, m;
    TieMetric metric;
    double printed;
  };
  std::vector<Cell> cells;
  const std::int64_t ds[] = {1000, 10000, 100000, 1000000};
  const double t4_tse[] = {0.005, 0.001, 0.000, 0.000};
  const double t4_rp[] = {0.825, 0.980, 0.998, 1.000};
  const double t4_r1000[] = {1.000, 0.313, 0.826, 0.980};
  for (int i = 0; i < 4; ++i) {
    cells.push_back({ds[i], 10, TieMetric::tse, t4_tse[i]});
    cells.push_back({ds[i], 10, TieMetric::recall_at_k, t4_r1000[i]});
    cells.push_back({ds[i], 10, TieMetric::rprecision, t4_rp[i]});
    cells.push_back({ds[i], 10, TieMetric::lexirecall, 0.0});
  }
  const std::int64_t ms[] = {1, 5, 10, 25, 50};
  const double t5_r1000[] = {0.998, 0.990, 0.981, 0.952, 0.907};
  const double t5_rp[] = {1.000, 1.000, 1.000, 0.999, 0.995};
  for (int i = 0; i < 5; ++i) {
    cells.push_back({1000000, ms[i], TieMetric::tse, 0.0});
    cells.push_back({1000000, ms[i], TieMetric::recall_at_k, t5_r1000[i]});
    cells.push_back({1000000, ms[i], TieMetric::rprecision, t5_rp[i]});
    cells.push_back({1000000, ms[i], TieMetric::lexirecall, 0.0});
  }
  std::size_t ok = 0;
  std::string misses;
  for (const auto& c : cells) {
    const double v = tie_probability(c.metric, c.d, c.m, 1000).float_view;
    if (std::abs(v - c.printed) <= 5e-4) {
      ++ok;
    } else {
      misses += std::string(misses.empty() ? "" : "; ") + std::string(to_string(c.metric)) +
                " D=" + std::to_string(c.d) + " m=" + std::to_string(c.m) + " exact " +
                fmt("%.6f", v) + " vs printed " + fmt("%.3f", c.printed);
    }
  }
  std::string detail = std::to_string(ok) + "/" + std::to_string(cells.size()) +
                       " cells within 5e-4 of the printed value";
  if (!misses.empty()) detail += " (mismatch: " + misses + ")";
  return {ok == cells.size(), detail};
}

// Closed forms equal exhaustive enumeration as exact rationals.
Result ac4() {
  std::size_t cases = 0, equal = 0;
  for (std::int64_t d = 1; d <= 12; ++d) {
    for (std::int64_t m = 1; m <= std::min<std::int64_t>(d, 4); ++m) {
      const auto all = oracle::all_vectors(static_cast<std::size_t>(m), d);
      const mpz_class total = mpz_class(all.size()) * mpz_class(all.size());
      auto fraction = [&](mpz_class ties) {
        mpq_class q(ties, total);
        q.canonicalize();
        return q;
      };
      mpz_class tse_ties = 0, lex_ties = 0, rp_ties = 0;
      std::vector<mpz_class> recall_ties(static_cast<std::size_t>(d) + 1, 0);
      for (const auto& x : all) {
        for (const auto& y : all) {
          tse_ties += x.back() == y.back();
          lex_ties += x == y;
          rp_ties += oracle::count_at_most(x, m) == oracle::count_at_most(y, m);
          for (std::int64_t k = 1; k <= d; ++k) {
            recall_ties[static_cast<std::size_t>(k)] +=
                oracle::count_at_most(x, k) == oracle::count_at_most(y, k);
          }
        }
      }
      equal += tie_probability(TieMetric::tse, d, m).value() == fraction(tse_ties);
      equal += tie_probability(TieMetric::lexirecall, d, m).value() == fraction(lex_ties);
      equal += tie_probability(TieMetric::rprecision, d, m).value() == fraction(rp_ties);
      cases += 3;
      for (std::int64_t k = 1; k <= d; ++k) {
        equal += tie_probability(TieMetric::recall_at_k, d, m, k).value() ==
                 fraction(recall_ties[static_cast<std::size_t>(k)]);
        ++cases;
      }
    }
  }
  return {equal == cases, std::to_string(equal) + "/" + std::to_string(cases) +
                              " (D, m, metric, k) cases equal as rationals"};
}

// Agreement with the worst-case order on simulated pairs.
Result ac5() {
  struct Paper {
    double ap, ndcg;
  };
  const std::map<std::int64_t, Paper> paper{{10000, {0.552, 0.549}}, {100000, {0.554, 0.555}}};
  bool ok = true;
  std::string detail;
  for (std::int64_t d : {1000, 10000, 100000, 1000000}) {
    SimulationConfig config;
    config.corpus_size = d;
    config.m_lo = 5;
    config.m_hi = 50;
    config.pair_count = 10000;
    config.seed = 1;
    const auto pairs = simulate_pairs(config);
    const auto t = agreement_with_worst_case(pairs, MetricId::tse());
    const auto coin = random_agreement(pairs, config.seed);
    const auto ap = agreement_with_worst_case(pairs, MetricId::ap());
    const auto ndcg = agreement_with_worst_case(pairs, MetricId::ndcg());
    ok = ok && t.agreement && *t.agreement == 1.0;
    ok = ok && coin.agreement && std::abs(*coin.agreement - 0.5) <= 0.02;
    if (const auto it = paper.find(d); it != paper.end()) {
      ok = ok && std::abs(*ap.agreement - it->second.ap) <= 0.02;
      ok = ok && std::abs(*ndcg.agreement - it->second.ndcg) <= 0.02;
    }
    detail += (detail.empty() ? "" : "; ") + std::string("D=") + std::to_string(d) +
              " tse " + fmt("%.3f", *t.agreement) + " random " + fmt("%.3f", *coin.agreement) +
              " ap " + fmt("%.3f", *ap.agreement) + " ndcg " + fmt("%.3f", *ndcg.agreement);
    if (d == 1000) {
      const auto r = agreement_with_worst_case(pairs, MetricId::recall_at(1000));
      ok = ok && r.agreement && *r.agreement == 0.0;
      detail += " recall@1000 " + fmt("%.3f", r.agreement.value_or(NAN));
    }
  }
  return {ok, detail};
}

// Axiomatic metric properties.
Result ac6() {
  const std::pair<const char*, std::size_t (*)(std::uint64_t, int)> checks[] = {
      {"retrieval-size", property::monotone_in_retrieval_size},
      {"nonrelevance", property::nonrelevance_leaves_values_equal},
      {"relevance", property::strictly_increasing_in_relevance},
      {"swap-up", property::swap_up_never_hurts},
      {"concavity", property::concave_in_contiguous_swap_depth},
      {"preorder", property::lexirecall_total_preorder}};
  std::size_t total = 0;
  std::string detail;
  std::uint64_t seed = 9001;
  for (const auto& [name, check] : checks) {
    const auto v = check(seed++, property::kCases);
    total += v;
    detail += (detail.empty() ? "" : ", ") + std::string(name) + " " + std::to_string(v);
  }
  return {total == 0, "violations per property over " + std::to_string(property::kCases) +
                          " cases: " + detail};
}

// Exact metric lexirecall orders like lexirecall.
Result ac7() {
  const std::int64_t d = 12;
  const auto all = oracle::all_vectors(3, d);
  std::vector<mpq_class> score;
  for (const auto& v : all) score.push_back(metric_lexirecall(rp(v, d)));
  std::size_t pairs = 0, match = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < all.size(); ++j) {
      const int c = cmp(score[i], score[j]);
      const auto o = lexirecall_compare(all[i], all[j]).outcome;
      const int expected = o == Outcome::prefer_first ? 1 : o == Outcome::prefer_second ? -1 : 0;
      match += (c > 0) - (c < 0) == expected;
      ++pairs;
    }
  }
  return {match == pairs, std::to_string(match) + "/" + std::to_string(pairs) + " pairs agree"};
}

// Stochastic optimal ranker beats the deterministic one in the worst case.
Result ac8() {
  bool ok = true;
  std::string detail;
  for (const auto& [name, metric] :
       {std::pair{"ap", LevelMetric::ap()}, std::pair{"ndcg", LevelMetric::ndcg()}}) {
    detail += std::string(detail.empty() ? "" : "; ") + name + " gap";
    for (std::size_t m = 1; m <= 8; ++m) {
      const auto r = optimal_ranker_worst_case(metric, 30, m);
      const double gap = r.stochastic - r.deterministic;
      ok = ok && (m == 1 ? gap >= 0.0 : gap > 0.0);
      detail += " " + fmt("%.4f", gap);
    }
  }
  return {ok, detail};
}

// Orientation orderings.
Result ac9() {
  const std::int64_t d = 100000;
  const double tol = 1e-4;
  const std::vector<MetricId> precision_set{MetricId::rr(), MetricId::ndcg(), MetricId::ap(),
                                            MetricId::recall_at(1000), MetricId::rprecision()};
  const std::vector<MetricId> classical{MetricId::rr(),  MetricId::ndcg(),
                                        MetricId::ap(),  MetricId::rbp(0.8),
                                        MetricId::recall_at(1000), MetricId::rprecision()};
  std::size_t rr_top = 0, rr_zero = 0, shared = 0, tse_one = 0;
  for (std::int64_t m = 1; m <= 15; ++m) {
    double best_precision = -INFINITY;
    for (const auto& id : precision_set) {
      best_precision = std::max(best_precision, orientation(id, d, m).precision);
    }
    rr_top += orientation(MetricId::rr(), d, m).precision >= best_precision - tol;
    if (m >= 2) rr_zero += orientation(MetricId::rr(), d, m).recall == 0.0;
    double best_recall = -INFINITY;
    for (const auto& id : classical) best_recall = std::max(best_recall, orientation(id, d, m).recall);
    bool all_share = true;
    for (const auto& id : {MetricId::recall_at(1000), MetricId::ap(), MetricId::rprecision()}) {
      all_share = all_share && orientation(id, d, m).recall >= best_recall - tol;
    }
    shared += all_share;
    tse_one += std::abs(orientation(MetricId::tse(), d, m).recall - 1.0) <= 1e-12;
  }
  const bool ok = rr_top == 15 && rr_zero == 14 && shared == 15 && tse_one == 15;
  return {ok, "rr largest precision " + std::to_string(rr_top) + "/15, rr recall zero " +
                  std::to_string(rr_zero) + "/14, recall@1000/ap/rprecision share largest recall " +
                  std::to_string(shared) + "/15, scaled tse recall one " +
                  std::to_string(tse_one) + "/15 (tolerance 1e-4)"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// CLI smoke test against golden outputs.
Result ac10() {
  const fs::path fixtures = LEXIRANK_FIXTURES;
  const fs::path golden = fixtures / "golden";
  const std::string data = " --runs " + (fixtures / "run_a.run").string() + " --runs " +
                           (fixtures / "run_b.run").string() + " --runs " +
                           (fixtures / "run_c.run").string() + " --qrels " +
                           (fixtures / "synthetic.qrels").string() + " --corpus-size 100";
  const std::vector<std::pair<std::string, std::string>> commands{
      {"eval.tsv", "eval" + data + " --metric ap --metric ndcg --metric tse --metric recall@10"},
      {"compare_lexirecall.tsv", "compare" + data + " --method lexirecall --hsd"},
      {"compare_ap.json", "compare" + data + " --method metric:ap --format json"},
      {"degrade.tsv", "degrade" + data +
                          " --fraction 0 --fraction 0.25 --fraction 0.5 --method lexirecall"
                          " --method tse --method metric:ap --method metric:recall@10"
                          " --samples 5 --seed 7"}};
  const fs::path scratch = fs::temp_directory_path() /
                           ("lexirank_ac10_" + std::to_string(std::random_device{}()));
  fs::create_directories(scratch);
  std::size_t ok = 0;
  std::string problems;
  for (const auto& [name, args] : commands) {
    std::string outputs[2];
    bool ran = true;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = scratch / (std::to_string(rep) + "_" + name);
      const std::string cmd = std::string(LEXIRANK_CLI) + " " + args + " --out " +
                              out.string() + " 2>/dev/null";
      ran = ran && std::system(cmd.c_str()) == 0;
      outputs[rep] = slurp(out);
    }
    if (update_golden && ran) {
      fs::create_directories(golden);
      std::ofstream(golden / name, std::ios::binary) << outputs[0];
    }
    const bool same = ran && outputs[0] == outputs[1] && !outputs[0].empty() &&
                      outputs[0] == slurp(golden / name);
    if (same) ++ok;
    else problems += " " + name;
  }
  fs::remove_all(scratch);
  std::string detail = std::to_string(ok) + "/" + std::to_string(commands.size()) +
                       " outputs byte-identical to golden and across repeated runs";
  if (!problems.empty()) detail += " (differs:" + problems + ")";
  return {ok == commands.size(), detail};
}

struct Criterion {
  const char* id;
  Result (*run)();
  double budget_seconds;
};

const Criterion kCriteria[] = {
    {"AC1", ac1, 10}, {"AC2", ac2, 5},  {"AC3", ac3, 30},  {"AC4", ac4, 60},
    {"AC5", ac5, 60}, {"AC6", ac6, 60}, {"AC7", ac7, 60},  {"AC8", ac8, 60},
    {"AC9", ac9, 60}, {"AC10", ac10, 60}};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> wanted;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--update-golden") update_golden = true;
    else wanted.push_back(arg);
  }
  int failures = 0;
  for (const auto& c : kCriteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = r.pass && in_time;
    std::printf("%s %s %s [%.2f s of %.0f s]\n", pass ? "PASS" : "FAIL", c.id, r.detail.c_str(),
                secs, c.budget_seconds);
    std::fflush(stdout);
    failures += !pass;
  }
  return failures ? 1 : 0;
}
