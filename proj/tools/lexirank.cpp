// lexirank: evaluate and compare rankings with recall-oriented methods.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lexirank/analytics.hpp"
#include "lexirank/core.hpp"
#include "lexirank/io.hpp"
#include "lexirank/metrics.hpp"
#include "lexirank/prefs.hpp"
#include "lexirank/stats.hpp"

namespace {

using namespace lexirank;

struct OutputOptions {
  std::string out;
  std::string format = "tsv";

  void emit(const Table& table) const {
    const auto fmt = parse_table_format(format);
    if (out.empty() || out == "-") {
      write_table(table, fmt, std::cout);
    } else {
      write_table(table, fmt, std::filesystem::path(out));
    }
  }
};

void add_output_flags(CLI::App* cmd, OutputOptions& o) {
  cmd->add_option("--out", o.out, "Output path (default: stdout)");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"tsv", "json"}))
      ->capture_default_str();
}

struct DataOptions {
  std::vector<std::string> runs;
  std::string qrels;
  std::string ratings;
  std::int64_t corpus_size = 0;
  int qrels_threshold = 1;
  double rating_threshold = 4.0;
  std::string imputation = "pessimistic";
};

void add_data_flags(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("--runs", d.runs, "TREC run file (repeatable)")->required();
  auto* qrels = cmd->add_option("--qrels", d.qrels, "TREC qrels file");
  auto* ratings = cmd->add_option("--ratings", d.ratings,
                                  "user,item,rating CSV used as judgments");
  qrels->excludes(ratings);
  cmd->add_option("--corpus-size", d.corpus_size, "Corpus size D")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--qrels-threshold", d.qrels_threshold,
                  "Minimum qrels grade counted as relevant")
      ->capture_default_str();
  cmd->add_option("--rating-threshold", d.rating_threshold,
                  "Minimum rating counted as relevant")
      ->capture_default_str();
  cmd->add_option("--imputation", d.imputation,
                  "Placement of unretrieved relevant items")
      ->check(CLI::IsMember({"pessimistic", "optimistic"}))
      ->capture_default_str();
}

void warn(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

struct Loaded {
  std::vector<Run> runs;  // sorted by tag
  JudgmentMap judgments;
  ProjectedRuns projected;
};

Loaded load(const DataOptions& d) {
  if (d.qrels.empty() && d.ratings.empty()) {
    throw ValidationError("one of --qrels or --ratings is required");
  }
  Loaded out;
  std::map<std::string, int> tag_count;
  for (const auto& path : d.runs) {
    auto file = parse_run_file(path, d.corpus_size);
    for (const auto& w : file.warnings) warn(w);
    auto& run = file.run;
    if (run.tag.empty()) run.tag = std::filesystem::path(path).filename().string();
    if (const int seen = ++tag_count[run.tag]; seen > 1) {
      const auto renamed = run.tag + "#" + std::to_string(seen);
      warn("duplicate run tag '" + run.tag + "' from " + path + " renamed to '" +
           renamed + "'");
      run.tag = renamed;
    }
    out.runs.push_back(std::move(run));
  }
  std::sort(out.runs.begin(), out.runs.end(),
            [](const Run& a, const Run& b) { return a.tag < b.tag; });

  auto judged = d.qrels.empty() ? parse_ratings_csv(d.ratings, d.rating_threshold)
                                : parse_qrels(d.qrels, d.qrels_threshold);
  for (const auto& w : judged.warnings) warn(w);
  out.judgments = std::move(judged.judgments);
  out.projected = project_runs(out.runs, out.judgments, d.corpus_size,
                               parse_imputation(d.imputation));
  const auto& p = out.projected;
  if (p.unjudged_requests) {
    warn(std::to_string(p.unjudged_requests) +
         " ranked request(s) have no judgments and were skipped");
  }
  if (p.unevaluable_requests) {
    warn(std::to_string(p.unevaluable_requests) +
         " judged request(s) have no relevant items and were skipped");
  }
  if (p.missing_cells) {
    warn(std::to_string(p.missing_cells) +
         " (request, run) cell(s) missing from runs were scored as empty rankings");
  }
  if (p.requests.empty()) throw ValidationError("no evaluable requests");
  return out;
}

std::vector<MetricId> parse_metrics(const std::vector<std::string>& names) {
  std::vector<MetricId> metrics;
  for (const auto& n : names) metrics.push_back(MetricId::parse(n));
  return metrics;
}

// eval ------------------------------------------------------------------

struct EvalOptions {
  DataOptions data;
  OutputOptions output;
  std::vector<std::string> metrics{"ap"};
};

void run_eval(const EvalOptions& o) {
  const auto metrics = parse_metrics(o.metrics);
  const auto loaded = load(o.data);
  const auto& p = loaded.projected;
  Table table{{"request_id", "run", "metric", "value"}, {}};
  for (std::size_t q = 0; q < p.requests.size(); ++q) {
    for (std::size_t r = 0; r < p.run_tags.size(); ++r) {
      for (const auto& metric : metrics) {
        table.add_row({p.requests[q], p.run_tags[r], metric.name(),
                       evaluate(metric, p.positions[q][r])});
      }
    }
  }
  o.output.emit(table);
  std::cerr << "evaluated " << p.requests.size() << " request(s) x "
            << p.run_tags.size() << " run(s)\n";
}

// compare ---------------------------------------------------------------

struct CompareOptions {
  DataOptions data;
  OutputOptions output;
  std::string method = "lexirecall";
  double tolerance = kDefaultTolerance;
  double alpha = 0.05;
  bool hsd = false;
};

void run_compare(const CompareOptions& o) {
  const auto method = ComparisonMethod::parse(o.method);
  const auto loaded = load(o.data);
  const auto& p = loaded.projected;
  const auto n_runs = p.run_tags.size();
  if (n_runs < 2) throw ValidationError("compare needs at least two runs");
  const auto n = p.requests.size();

  const auto tally = preference_tally(p, method, o.tolerance);
  std::optional<ScoreMatrix> scores;
  if (!method.is_preference()) scores = score_matrix(p, method.metric_id());

  struct PairRow {
    std::size_t a, b;
    std::optional<double> p;
  };
  std::vector<PairRow> pairs;
  for (std::size_t a = 0; a < n_runs; ++a) {
    for (std::size_t b = a + 1; b < n_runs; ++b) {
      PairRow row{a, b, std::nullopt};
      if (scores) {
        if (n >= 2) row.p = paired_t_test(scores->values[a], scores->values[b]).p;
      } else {
        row.p = binomial_sign_test(tally.wins[a][b], tally.wins[b][a], tally.ties[a][b]).p;
      }
      pairs.push_back(row);
    }
  }
  std::vector<double> raw;
  for (const auto& r : pairs) raw.push_back(r.p.value_or(1.0));
  const auto adjusted = holm_bonferroni(raw);

  std::optional<HsdResult> hsd;
  if (o.hsd) {
    if (n < 2) throw ValidationError("--hsd needs at least two requests");
    hsd = tukey_hsd(scores ? *scores : preference_scores(p, method, o.tolerance));
    if (hsd->degenerate) warn("zero residual variance; HSD p-values are degenerate");
  }

  std::vector<std::string> columns{"method", "run_a", "run_b", "wins_a", "wins_b",
                                   "ties", "win_rate_a", "test", "p_value", "p_holm",
                                   "significant"};
  if (hsd) columns.push_back("p_hsd");
  Table table{columns, {}};
  std::size_t significant = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [a, b, pv] = pairs[i];
    const auto wins_a = tally.wins[a][b];
    const auto wins_b = tally.wins[b][a];
    const auto ties = tally.ties[a][b];
    const double win_rate =
        (static_cast<double>(wins_a) + 0.5 * static_cast<double>(ties)) /
        static_cast<double>(n);
    const bool sig = pv.has_value() && adjusted[i] < o.alpha;
    significant += sig;
    std::vector<Cell> row{method.name(),
                          p.run_tags[a],
                          p.run_tags[b],
                          static_cast<std::int64_t>(wins_a),
                          static_cast<std::int64_t>(wins_b),
                          static_cast<std::int64_t>(ties),
                          win_rate,
                          std::string(scores ? "t" : "binomial"),
                          pv ? Cell{*pv} : Cell{},
                          pv ? Cell{adjusted[i]} : Cell{},
                          static_cast<std::int64_t>(sig)};
    if (hsd) row.emplace_back(hsd->p[a][b]);
    table.add_row(std::move(row));
  }
  o.output.emit(table);
  std::cerr << "discriminative power (" << method.name() << ", alpha " << o.alpha
            << "): " << significant << "/" << pairs.size() << " run pairs\n";
}

// ties ------------------------------------------------------------------

struct TiesOptions {
  OutputOptions output;
  std::string mode = "analytic";
  std::vector<std::int64_t> corpus_sizes{1000, 10000, 100000, 1000000};
  std::vector<std::int64_t> ms{10};
  std::int64_t cutoff = 1000;
  std::size_t pairs = 10000;
  std::uint64_t seed = 0;
  bool exact = false;
};

void run_ties(const TiesOptions& o) {
  const std::vector<std::pair<TieMetric, std::string>> metrics{
      {TieMetric::tse, "tse"},
      {TieMetric::recall_at_k, "recall@" + std::to_string(o.cutoff)},
      {TieMetric::rprecision, "rprecision"},
      {TieMetric::lexirecall, "lexirecall"}};
  const bool analytic = o.mode == "analytic";
  std::vector<std::string> columns{"corpus_size", "m", "metric", "probability"};
  if (analytic && o.exact) columns.push_back("exact");
  if (!analytic) columns.push_back("pairs");
  Table table{columns, {}};
  for (auto d : o.corpus_sizes) {
    for (auto m : o.ms) {
      for (const auto& [metric, name] : metrics) {
        std::vector<Cell> row{d, m, name};
        if (analytic) {
          const auto prob = tie_probability(metric, d, m, o.cutoff);
          row.emplace_back(prob.float_view);
          if (o.exact) row.emplace_back(prob.value().get_str());
        } else {
          row.emplace_back(empirical_tie_fraction(metric, d, m, o.cutoff, o.pairs, o.seed));
          row.emplace_back(static_cast<std::int64_t>(o.pairs));
        }
        table.add_row(std::move(row));
      }
    }
  }
  o.output.emit(table);
}

// simulate-agreement ----------------------------------------------------

struct SimulateOptions {
  OutputOptions output;
  std::vector<std::int64_t> corpus_sizes{1000, 10000, 100000, 1000000};
  std::size_t pairs = 10000;
  std::int64_t m_lo = 5;
  std::int64_t m_hi = 50;
  std::optional<std::int64_t> depth;
  std::uint64_t seed = 0;
  double tolerance = kDefaultTolerance;
  std::vector<std::string> metrics{"ap", "ndcg", "recall@1000", "rprecision", "tse"};
};

void run_simulate(const SimulateOptions& o) {
  const auto metrics = parse_metrics(o.metrics);
  Table table{{"corpus_size", "metric", "agreement", "tied_fraction", "strict_pairs"}, {}};
  for (auto d : o.corpus_sizes) {
    SimulationConfig config;
    config.corpus_size = d;
    config.m_lo = o.m_lo;
    config.m_hi = o.m_hi;
    config.pair_count = o.pairs;
    config.depth = o.depth;
    config.seed = o.seed;
    const auto pairs = simulate_pairs(config);
    auto add = [&](const std::string& name, const Agreement& a) {
      table.add_row({d, name, a.agreement ? Cell{*a.agreement} : Cell{}, a.tied_fraction,
                     static_cast<std::int64_t>(a.strict_pairs)});
    };
    for (const auto& metric : metrics) {
      add(metric.name(), agreement_with_worst_case(pairs, metric, o.tolerance));
    }
    add("random", random_agreement(pairs, o.seed));
  }
  o.output.emit(table);
}

// orientation -----------------------------------------------------------

struct OrientationOptions {
  OutputOptions output;
  std::int64_t corpus_size = 100000;
  std::int64_t m_lo = 1;
  std::int64_t m_hi = 15;
  std::vector<std::string> metrics{"rr", "ndcg", "ap", "rbp:0.8", "recall@1000",
                                   "rprecision", "tse"};
};

void run_orientation(const OrientationOptions& o) {
  const auto metrics = parse_metrics(o.metrics);
  if (o.m_lo < 1 || o.m_hi < o.m_lo) throw ValidationError("need 1 <= m-lo <= m-hi");
  Table table{{"metric", "m", "precision_orientation", "recall_orientation"}, {}};
  for (const auto& metric : metrics) {
    for (auto m = o.m_lo; m <= o.m_hi; ++m) {
      const auto r = orientation(metric, o.corpus_size, m);
      table.add_row({metric.name(), m, r.precision, r.recall});
    }
  }
  o.output.emit(table);
}

// degrade ---------------------------------------------------------------

struct DegradeOptions {
  DataOptions data;
  OutputOptions output;
  std::vector<double> fractions{0.0, 0.25, 0.5, 0.75};
  std::vector<std::string> methods{"lexirecall", "tse", "metric:ap", "metric:recall@1000"};
  std::size_t samples = 10;
  std::uint64_t seed = 0;
  double tolerance = kDefaultTolerance;
};

void run_degrade(const DegradeOptions& o) {
  std::vector<ComparisonMethod> methods;
  for (const auto& m : o.methods) methods.push_back(ComparisonMethod::parse(m));
  const auto loaded = load(o.data);
  const auto rows = degradation_study(loaded.runs, loaded.judgments,
                                      o.data.corpus_size, o.fractions, methods,
                                      o.samples, o.seed, o.tolerance,
                                      parse_imputation(o.data.imputation));
  Table table{{"fraction", "method", "tie_fraction", "agreement"}, {}};
  for (const auto& r : rows) {
    table.add_row({r.fraction, r.method, r.tie_fraction,
                   r.agreement ? Cell{*r.agreement} : Cell{}});
  }
  o.output.emit(table);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recall-oriented ranking evaluation"};
  app.require_subcommand(1);

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Per-request metric values");
  add_data_flags(eval_cmd, eval.data);
  add_output_flags(eval_cmd, eval.output);
  eval_cmd->add_option("--metric", eval.metrics, "Metric id (repeatable)")
      ->capture_default_str();

  CompareOptions compare;
  auto* compare_cmd = app.add_subcommand("compare", "Pairwise run comparison with significance");
  add_data_flags(compare_cmd, compare.data);
  add_output_flags(compare_cmd, compare.output);
  compare_cmd->add_option("--method", compare.method,
                          "lexirecall, tse[:exposure] or metric:<id>")
      ->capture_default_str();
  compare_cmd->add_option("--tolerance", compare.tolerance, "Metric tie tolerance")
      ->capture_default_str();
  compare_cmd->add_option("--alpha", compare.alpha, "Significance level")
      ->capture_default_str();
  compare_cmd->add_flag("--hsd", compare.hsd, "Add Tukey HSD p-values");

  TiesOptions ties;
  auto* ties_cmd = app.add_subcommand("ties", "Tie probabilities of random ranking pairs");
  add_output_flags(ties_cmd, ties.output);
  ties_cmd->add_option("--mode", ties.mode)
      ->check(CLI::IsMember({"analytic", "empirical"}))
      ->capture_default_str();
  ties_cmd->add_option("--corpus-size", ties.corpus_sizes, "Corpus size D (repeatable)")
      ->capture_default_str();
  ties_cmd->add_option("--m", ties.ms, "Number of relevant items (repeatable)")
      ->capture_default_str();
  ties_cmd->add_option("--depth", ties.cutoff, "Recall cutoff k")->capture_default_str();
  ties_cmd->add_option("--pairs", ties.pairs, "Sampled pairs (empirical mode)")
      ->capture_default_str();
  ties_cmd->add_option("--seed", ties.seed)->capture_default_str();
  ties_cmd->add_flag("--exact", ties.exact, "Add the exact fraction (analytic mode)");

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate-agreement",
                                     "Agreement of metrics with the worst-case order");
  add_output_flags(sim_cmd, sim.output);
  sim_cmd->add_option("--corpus-size", sim.corpus_sizes, "Corpus size D (repeatable)")
      ->capture_default_str();
  sim_cmd->add_option("--pairs", sim.pairs)->capture_default_str();
  sim_cmd->add_option("--m-lo", sim.m_lo)->capture_default_str();
  sim_cmd->add_option("--m-hi", sim.m_hi)->capture_default_str();
  sim_cmd->add_option("--depth", sim.depth, "Truncate rankings at depth k");
  sim_cmd->add_option("--seed", sim.seed)->capture_default_str();
  sim_cmd->add_option("--tolerance", sim.tolerance)->capture_default_str();
  sim_cmd->add_option("--metric", sim.metrics, "Metric id (repeatable)")
      ->capture_default_str();

  OrientationOptions orient;
  auto* orient_cmd = app.add_subcommand("orientation", "Precision and recall orientation");
  add_output_flags(orient_cmd, orient.output);
  orient_cmd->add_option("--corpus-size", orient.corpus_size)->capture_default_str();
  orient_cmd->add_option("--m-lo", orient.m_lo)->capture_default_str();
  orient_cmd->add_option("--m-hi", orient.m_hi)->capture_default_str();
  orient_cmd->add_option("--metric", orient.metrics, "Metric id (repeatable)")
      ->capture_default_str();

  DegradeOptions degrade;
  auto* degrade_cmd = app.add_subcommand("degrade", "Preference stability under label removal");
  add_data_flags(degrade_cmd, degrade.data);
  add_output_flags(degrade_cmd, degrade.output);
  degrade_cmd->add_option("--fraction", degrade.fractions, "Removed fraction (repeatable)")
      ->capture_default_str();
  degrade_cmd->add_option("--method", degrade.methods, "Comparison method (repeatable)")
      ->capture_default_str();
  degrade_cmd->add_option("--samples", degrade.samples)->capture_default_str();
  degrade_cmd->add_option("--seed", degrade.seed)->capture_default_str();
  degrade_cmd->add_option("--tolerance", degrade.tolerance)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*eval_cmd) run_eval(eval);
    else if (*compare_cmd) run_compare(compare);
    else if (*ties_cmd) run_ties(ties);
    else if (*sim_cmd) run_simulate(sim);
    else if (*orient_cmd) run_orientation(orient);
    else if (*degrade_cmd) run_degrade(degrade);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
