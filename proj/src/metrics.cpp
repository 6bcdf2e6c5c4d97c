#include "lexirank/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "lexirank/combinations.hpp"

namespace lexirank {

namespace {

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", value);
  return buf;
}

void require_levels(std::span<const Position> positions) {
  if (positions.empty()) {
    throw UnevaluableRequest("metric needs at least one relevant item");
  }
}

}  // namespace

NormalizationModel NormalizationModel::parse(std::string_view text) {
  if (text == "ap") return ap();
  if (text == "rr") return rr();
  if (text == "ndcg") return ndcg();
  if (text == "rbp") return rbp();
  if (text == "esl3") return esl3();
  if (text == "uniform") return uniform();
  throw ValidationError("unknown normalization '" + std::string(text) + "'");
}

double ndcg_normalizer(std::size_t m) {
  if (m == 0) throw ValidationError("ndcg normalization requires m >= 1");
  double ideal = 0.0;
  for (std::size_t k = 1; k <= m; ++k) {
    ideal += 1.0 / std::log2(static_cast<double>(k) + 1.0);
  }
  return 1.0 / ideal;
}

double NormalizationModel::weight(std::size_t level, std::size_t m) const {
  if (m == 0 || level < 1 || level > m) {
    throw ValidationError("normalization needs 1 <= i <= m");
  }
  switch (kind_) {
    case Kind::ap:
      return static_cast<double>(level) / static_cast<double>(m);
    case Kind::rr:
      return level == 1 ? 1.0 : 0.0;
    case Kind::ndcg:
      return ndcg_normalizer(m);
    case Kind::rbp:
      return 1.0;
    case Kind::esl3:
      return level == m ? 1.0 : 0.0;
    case Kind::uniform:
      return 1.0 / static_cast<double>(m);
  }
  return 0.0;
}

std::string_view NormalizationModel::name() const noexcept {
  switch (kind_) {
    case Kind::ap: return "ap";
    case Kind::rr: return "rr";
    case Kind::ndcg: return "ndcg";
    case Kind::rbp: return "rbp";
    case Kind::esl3: return "esl3";
    case Kind::uniform: return "uniform";
  }
  return "?";
}

double recall_level_metric(std::span<const Position> positions,
                           const ExposureModel& exposure,
                           const NormalizationModel& normalization) {
  require_levels(positions);
  const auto m = positions.size();
  using K = NormalizationModel::Kind;
  switch (normalization.kind()) {
    case K::rr:
      return exposure.at(positions.front());
    case K::esl3:
      return exposure.at(positions.back());
    case K::ndcg: {
      double sum = 0.0;
      for (auto p : positions) sum += exposure.at(p);
      return sum * ndcg_normalizer(m);
    }
    default: {
      double sum = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        sum += exposure.at(positions[i]) * normalization.weight(i + 1, m);
      }
      return sum;
    }
  }
}

double recall_level_metric(const RelevantPositions& rp,
                           const ExposureModel& exposure,
                           const NormalizationModel& normalization) {
  return recall_level_metric(rp.positions(), exposure, normalization);
}

double LevelMetric::operator()(std::span<const Position> positions) const {
  return recall_level_metric(positions, exposure, normalization);
}

double LevelMetric::operator()(const RelevantPositions& rp) const {
  return recall_level_metric(rp.positions(), exposure, normalization);
}

std::string LevelMetric::name() const {
  return exposure.name() + "/" + std::string(normalization.name());
}

MetricId MetricId::rbp(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ValidationError("rbp requires gamma in (0,1)");
  }
  MetricId id(Kind::rbp);
  id.gamma_ = gamma;
  return id;
}

MetricId MetricId::recall_at(std::int64_t k) {
  if (k < 1) throw ValidationError("recall@k requires k >= 1");
  MetricId id(Kind::recall_at_k);
  id.cutoff_ = k;
  return id;
}

MetricId MetricId::tse(const ExposureModel& exposure) {
  MetricId id(Kind::tse);
  id.exposure_ = exposure;
  return id;
}

MetricId MetricId::metric_lexirecall(const mpq_class& epsilon) {
  if (!(epsilon > 0 && epsilon < 1)) {
    throw ValidationError("metric lexirecall requires epsilon in (0,1)");
  }
  MetricId id(Kind::metric_lexirecall);
  id.epsilon_ = epsilon;
  id.epsilon_.canonicalize();
  return id;
}

MetricId MetricId::parse(std::string_view text) {
  const auto colon = text.find(':');
  const auto head = text.substr(0, colon);
  const auto arg = colon == std::string_view::npos ? std::string_view{}
                                                   : text.substr(colon + 1);
  auto bad = [&] {
    return ValidationError("unknown metric '" + std::string(text) + "'");
  };
  if (head.starts_with("recall@")) {
    const auto digits = head.substr(7);
    std::int64_t k = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() ||
        !arg.empty()) {
      throw bad();
    }
    return recall_at(k);
  }
  if (head == "tse") {
    return arg.empty() ? tse() : tse(ExposureModel::parse(arg));
  }
  if (head == "rbp") {
    if (arg.empty()) return rbp();
    double gamma = 0.0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), gamma);
    if (ec != std::errc{} || ptr != arg.data() + arg.size()) throw bad();
    return rbp(gamma);
  }
  if (head == "metric_lexirecall") {
    if (arg.empty()) return metric_lexirecall();
    mpq_class eps;
    if (eps.set_str(std::string(arg), 10) != 0) throw bad();
    return metric_lexirecall(eps);
  }
  if (!arg.empty()) throw bad();
  if (head == "ap") return ap();
  if (head == "rr") return rr();
  if (head == "ndcg") return ndcg();
  if (head == "rprecision") return rprecision();
  if (head == "esl3") return esl3();
  if (head == "recall_error") return recall_error();
  throw bad();
}

bool MetricId::higher_is_better() const noexcept {
  return kind_ != Kind::esl3 && kind_ != Kind::recall_error;
}

std::optional<LevelMetric> MetricId::level_metric() const {
  switch (kind_) {
    case Kind::ap: return LevelMetric::ap();
    case Kind::rr: return LevelMetric::rr();
    case Kind::ndcg: return LevelMetric::ndcg();
    case Kind::rbp: return LevelMetric::rbp(gamma_);
    case Kind::tse: return LevelMetric::tse(exposure_);
    default: return std::nullopt;
  }
}

std::string MetricId::name() const {
  switch (kind_) {
    case Kind::ap: return "ap";
    case Kind::rr: return "rr";
    case Kind::ndcg: return "ndcg";
    case Kind::rbp: return "rbp:" + format_real(gamma_);
    case Kind::recall_at_k: return "recall@" + std::to_string(cutoff_);
    case Kind::rprecision: return "rprecision";
    case Kind::tse:
      return exposure_.kind() == ExposureModel::Kind::reciprocal
                 ? std::string("tse")
                 : "tse:" + exposure_.name();
    case Kind::esl3: return "esl3";
    case Kind::recall_error: return "recall_error";
    case Kind::metric_lexirecall:
      return "metric_lexirecall:" + epsilon_.get_str();
  }
  return "?";
}

bool operator==(const MetricId& a, const MetricId& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case MetricId::Kind::rbp: return a.gamma_ == b.gamma_;
    case MetricId::Kind::recall_at_k: return a.cutoff_ == b.cutoff_;
    case MetricId::Kind::tse: return a.exposure_ == b.exposure_;
    case MetricId::Kind::metric_lexirecall: return a.epsilon_ == b.epsilon_;
    default: return true;
  }
}

double recall_at(std::span<const Position> positions, std::int64_t k) {
  require_levels(positions);
  if (k < 1) throw ValidationError("recall@k requires k >= 1");
  const auto hits = std::upper_bound(positions.begin(), positions.end(), k) -
                    positions.begin();
  return static_cast<double>(hits) / static_cast<double>(positions.size());
}

double rprecision(std::span<const Position> positions) {
  return recall_at(positions, static_cast<std::int64_t>(positions.size()));
}

double esl3(std::span<const Position> positions) {
  require_levels(positions);
  return static_cast<double>(positions.back() -
                             static_cast<Position>(positions.size()));
}

double recall_error(std::span<const Position> positions) {
  require_levels(positions);
  // Integer sum keeps the ideal ranking at exactly zero.
  Position total = 0;
  for (auto p : positions) total += p;
  const auto m = static_cast<Position>(positions.size());
  const Position ideal = m * (m + 1) / 2;
  return static_cast<double>(total - ideal) / static_cast<double>(m);
}

double tse(const RelevantPositions& rp, const ExposureModel& exposure) {
  return exposure.at(rp.last());
}

double evaluate(const MetricId& metric, std::span<const Position> positions,
                std::int64_t corpus_size) {
  using K = MetricId::Kind;
  switch (metric.kind()) {
    case K::recall_at_k: return recall_at(positions, metric.cutoff());
    case K::rprecision: return rprecision(positions);
    case K::esl3: return esl3(positions);
    case K::recall_error: return recall_error(positions);
    case K::metric_lexirecall:
      return metric_lexirecall(positions, corpus_size, metric.epsilon()).get_d();
    default:
      return (*metric.level_metric())(positions);
  }
}

double evaluate(const MetricId& metric, const RelevantPositions& rp) {
  return evaluate(metric, rp.positions(), rp.corpus_size());
}

std::vector<mpq_class> metric_lexirecall_weights(std::size_t m,
                                                 std::int64_t corpus_size,
                                                 const mpq_class& epsilon) {
  if (m == 0) throw ValidationError("metric lexirecall needs m >= 1");
  if (!(epsilon > 0 && epsilon < 1)) {
    throw ValidationError("metric lexirecall requires epsilon in (0,1)");
  }
  // With delta = 1/(D+eps): delta/(1+delta) = 1/(D+eps+1) and
  // 1/(1+delta) = (D+eps)/(D+eps+1).
  const mpq_class d_eps = mpq_class(corpus_size) + epsilon;
  mpq_class ratio = 1 / (d_eps + 1);
  ratio.canonicalize();
  mpq_class keep = d_eps / (d_eps + 1);
  keep.canonicalize();

  std::vector<mpq_class> w(m);
  mpq_class power = 1;  // ratio^(m-i) walking i from m down to 2
  for (std::size_t i = m; i >= 2; --i) {
    w[i - 1] = power * keep;
    power *= ratio;
  }
  w[0] = power;  // ratio^(m-1)
  for (auto& x : w) x.canonicalize();
  return w;
}

mpq_class metric_lexirecall(std::span<const Position> positions,
                            std::int64_t corpus_size,
                            const mpq_class& epsilon) {
  require_levels(positions);
  const auto w = metric_lexirecall_weights(positions.size(), corpus_size, epsilon);
  mpq_class numerator = 0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    numerator += w[i] * mpq_class(corpus_size - positions[i]);
  }
  mpq_class score = numerator / corpus_size;
  score.canonicalize();
  return score;
}

mpq_class metric_lexirecall(const RelevantPositions& rp,
                            const mpq_class& epsilon) {
  return metric_lexirecall(rp.positions(), rp.corpus_size(), epsilon);
}

TopHeavyCheck is_top_heavy(const ExposureModel& exposure,
                           const NormalizationModel& normalization,
                           std::size_t m_max, std::int64_t corpus_size) {
  constexpr std::size_t kLevelCap = 12;
  constexpr double kVectorBudget = 2e7;
  TopHeavyCheck result;
  if (m_max > kLevelCap) {
    result.status = TopHeavyCheck::Status::truncated;
    return result;
  }
  const auto levels = std::min<std::int64_t>(static_cast<std::int64_t>(m_max),
                                             corpus_size);
  double vectors = 0.0;
  for (std::int64_t m = 1; m <= levels; ++m) {
    vectors += std::exp(std::lgamma(corpus_size + 1.0) - std::lgamma(m + 1.0) -
                        std::lgamma(corpus_size - m + 1.0));
  }
  if (vectors > kVectorBudget) {
    result.status = TopHeavyCheck::Status::truncated;
    return result;
  }

  for (std::int64_t m = 1; m <= levels; ++m) {
    const auto mu = static_cast<std::size_t>(m);
    bool violated = false;
    for_each_combination(mu, corpus_size, [&](const std::vector<Position>& x) {
      if (violated) return;
      const double full = recall_level_metric(x, exposure, normalization);
      const double slack = 1e-12 * std::max(1.0, std::abs(full));
      for (std::size_t j = 1; j < mu; ++j) {
        const std::span<const Position> tail(x.data() + j, mu - j);
        const double partial = recall_level_metric(tail, exposure, normalization);
        if (partial > full + slack) {
          violated = true;
          result.status = TopHeavyCheck::Status::violated;
          result.counterexample = x;
          result.j = j;
          return;
        }
      }
    });
    if (violated) return result;
  }
  return result;
}

}  // namespace lexirank
