#include "lexirank/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "lexirank/parallel.hpp"

namespace lexirank {

RankedList::RankedList(std::string request_id, std::vector<ItemId> items,
                       std::int64_t corpus_size, std::string system_tag)
    : request_id_(std::move(request_id)),
      items_(std::move(items)),
      corpus_size_(corpus_size),
      system_tag_(std::move(system_tag)) {
  if (corpus_size_ < 1) {
    throw ValidationError("corpus size must be positive");
  }
  if (items_.empty()) {
    throw ValidationError("ranking for request '" + request_id_ +
                          "' is empty");
  }
  if (static_cast<std::int64_t>(items_.size()) > corpus_size_) {
    throw ValidationError("ranking for request '" + request_id_ + "' has " +
                          std::to_string(items_.size()) +
                          " items but corpus size is " +
                          std::to_string(corpus_size_));
  }
  std::unordered_set<std::string_view> seen;
  seen.reserve(items_.size());
  for (const auto& id : items_) {
    if (!seen.insert(id).second) {
      throw ValidationError("duplicate item '" + id + "' in ranking for '" +
                            request_id_ + "'");
    }
  }
}

JudgmentSet::JudgmentSet(std::string request_id, std::set<ItemId> relevant,
                         JudgmentSource source)
    : request_id_(std::move(request_id)),
      relevant_(std::move(relevant)),
      source_(source) {}

std::string_view to_string(Imputation mode) noexcept {
  switch (mode) {
    case Imputation::pessimistic: return "pessimistic";
    case Imputation::optimistic: return "optimistic";
    case Imputation::none: return "none";
  }
  return "?";
}

Imputation parse_imputation(std::string_view text) {
  if (text == "pessimistic") return Imputation::pessimistic;
  if (text == "optimistic") return Imputation::optimistic;
  if (text == "none") return Imputation::none;
  throw ValidationError("unknown imputation mode '" + std::string(text) + "'");
}

RelevantPositions::RelevantPositions(std::vector<Position> positions,
                                     std::int64_t corpus_size,
                                     std::size_t retrieved_count,
                                     Imputation imputation,
                                     std::vector<ItemId> ids_at_levels)
    : positions_(std::move(positions)),
      corpus_size_(corpus_size),
      retrieved_count_(retrieved_count),
      imputation_(imputation),
      ids_at_levels_(std::move(ids_at_levels)) {
  if (positions_.empty()) {
    throw UnevaluableRequest("relevant position vector is empty");
  }
  if (corpus_size_ < 1) throw ValidationError("corpus size must be positive");
  if (static_cast<std::int64_t>(positions_.size()) > corpus_size_) {
    throw ValidationError("more relevant items than corpus positions");
  }
  if (positions_.front() < 1) {
    throw ValidationError("positions are 1-based");
  }
  for (std::size_t i = 1; i < positions_.size(); ++i) {
    if (positions_[i] <= positions_[i - 1]) {
      throw ValidationError("positions must be strictly increasing");
    }
  }
  if (positions_.back() > corpus_size_) {
    throw ValidationError("position exceeds corpus size");
  }
  if (retrieved_count_ > positions_.size()) {
    throw ValidationError("retrieved count exceeds number of relevant items");
  }
  if (!ids_at_levels_.empty() && ids_at_levels_.size() != positions_.size()) {
    throw ValidationError("ids_at_levels must align with positions");
  }
  if (imputation_ == Imputation::pessimistic) {
    const auto missing = static_cast<std::int64_t>(positions_.size() -
                                                   retrieved_count_);
    for (std::int64_t j = 0; j < missing; ++j) {
      const auto level = retrieved_count_ + static_cast<std::size_t>(j);
      if (positions_[level] != corpus_size_ - missing + 1 + j) {
        throw ValidationError(
            "pessimistic imputation must occupy the bottom positions");
      }
    }
  }
}

RelevantPositions RelevantPositions::from_positions(
    std::vector<Position> positions, std::int64_t corpus_size) {
  const auto m = positions.size();
  return {std::move(positions), corpus_size, m, Imputation::none};
}

RelevantPositions RelevantPositions::all_unretrieved(std::size_t m,
                                                     std::int64_t corpus_size) {
  if (m == 0) throw UnevaluableRequest("no relevant items");
  if (static_cast<std::int64_t>(m) > corpus_size) {
    throw ValidationError("more relevant items than corpus positions");
  }
  std::vector<Position> positions(m);
  for (std::size_t i = 0; i < m; ++i) {
    positions[i] = corpus_size - static_cast<std::int64_t>(m) + 1 +
                   static_cast<std::int64_t>(i);
  }
  return {std::move(positions), corpus_size, 0, Imputation::pessimistic};
}

Position RelevantPositions::at_level(std::size_t level) const {
  if (level < 1 || level > positions_.size()) {
    throw ValidationError("recall level out of range");
  }
  return positions_[level - 1];
}

ExposureModel ExposureModel::geometric(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ValidationError("geometric exposure requires gamma in (0,1)");
  }
  return {Kind::geometric, gamma, 0};
}

ExposureModel ExposureModel::linear(std::int64_t corpus_size) {
  if (corpus_size < 1) {
    throw ValidationError("linear exposure requires a positive corpus size");
  }
  return {Kind::linear, 0.0, corpus_size};
}

namespace {

double parse_double(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ValidationError("cannot parse " + std::string(what) + " from '" +
                          std::string(text) + "'");
  }
  return value;
}

std::int64_t parse_int(std::string_view text, std::string_view what) {
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ValidationError("cannot parse " + std::string(what) + " from '" +
                          std::string(text) + "'");
  }
  return value;
}

}  // namespace

ExposureModel ExposureModel::parse(std::string_view text) {
  const auto colon = text.find(':');
  const auto head = text.substr(0, colon);
  const auto arg = colon == std::string_view::npos ? std::string_view{}
                                                   : text.substr(colon + 1);
  if (head == "reciprocal" && arg.empty()) return reciprocal();
  if (head == "log2" && arg.empty()) return log2();
  if (head == "geometric") {
    return geometric(arg.empty() ? 0.8 : parse_double(arg, "gamma"));
  }
  if (head == "linear" && !arg.empty()) {
    return linear(parse_int(arg, "corpus size"));
  }
  throw ValidationError("unknown exposure model '" + std::string(text) + "'");
}

double ExposureModel::at(Position position) const {
  if (position < 1) {
    throw ValidationError("exposure is defined for positions >= 1");
  }
  const auto i = static_cast<double>(position);
  switch (kind_) {
    case Kind::reciprocal:
      return 1.0 / i;
    case Kind::log2:
      return 1.0 / std::log2(i + 1.0);
    case Kind::geometric:
      return (1.0 - gamma_) * std::pow(gamma_, i - 1.0);
    case Kind::linear:
      if (position > corpus_size_) {
        throw ValidationError("linear exposure position exceeds corpus size");
      }
      return 1.0 - i / static_cast<double>(corpus_size_);
  }
  return 0.0;
}

std::string ExposureModel::name() const {
  switch (kind_) {
    case Kind::reciprocal: return "reciprocal";
    case Kind::log2: return "log2";
    case Kind::geometric: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "geometric:%g", gamma_);
      return buf;
    }
    case Kind::linear: return "linear:" + std::to_string(corpus_size_);
  }
  return "?";
}

std::string_view to_string(Outcome outcome) noexcept {
  switch (outcome) {
    case Outcome::prefer_first: return "first";
    case Outcome::prefer_second: return "second";
    case Outcome::tie: return "tie";
  }
  return "?";
}

Preference Preference::flipped() const noexcept {
  switch (outcome) {
    case Outcome::prefer_first: return {Outcome::prefer_second, deciding_level};
    case Outcome::prefer_second: return {Outcome::prefer_first, deciding_level};
    case Outcome::tie: return *this;
  }
  return *this;
}

RelevantPositions project_and_impute(const RankedList& ranking,
                                     const JudgmentSet& judgments,
                                     Imputation mode) {
  if (judgments.empty()) {
    throw UnevaluableRequest("request '" + ranking.request_id() +
                             "' has no relevant items");
  }
  const auto corpus = ranking.corpus_size();
  const auto m = judgments.size();
  const auto k = static_cast<std::int64_t>(ranking.depth());
  if (static_cast<std::int64_t>(m) > corpus) {
    throw ValidationError("request '" + ranking.request_id() + "' has " +
                          std::to_string(m) +
                          " relevant items but corpus size is " +
                          std::to_string(corpus));
  }

  std::vector<Position> positions;
  std::vector<ItemId> ids;
  positions.reserve(m);
  ids.reserve(m);
  const auto& items = ranking.items();
  for (std::size_t r = 0; r < items.size(); ++r) {
    if (judgments.contains(items[r])) {
      positions.push_back(static_cast<Position>(r + 1));
      ids.push_back(items[r]);
    }
  }
  const auto retrieved = positions.size();
  const auto missing = static_cast<std::int64_t>(m - retrieved);
  if (missing > 0) {
    // Unretrieved ids in id order; the imputed positions are exchangeable.
    std::vector<ItemId> absent;
    absent.reserve(static_cast<std::size_t>(missing));
    std::unordered_set<std::string_view> found(ids.begin(), ids.end());
    for (const auto& id : judgments.relevant()) {
      if (!found.count(id)) absent.push_back(id);
    }
    switch (mode) {
      case Imputation::pessimistic:
        if (missing > corpus - k) {
          throw ValidationError("cannot impute " + std::to_string(missing) +
                                " unretrieved items below depth " +
                                std::to_string(k));
        }
        for (std::int64_t j = 0; j < missing; ++j) {
          positions.push_back(corpus - missing + 1 + j);
        }
        break;
      case Imputation::optimistic:
        if (k + missing > corpus) {
          throw ValidationError("cannot impute unretrieved items below depth");
        }
        for (std::int64_t j = 0; j < missing; ++j) {
          positions.push_back(k + 1 + j);
        }
        break;
      case Imputation::none:
        throw ValidationError("request '" + ranking.request_id() +
                              "' has unretrieved relevant items and "
                              "imputation is disabled");
    }
    ids.insert(ids.end(), absent.begin(), absent.end());
  }
  return {std::move(positions), corpus, retrieved, mode, std::move(ids)};
}

ProjectedRuns project_runs(std::span<const Run> runs,
                           const JudgmentMap& judgments,
                           std::int64_t corpus_size, Imputation mode) {
  ProjectedRuns out;
  out.run_tags.reserve(runs.size());
  for (const auto& run : runs) out.run_tags.push_back(run.tag);

  std::set<std::string> ranked_requests;
  for (const auto& run : runs) {
    for (const auto& [request, _] : run.rankings) ranked_requests.insert(request);
  }
  for (const auto& request : ranked_requests) {
    if (!judgments.count(request)) ++out.unjudged_requests;
  }
  for (const auto& [request, judged] : judgments) {
    if (judged.empty()) {
      ++out.unevaluable_requests;
      continue;
    }
    out.requests.push_back(request);
  }

  const auto n_requests = out.requests.size();
  const auto n_runs = runs.size();
  out.positions.resize(n_requests);
  std::vector<std::size_t> missing(n_requests, 0);

  // First exception wins; rethrown after the parallel region.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8) num_threads(thread_count())
  for (std::size_t q = 0; q < n_requests; ++q) {
    try {
      const auto& judged = judgments.at(out.requests[q]);
      auto& row = out.positions[q];
      row.reserve(n_runs);
      for (const auto& run : runs) {
        const auto it = run.rankings.find(out.requests[q]);
        if (it == run.rankings.end()) {
          row.push_back(RelevantPositions::all_unretrieved(judged.size(),
                                                           corpus_size));
          ++missing[q];
        } else {
          row.push_back(project_and_impute(it->second, judged, mode));
        }
      }
    } catch (...) {
#pragma omp critical(lexirank_project_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  for (auto c : missing) out.missing_cells += c;
  return out;
}

}  // namespace lexirank
