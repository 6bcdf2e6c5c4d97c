#pragma once

// Domain types shared by every module: rankings, judgments, the projected
// vector of relevant positions, exposure models, and pairwise preferences.
//
// Positions are 1-based throughout. A RelevantPositions value is the sorted
// vector of rank positions of the m relevant items after projection (and,
// for partial rankings, imputation of the unretrieved items).

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lexirank {

using Position = std::int64_t;
using ItemId = std::string;

/// Raised when an input violates a documented precondition or invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for a request whose relevant set is empty; such requests carry no
/// recall information and are skipped by the pipelines.
class UnevaluableRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an exhaustive enumeration would exceed its hard cap.
class RefusalError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class RankedList {
 public:
  RankedList(std::string request_id, std::vector<ItemId> items,
             std::int64_t corpus_size, std::string system_tag = {});

  const std::string& request_id() const noexcept { return request_id_; }
  const std::vector<ItemId>& items() const noexcept { return items_; }
  std::int64_t corpus_size() const noexcept { return corpus_size_; }
  const std::string& system_tag() const noexcept { return system_tag_; }
  std::size_t depth() const noexcept { return items_.size(); }

 private:
  std::string request_id_;
  std::vector<ItemId> items_;
  std::int64_t corpus_size_;
  std::string system_tag_;
};

enum class JudgmentSource { binary, binarized_from_grades };

class JudgmentSet {
 public:
  JudgmentSet() = default;
  JudgmentSet(std::string request_id, std::set<ItemId> relevant,
              JudgmentSource source = JudgmentSource::binary);

  const std::string& request_id() const noexcept { return request_id_; }
  const std::set<ItemId>& relevant() const noexcept { return relevant_; }
  JudgmentSource source() const noexcept { return source_; }
  std::size_t size() const noexcept { return relevant_.size(); }
  bool empty() const noexcept { return relevant_.empty(); }
  bool contains(const ItemId& id) const { return relevant_.count(id) != 0; }

 private:
  std::string request_id_;
  std::set<ItemId> relevant_;
  JudgmentSource source_ = JudgmentSource::binary;
};

enum class Imputation { pessimistic, optimistic, none };

std::string_view to_string(Imputation mode) noexcept;
Imputation parse_imputation(std::string_view text);

class RelevantPositions {
 public:
  /// Checked constructor. `retrieved_count` relevant items were found in the
  /// ranking; the remaining ones were placed according to `imputation`.
  RelevantPositions(std::vector<Position> positions, std::int64_t corpus_size,
                    std::size_t retrieved_count, Imputation imputation,
                    std::vector<ItemId> ids_at_levels = {});

  /// A complete position vector (every relevant item ranked).
  static RelevantPositions from_positions(std::vector<Position> positions,
                                          std::int64_t corpus_size);

  /// Position vector of a request for which nothing was retrieved, under
  /// pessimistic imputation: (D-m+1, ..., D).
  static RelevantPositions all_unretrieved(std::size_t m,
                                           std::int64_t corpus_size);

  std::span<const Position> positions() const noexcept { return positions_; }
  std::size_t size() const noexcept { return positions_.size(); }
  /// 1-based recall level accessor.
  Position at_level(std::size_t level) const;
  Position last() const noexcept { return positions_.back(); }
  std::int64_t corpus_size() const noexcept { return corpus_size_; }
  std::size_t retrieved_count() const noexcept { return retrieved_count_; }
  Imputation imputation() const noexcept { return imputation_; }
  const std::vector<ItemId>& ids_at_levels() const noexcept {
    return ids_at_levels_;
  }

  friend bool operator==(const RelevantPositions& a,
                         const RelevantPositions& b) noexcept {
    return a.corpus_size_ == b.corpus_size_ && a.positions_ == b.positions_;
  }

 private:
  std::vector<Position> positions_;
  std::int64_t corpus_size_;
  std::size_t retrieved_count_;
  Imputation imputation_;
  std::vector<ItemId> ids_at_levels_;
};

/// Strictly decreasing, non-negative position discount.
class ExposureModel {
 public:
  enum class Kind { reciprocal, log2, geometric, linear };

  static ExposureModel reciprocal() noexcept { return {Kind::reciprocal, 0.0, 0}; }
  static ExposureModel log2() noexcept { return {Kind::log2, 0.0, 0}; }
  static ExposureModel geometric(double gamma);
  static ExposureModel linear(std::int64_t corpus_size);

  /// Accepts "reciprocal", "log2", "geometric:<gamma>", "linear:<D>".
  static ExposureModel parse(std::string_view text);

  double at(Position position) const;

  Kind kind() const noexcept { return kind_; }
  double gamma() const noexcept { return gamma_; }
  std::int64_t corpus_size() const noexcept { return corpus_size_; }
  std::string name() const;

  friend bool operator==(const ExposureModel&, const ExposureModel&) = default;

 private:
  ExposureModel(Kind kind, double gamma, std::int64_t corpus_size) noexcept
      : kind_(kind), gamma_(gamma), corpus_size_(corpus_size) {}

  Kind kind_;
  double gamma_;
  std::int64_t corpus_size_;
};

inline double exposure_at(const ExposureModel& model, Position position) {
  return model.at(position);
}

enum class Outcome { prefer_first, prefer_second, tie };

std::string_view to_string(Outcome outcome) noexcept;

/// Three-valued comparison. `deciding_level` is the 1-based recall level at
/// which the decision was made and is present iff the outcome is not a tie.
struct Preference {
  Outcome outcome = Outcome::tie;
  std::optional<std::size_t> deciding_level;

  static Preference tie() noexcept { return {}; }
  static Preference first(std::size_t level) noexcept {
    return {Outcome::prefer_first, level};
  }
  static Preference second(std::size_t level) noexcept {
    return {Outcome::prefer_second, level};
  }

  bool is_tie() const noexcept { return outcome == Outcome::tie; }
  Preference flipped() const noexcept;

  friend bool operator==(const Preference&, const Preference&) = default;
};

/// Projects a ranking onto the positions of its relevant items and imputes
/// positions for the relevant items the ranking did not retrieve.
RelevantPositions project_and_impute(const RankedList& ranking,
                                     const JudgmentSet& judgments,
                                     Imputation mode = Imputation::pessimistic);

/// Run: one system's rankings keyed by request id.
struct Run {
  std::string tag;
  std::map<std::string, RankedList> rankings;
};

using JudgmentMap = std::map<std::string, JudgmentSet>;

/// Positions of every run for every evaluable request, in (request, run)
/// order. A run missing a request is scored as the empty ranking under
/// pessimistic imputation.
struct ProjectedRuns {
  std::vector<std::string> requests;
  std::vector<std::string> run_tags;
  /// positions[request][run]
  std::vector<std::vector<RelevantPositions>> positions;
  /// Requests present in some run but absent from the judgments.
  std::size_t unjudged_requests = 0;
  /// Judged requests with an empty relevant set.
  std::size_t unevaluable_requests = 0;
  /// (request, run) cells filled by the empty ranking.
  std::size_t missing_cells = 0;
};

ProjectedRuns project_runs(std::span<const Run> runs,
                           const JudgmentMap& judgments,
                           std::int64_t corpus_size,
                           Imputation mode = Imputation::pessimistic);

}  // namespace lexirank
