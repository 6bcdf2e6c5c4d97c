#pragma once

// Brute-force populations of possible users and providers. A user (or
// provider) is a non-empty subset of the m relevant items, identified here by
// the recall levels of those items in the ranking under evaluation.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lexirank/core.hpp"
#include "lexirank/metrics.hpp"
#include "lexirank/prefs.hpp"

namespace lexirank {

inline constexpr std::size_t kMaxPopulationLevels = 20;
inline constexpr std::size_t kMaxArrangementLevels = 8;

class UserSubset {
 public:
  /// `levels` are 1-based recall levels within [1..m].
  UserSubset(std::vector<std::size_t> levels, std::size_t m);

  /// Bit i-1 of `mask` selects level i.
  static UserSubset from_mask(std::uint32_t mask, std::size_t m);

  const std::vector<std::size_t>& levels() const noexcept { return levels_; }
  std::uint32_t mask() const noexcept { return mask_; }
  std::size_t size() const noexcept { return levels_.size(); }

  friend bool operator==(const UserSubset& a, const UserSubset& b) noexcept {
    return a.mask_ == b.mask_;
  }

 private:
  UserSubset() = default;
  std::vector<std::size_t> levels_;
  std::uint32_t mask_ = 0;
};

using ProviderSubset = UserSubset;

/// All 2^m - 1 non-empty subsets in increasing bitmask order.
std::vector<UserSubset> enumerate_users(std::size_t m);

/// The metric on the positions selected by `u`, levels renumbered 1..|u|.
double user_utility(const LevelMetric& metric, const RelevantPositions& rp,
                    const UserSubset& u);

/// Cumulative exposure of the selected items, without normalization.
double provider_utility(const ExposureModel& exposure,
                        const RelevantPositions& rp, const ProviderSubset& p);

struct WorstCase {
  double value;
  /// Lexicographically smallest level list among the minimizers.
  UserSubset witness;
};

WorstCase worst_case_user(const LevelMetric& metric, const RelevantPositions& rp);
WorstCase worst_case_provider(const ExposureModel& exposure,
                              const RelevantPositions& rp);

/// Utilities of every user (provider), sorted decreasingly.
UtilityVector user_utility_vector(const LevelMetric& metric,
                                  const RelevantPositions& rp);
UtilityVector provider_utility_vector(const ExposureModel& exposure,
                                      const RelevantPositions& rp);

struct RankerWorstCase {
  /// Worst-off user under any single optimal ranking.
  double deterministic;
  /// Worst-off user's expected utility under the uniform mixture over all
  /// m! optimal rankings.
  double stochastic;
};

RankerWorstCase optimal_ranker_worst_case(const LevelMetric& metric,
                                          std::int64_t corpus_size,
                                          std::size_t m);

/// Single-threaded reference implementations of the enumeration kernels.
namespace serial {

WorstCase worst_case_user(const LevelMetric& metric, const RelevantPositions& rp);
WorstCase worst_case_provider(const ExposureModel& exposure,
                              const RelevantPositions& rp);
RankerWorstCase optimal_ranker_worst_case(const LevelMetric& metric,
                                          std::int64_t corpus_size,
                                          std::size_t m);

}  // namespace serial

}  // namespace lexirank
