#pragma once

// Shared pieces of the parallel and serial population kernels.

#include <cstdint>
#include <vector>

#include "lexirank/robustness.hpp"

namespace lexirank::detail {

void require_population_size(std::size_t m);
void require_arrangement_size(std::size_t m, std::int64_t corpus_size);

/// Exposures at each recall level plus normalization lookups, so that a
/// subset utility evaluates in the same order as recall_level_metric.
class LevelTable {
 public:
  LevelTable(const ExposureModel& exposure,
             const NormalizationModel& normalization,
             std::span<const Position> positions);

  double user(std::uint32_t mask) const;
  double provider(std::uint32_t mask) const;
  std::size_t levels() const noexcept { return exposure_.size(); }

 private:
  NormalizationModel normalization_;
  std::vector<double> exposure_;
  std::vector<double> ndcg_;  // ndcg_[k] = normalizer for k levels
};

struct Candidate {
  double value;
  std::uint32_t mask;
};

/// Lexicographic order on the sorted level lists encoded by two masks.
bool levels_less(std::uint32_t a, std::uint32_t b) noexcept;

/// Smaller value wins; equal values fall back to levels_less.
inline bool better(const Candidate& a, const Candidate& b) noexcept {
  if (a.value != b.value) return a.value < b.value;
  return levels_less(a.mask, b.mask);
}

/// Sorted positions of the items selected by `mask` when item j sits at
/// arrangement[j]; written to `out`, returns the count.
std::size_t arranged_positions(std::uint32_t mask,
                               const std::vector<Position>& arrangement,
                               Position* out);

}  // namespace lexirank::detail
