#include <algorithm>
#include <numeric>

#include "../robustness_kernel.hpp"
#include "lexirank/robustness.hpp"

namespace lexirank::serial {

namespace {

template <class Utility>
WorstCase minimum(std::size_t m, Utility utility) {
  const std::uint32_t end = std::uint32_t{1} << m;
  detail::Candidate best{utility(1u), 1u};
  for (std::uint32_t mask = 2; mask < end; ++mask) {
    const detail::Candidate c{utility(mask), mask};
    if (detail::better(c, best)) best = c;
  }
  return {best.value, UserSubset::from_mask(best.mask, m)};
}

}  // namespace

WorstCase worst_case_user(const LevelMetric& metric, const RelevantPositions& rp) {
  detail::require_population_size(rp.size());
  const detail::LevelTable table(metric.exposure, metric.normalization,
                                 rp.positions());
  return minimum(rp.size(), [&](std::uint32_t mask) { return table.user(mask); });
}

WorstCase worst_case_provider(const ExposureModel& exposure,
                              const RelevantPositions& rp) {
  detail::require_population_size(rp.size());
  const detail::LevelTable table(exposure, NormalizationModel::rbp(),
                                 rp.positions());
  return minimum(rp.size(),
                 [&](std::uint32_t mask) { return table.provider(mask); });
}

RankerWorstCase optimal_ranker_worst_case(const LevelMetric& metric,
                                          std::int64_t corpus_size,
                                          std::size_t m) {
  detail::require_arrangement_size(m, corpus_size);
  std::vector<Position> ideal(m);
  std::iota(ideal.begin(), ideal.end(), Position{1});
  const double deterministic =
      serial::worst_case_user(metric, RelevantPositions::from_positions(ideal, corpus_size))
          .value;

  const std::uint32_t end = std::uint32_t{1} << m;
  double stochastic = 0.0;
  Position buf[kMaxArrangementLevels];
  for (std::uint32_t mask = 1; mask < end; ++mask) {
    std::vector<Position> arrangement = ideal;
    double sum = 0.0;
    std::size_t count = 0;
    do {
      const auto n = detail::arranged_positions(mask, arrangement, buf);
      sum += metric(std::span<const Position>(buf, n));
      ++count;
    } while (std::next_permutation(arrangement.begin(), arrangement.end()));
    const double mean = sum / static_cast<double>(count);
    if (mask == 1 || mean < stochastic) stochastic = mean;
  }
  return {deterministic, stochastic};
}

}  // namespace lexirank::serial
