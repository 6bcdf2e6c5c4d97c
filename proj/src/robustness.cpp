#include "lexirank/robustness.hpp"

#include <algorithm>
#include <bit>
#include <exception>
#include <functional>
#include <numeric>

#include "lexirank/parallel.hpp"
#include "robustness_kernel.hpp"

namespace lexirank {

namespace detail {

void require_population_size(std::size_t m) {
  if (m == 0) throw ValidationError("population needs m >= 1");
  if (m > kMaxPopulationLevels) {
    throw RefusalError("population enumeration refused for m = " +
                       std::to_string(m) + " (cap " +
                       std::to_string(kMaxPopulationLevels) +
                       "); use tse() for the worst case");
  }
}

void require_arrangement_size(std::size_t m, std::int64_t corpus_size) {
  if (m == 0) throw ValidationError("arrangements need m >= 1");
  if (static_cast<std::int64_t>(m) > corpus_size) {
    throw ValidationError("m exceeds corpus size");
  }
  if (m > kMaxArrangementLevels) {
    throw RefusalError("arrangement enumeration refused for m = " +
                       std::to_string(m) + " (cap " +
                       std::to_string(kMaxArrangementLevels) + ")");
  }
}

LevelTable::LevelTable(const ExposureModel& exposure,
                       const NormalizationModel& normalization,
                       std::span<const Position> positions)
    : normalization_(normalization) {
  exposure_.reserve(positions.size());
  for (auto p : positions) exposure_.push_back(exposure.at(p));
  if (normalization.kind() == NormalizationModel::Kind::ndcg) {
    ndcg_.resize(positions.size() + 1, 0.0);
    for (std::size_t k = 1; k <= positions.size(); ++k) {
      ndcg_[k] = ndcg_normalizer(k);
    }
  }
}

double LevelTable::user(std::uint32_t mask) const {
  using K = NormalizationModel::Kind;
  const auto k = static_cast<std::size_t>(std::popcount(mask));
  switch (normalization_.kind()) {
    case K::rr:
      return exposure_[static_cast<std::size_t>(std::countr_zero(mask))];
    case K::esl3:
      return exposure_[static_cast<std::size_t>(31 - std::countl_zero(mask))];
    case K::ndcg: {
      double sum = 0.0;
      for (auto bits = mask; bits; bits &= bits - 1) {
        sum += exposure_[static_cast<std::size_t>(std::countr_zero(bits))];
      }
      return sum * ndcg_[k];
    }
    default: {
      double sum = 0.0;
      std::size_t t = 1;
      for (auto bits = mask; bits; bits &= bits - 1, ++t) {
        sum += exposure_[static_cast<std::size_t>(std::countr_zero(bits))] *
               normalization_.weight(t, k);
      }
      return sum;
    }
  }
}

double LevelTable::provider(std::uint32_t mask) const {
  double sum = 0.0;
  for (auto bits = mask; bits; bits &= bits - 1) {
    sum += exposure_[static_cast<std::size_t>(std::countr_zero(bits))];
  }
  return sum;
}

bool levels_less(std::uint32_t a, std::uint32_t b) noexcept {
  if (a == b) return false;
  const auto diff = a ^ b;
  const auto low = diff & (~diff + 1);  // lowest level where the lists diverge
  const auto above = ~((low << 1) - 1);
  if (a & low) {
    // a lists that level next; b either continues with a larger level or ends.
    return (b & above) != 0;
  }
  return (a & above) == 0;
}

std::size_t arranged_positions(std::uint32_t mask,
                               const std::vector<Position>& arrangement,
                               Position* out) {
  std::size_t n = 0;
  for (auto bits = mask; bits; bits &= bits - 1) {
    out[n++] = arrangement[static_cast<std::size_t>(std::countr_zero(bits))];
  }
  std::sort(out, out + n);
  return n;
}

}  // namespace detail

UserSubset::UserSubset(std::vector<std::size_t> levels, std::size_t m)
    : levels_(std::move(levels)) {
  if (m == 0 || m > 32) throw ValidationError("subset needs 1 <= m <= 32");
  if (levels_.empty()) throw ValidationError("subset must be non-empty");
  std::sort(levels_.begin(), levels_.end());
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i] < 1 || levels_[i] > m) {
      throw ValidationError("subset level outside [1..m]");
    }
    if (i > 0 && levels_[i] == levels_[i - 1]) {
      throw ValidationError("subset levels must be distinct");
    }
    mask_ |= std::uint32_t{1} << (levels_[i] - 1);
  }
}

UserSubset UserSubset::from_mask(std::uint32_t mask, std::size_t m) {
  if (mask == 0) throw ValidationError("subset must be non-empty");
  if (m < 32 && (mask >> m) != 0) {
    throw ValidationError("subset mask selects a level beyond m");
  }
  UserSubset u;
  u.mask_ = mask;
  for (auto bits = mask; bits; bits &= bits - 1) {
    u.levels_.push_back(static_cast<std::size_t>(std::countr_zero(bits)) + 1);
  }
  return u;
}

std::vector<UserSubset> enumerate_users(std::size_t m) {
  detail::require_population_size(m);
  const std::uint32_t end = std::uint32_t{1} << m;
  std::vector<UserSubset> users;
  users.reserve(end - 1);
  for (std::uint32_t mask = 1; mask < end; ++mask) {
    users.push_back(UserSubset::from_mask(mask, m));
  }
  return users;
}

double user_utility(const LevelMetric& metric, const RelevantPositions& rp,
                    const UserSubset& u) {
  if (u.levels().back() > rp.size()) {
    throw ValidationError("user selects a level beyond m");
  }
  std::vector<Position> sub;
  sub.reserve(u.size());
  for (auto level : u.levels()) sub.push_back(rp.at_level(level));
  return metric(sub);
}

double provider_utility(const ExposureModel& exposure,
                        const RelevantPositions& rp, const ProviderSubset& p) {
  if (p.levels().back() > rp.size()) {
    throw ValidationError("provider selects a level beyond m");
  }
  double sum = 0.0;
  for (auto level : p.levels()) sum += exposure.at(rp.at_level(level));
  return sum;
}

namespace {

template <class Utility>
WorstCase parallel_minimum(std::size_t m, Utility utility) {
  const std::uint32_t end = std::uint32_t{1} << m;
  detail::Candidate best{utility(1u), 1u};
#pragma omp parallel num_threads(thread_count())
  {
    detail::Candidate local = best;
#pragma omp for schedule(static) nowait
    for (std::int64_t mask = 2; mask < static_cast<std::int64_t>(end); ++mask) {
      const auto mk = static_cast<std::uint32_t>(mask);
      const detail::Candidate c{utility(mk), mk};
      if (detail::better(c, local)) local = c;
    }
#pragma omp critical(lexirank_worst_case)
    if (detail::better(local, best)) best = local;
  }
  return {best.value, UserSubset::from_mask(best.mask, m)};
}

template <class Utility>
UtilityVector all_utilities(std::size_t m, Utility utility) {
  const std::uint32_t end = std::uint32_t{1} << m;
  std::vector<double> values(end - 1);
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (std::int64_t mask = 1; mask < static_cast<std::int64_t>(end); ++mask) {
    values[static_cast<std::size_t>(mask - 1)] =
        utility(static_cast<std::uint32_t>(mask));
  }
  return UtilityVector::from_unsorted(std::move(values));
}

}  // namespace

WorstCase worst_case_user(const LevelMetric& metric, const RelevantPositions& rp) {
  detail::require_population_size(rp.size());
  const detail::LevelTable table(metric.exposure, metric.normalization,
                                 rp.positions());
  return parallel_minimum(rp.size(),
                          [&](std::uint32_t mask) { return table.user(mask); });
}

WorstCase worst_case_provider(const ExposureModel& exposure,
                              const RelevantPositions& rp) {
  detail::require_population_size(rp.size());
  const detail::LevelTable table(exposure, NormalizationModel::rbp(),
                                 rp.positions());
  return parallel_minimum(
      rp.size(), [&](std::uint32_t mask) { return table.provider(mask); });
}

UtilityVector user_utility_vector(const LevelMetric& metric,
                                  const RelevantPositions& rp) {
  detail::require_population_size(rp.size());
  const detail::LevelTable table(metric.exposure, metric.normalization,
                                 rp.positions());
  return all_utilities(rp.size(),
                       [&](std::uint32_t mask) { return table.user(mask); });
}

UtilityVector provider_utility_vector(const ExposureModel& exposure,
                                      const RelevantPositions& rp) {
  detail::require_population_size(rp.size());
  const detail::LevelTable table(exposure, NormalizationModel::rbp(),
                                 rp.positions());
  return all_utilities(
      rp.size(), [&](std::uint32_t mask) { return table.provider(mask); });
}

RankerWorstCase optimal_ranker_worst_case(const LevelMetric& metric,
                                          std::int64_t corpus_size,
                                          std::size_t m) {
  detail::require_arrangement_size(m, corpus_size);
  const auto ideal = RelevantPositions::from_positions(
      [&] {
        std::vector<Position> p(m);
        std::iota(p.begin(), p.end(), Position{1});
        return p;
      }(),
      corpus_size);
  const double deterministic = worst_case_user(metric, ideal).value;

  const std::uint32_t end = std::uint32_t{1} << m;
  std::vector<double> means(end, 0.0);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
  for (std::int64_t mask = 1; mask < static_cast<std::int64_t>(end); ++mask) {
    try {
      std::vector<Position> arrangement(m);
      std::iota(arrangement.begin(), arrangement.end(), Position{1});
      Position buf[kMaxArrangementLevels];
      double sum = 0.0;
      std::size_t count = 0;
      do {
        const auto n = detail::arranged_positions(
            static_cast<std::uint32_t>(mask), arrangement, buf);
        sum += metric(std::span<const Position>(buf, n));
        ++count;
      } while (std::next_permutation(arrangement.begin(), arrangement.end()));
      means[static_cast<std::size_t>(mask)] = sum / static_cast<double>(count);
    } catch (...) {
#pragma omp critical(lexirank_arrangement_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  const double stochastic = *std::min_element(means.begin() + 1, means.end());
  return {deterministic, stochastic};
}

}  // namespace lexirank
