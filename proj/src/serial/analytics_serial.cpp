#include "../analytics_kernel.hpp"
#include "lexirank/analytics.hpp"

namespace lexirank::serial {

std::vector<SimulatedPair> simulate_pairs(const SimulationConfig& config) {
  config.validate();
  std::vector<SimulatedPair> pairs;
  pairs.reserve(config.pair_count);
  for (std::size_t t = 0; t < config.pair_count; ++t) {
    pairs.push_back(detail::simulated_pair(config, t));
  }
  return pairs;
}

Agreement agreement_with_worst_case(std::span<const SimulatedPair> pairs,
                                    const MetricId& metric, double tolerance) {
  const auto method = ComparisonMethod::metric(metric);
  Agreement a;
  a.pairs = pairs.size();
  for (const auto& pair : pairs) {
    const int vote = detail::worst_case_vote(pair, method, tolerance);
    if (vote < 0) continue;
    ++a.strict_pairs;
    a.agreeing += static_cast<std::size_t>(vote);
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

}  // namespace lexirank::serial
