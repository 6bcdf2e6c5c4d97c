#pragma once

#include "lexirank/analytics.hpp"

namespace lexirank::detail {

/// Pair number `trial` of the stream described by `config`.
SimulatedPair simulated_pair(const SimulationConfig& config, std::uint64_t trial);

/// 1 when `metric` agrees with the strict worst-case order, 0 otherwise;
/// -1 when the worst case is tied.
int worst_case_vote(const SimulatedPair& pair, const ComparisonMethod& method,
                    double tolerance);

}  // namespace lexirank::detail
