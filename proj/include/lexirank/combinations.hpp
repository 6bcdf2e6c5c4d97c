#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

#include "lexirank/core.hpp"

namespace lexirank {

/// The lexicographically first m-subset of [1..D]: (1, 2, ..., m).
inline std::vector<Position> first_combination(std::size_t m) {
  std::vector<Position> c(m);
  std::iota(c.begin(), c.end(), Position{1});
  return c;
}

/// Advances `c`, a sorted m-subset of [1..D], to its lexicographic
/// successor. Returns false (leaving `c` unspecified) after the last one.
inline bool next_combination(std::vector<Position>& c, Position corpus_size) {
  const auto m = static_cast<Position>(c.size());
  for (Position i = m - 1; i >= 0; --i) {
    if (c[i] < corpus_size - (m - 1 - i)) {
      ++c[i];
      for (Position j = i + 1; j < m; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

/// Calls f(const std::vector<Position>&) for every m-subset of [1..D].
template <class F>
void for_each_combination(std::size_t m, Position corpus_size, F&& f) {
  if (m == 0 || static_cast<Position>(m) > corpus_size) return;
  auto c = first_combination(m);
  do {
    f(static_cast<const std::vector<Position>&>(c));
  } while (next_combination(c, corpus_size));
}

}  // namespace lexirank
