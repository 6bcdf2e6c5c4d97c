#pragma once

#include <cstdint>
#include <exception>

namespace lexirank {

/// Worker count for OpenMP regions: LEXIRANK_THREADS if set and positive,
/// otherwise the OpenMP default.
int thread_count() noexcept;

/// Mixes (seed, stream) into an independent 64-bit seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Runs f(i) for i in [0, n) across the worker pool. The first exception
/// thrown by any iteration is rethrown after the loop.
template <class F>
void parallel_for(std::int64_t n, F&& f) {
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16) num_threads(thread_count())
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      f(i);
    } catch (...) {
#pragma omp critical(lexirank_parallel_for_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace lexirank
