#include "lexirank/parallel.hpp"

#include <omp.h>

#include <cstdlib>

namespace lexirank {

int thread_count() noexcept {
  static const int count = [] {
    if (const char* env = std::getenv("LEXIRANK_THREADS")) {
      char* end = nullptr;
      const long n = std::strtol(env, &end, 10);
      if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
    }
    return omp_get_max_threads();
  }();
  return count;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace lexirank
