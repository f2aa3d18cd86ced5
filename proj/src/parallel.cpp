#include "riskowa/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace riskowa {

int thread_count() {
  int threads = omp_get_max_threads();
  if (const char* env = std::getenv("RISKOWA_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0) threads = std::min(threads, cap);
    } catch (const std::exception&) {
      // unparsable value: ignore the cap
    }
  }
  return std::max(threads, 1);
}

}  // namespace riskowa
