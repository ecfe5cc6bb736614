#include "bubblecorr/parallel.hpp"

#include <cstdlib>
#include <string>

namespace bc {

int thread_limit() {
  const int fallback = omp_get_max_threads();
  const char* env = std::getenv("BUBBLE_CORRECTION_THREADS");
  if (env == nullptr || *env == '\0') return fallback;
  try {
    const int requested = std::stoi(env);
    return requested > 0 ? requested : fallback;
  } catch (const std::exception&) {
    return fallback;
  }
}

}  // namespace bc
