#pragma once

#include <omp.h>

#include <cstddef>
#include <vector>

namespace bc {

// BUBBLE_CORRECTION_THREADS when it holds a positive integer, otherwise the
// OpenMP default.
int thread_limit();

enum class Exec { serial, parallel };

inline constexpr std::size_t kSumChunk = 256;

// Sum of term(i) for i < count. The parallel path sums fixed-size chunks
// independently and then adds the chunk totals in index order, so its result
// does not depend on the thread count.
template <class F>
double indexed_sum(std::size_t count, F&& term, Exec exec) {
  if (exec == Exec::serial) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += term(i);
    return s;
  }
  const std::size_t chunks = (count + kSumChunk - 1) / kSumChunk;
  std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static) num_threads(thread_limit())
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kSumChunk;
    const std::size_t hi = lo + kSumChunk < count ? lo + kSumChunk : count;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[c] = s;
  }
  double s = 0.0;
  for (double v : partial) s += v;
  return s;
}

// out[i] = f(i); each slot is written by exactly one iteration.
template <class T, class F>
std::vector<T> indexed_map(std::size_t count, F&& f, Exec exec) {
  std::vector<T> out(count);
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
#pragma omp parallel for schedule(static) num_threads(thread_limit())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) out[i] = f(i);
  return out;
}

}  // namespace bc
