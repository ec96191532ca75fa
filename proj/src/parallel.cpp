#include "sigmaflow/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace sigmaflow {

int worker_threads() {
  if (const char* env = std::getenv("SIGMAFLOW_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  return omp_get_max_threads();
}

namespace detail {

void parallel_for_impl(std::size_t count, void (*body)(void*, std::size_t), void* ctx) {
  const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic) num_threads(worker_threads())
  for (long i = 0; i < n; ++i) body(ctx, static_cast<std::size_t>(i));
}

}  // namespace detail
}  // namespace sigmaflow
