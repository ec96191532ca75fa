#pragma once

// Execution policy for the data-parallel kernels (probe maps, nodal flow
// right-hand sides, FFT line passes). Every kernel keeps a serial reference
// path; both paths write disjoint output slots and reduce in index order,
// so their results are bit-identical.

#include <cstddef>
#include <exception>
#include <vector>

namespace sigmaflow {

enum class Execution { serial, parallel };

// Worker cap from SIGMAFLOW_THREADS (0 or unset = OpenMP default).
int worker_threads();

namespace detail {
void parallel_for_impl(std::size_t count, void (*body)(void*, std::size_t), void* ctx);
}

// Calls f(i) for i in [0, count). Exceptions are captured per index and the
// one with the lowest index is rethrown after the loop.
template <class F>
void for_each_index(std::size_t count, Execution exec, F&& f) {
  if (exec == Execution::serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  struct Ctx {
    F* f;
    std::vector<std::exception_ptr> errors;
  } ctx{&f, std::vector<std::exception_ptr>(count)};
  detail::parallel_for_impl(
      count,
      [](void* c, std::size_t i) {
        auto* ctx = static_cast<Ctx*>(c);
        try {
          (*ctx->f)(i);
        } catch (...) {
          ctx->errors[i] = std::current_exception();
        }
      },
      &ctx);
  for (auto& e : ctx.errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace sigmaflow
