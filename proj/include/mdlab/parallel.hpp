#pragma once

#include "mdlab/bigfloat.hpp"

#include <omp.h>

#include <exception>
#include <mutex>

namespace mdlab::kernels {

int threads();

// Runs body(i) for i in [0, count) on the OpenMP team, each worker at the caller's
// precision. The first exception is rethrown on the caller.
template <class Body>
void parallel_for(long count, Body&& body) {
  unsigned bits = precision_bits();
  std::exception_ptr error;
  std::mutex mu;
  int nt = threads() > 0 ? threads() : omp_get_max_threads();
#pragma omp parallel num_threads(nt)
  {
    set_thread_precision_bits(bits);
#pragma omp for schedule(dynamic, 1)
    for (long i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace mdlab::kernels
