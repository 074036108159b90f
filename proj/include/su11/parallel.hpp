#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace su11 {

enum class Execution { kSerial, kParallel };

/// out[i] = fn(i) for i in [0, n). The parallel path distributes indices over
/// OpenMP threads; results land at their input index so output order never
/// depends on scheduling. The first exception (lowest index) is rethrown.
template <typename T, typename Fn>
std::vector<T> map_indices(std::size_t n, Fn&& fn, Execution exec = Execution::kParallel) {
  std::vector<T> out(n);
  if (exec == Execution::kSerial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace su11
