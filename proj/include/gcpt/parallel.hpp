#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

namespace gcpt {

/// Calls body(i) for i in [0, n) across hardware threads. Each index is
/// visited exactly once and callers write to disjoint slots, so the outcome
/// does not depend on scheduling. If any call throws, the exception from the
/// lowest failing index is rethrown after all workers finish.
template <class Body>
void parallel_for(std::size_t n, Body&& body, std::size_t min_chunk = 2048) {
  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, (n + min_chunk - 1) / std::max<std::size_t>(1, min_chunk));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::size_t> failed_at(workers, std::numeric_limits<std::size_t>::max());
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([begin, end, w, &body, &failed_at, &errors] {
        for (std::size_t i = begin; i < end; ++i) {
          try {
            body(i);
          } catch (...) {
            failed_at[w] = i;
            errors[w] = std::current_exception();
            return;
          }
        }
      });
    }
  }
  const auto first = std::min_element(failed_at.begin(), failed_at.end());
  if (*first != std::numeric_limits<std::size_t>::max())
    std::rethrow_exception(errors[static_cast<std::size_t>(first - failed_at.begin())]);
}

}  // namespace gcpt
