#pragma once

#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace biasrank {

// Runs fn(i) for i in [0, count) on up to `parallelism` threads, each thread
// owning a contiguous index block so no two calls share an output slot. The
// lowest-index exception wins and is rethrown after all threads join.
template <typename Fn>
void parallel_for_index(std::size_t count, int parallelism, Fn&& fn) {
  if (count == 0) {
    return;
  }
  const auto workers =
      static_cast<std::size_t>(parallelism > 1 ? parallelism : 1);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::size_t first_error_index = count;
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    if (begin >= count) {
      break;
    }
    const std::size_t end = std::min(count, begin + chunk);
    threads.emplace_back([&, begin, end] {
      for (std::size_t i = begin; i < end; ++i) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (i < first_error_index) {
            first_error_index = i;
            first_error = std::current_exception();
          }
          return;
        }
      }
    });
  }
  for (std::thread& t : threads) {
    t.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

}  // namespace biasrank
