#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

namespace holosens {

template <typename T, typename Task, typename OnDone>
std::vector<T> parallel_map(std::size_t count, std::size_t workers, Task&& task,
                            OnDone&& on_done) {
  std::vector<std::optional<T>> slots(count);
  std::mutex done_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        T value = task(i);
        std::lock_guard lock(done_mutex);
        on_done(i, value);
        slots[i].emplace(std::move(value));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };

  const std::size_t n = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (n == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (std::size_t w = 0; w < n; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);

  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

template <typename T, typename Task>
std::vector<T> parallel_map(std::size_t count, std::size_t workers, Task&& task) {
  return parallel_map<T>(count, workers, std::forward<Task>(task), [](std::size_t, const T&) {});
}

}  // namespace holosens
