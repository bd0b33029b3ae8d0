#ifndef NGEO_PARALLEL_HPP
#define NGEO_PARALLEL_HPP

#include <future>
#include <type_traits>
#include <vector>

namespace ngeo {

/// Runs task(0..n-1), concurrently when `parallel`; results come back in index
/// order so reductions over them are deterministic.
template <class Task>
auto run_indexed(int n, bool parallel, Task task) -> std::vector<std::invoke_result_t<Task, int>> {
  using R = std::invoke_result_t<Task, int>;
  std::vector<R> out;
  out.reserve(n);
  if (!parallel || n <= 1) {
    for (int k = 0; k < n; ++k) out.push_back(task(k));
    return out;
  }
  std::vector<std::future<R>> futures;
  futures.reserve(n);
  for (int k = 0; k < n; ++k) futures.push_back(std::async(std::launch::async, task, k));
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

}  // namespace ngeo

#endif  // NGEO_PARALLEL_HPP
