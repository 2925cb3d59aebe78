#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace mgw {

/// Run tasks 0..count-1 on up to `threads` workers. Tasks must be independent
/// and write only to their own slot; output is then identical for any thread
/// count.
inline void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      task(i);
    }
  };
  std::vector<std::thread> pool;
  const auto nworkers = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(threads), count));
  pool.reserve(nworkers);
  for (std::size_t t = 0; t < nworkers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace mgw
