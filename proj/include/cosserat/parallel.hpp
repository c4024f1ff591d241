#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <utility>
#include <vector>

namespace cosserat {

// Clamps a requested worker count to [1, hardware]. 0 means "one worker".
inline int resolve_thread_count(int requested) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (requested < 1) return 1;
  return static_cast<int>(std::min<unsigned>(static_cast<unsigned>(requested), hw));
}

// Splits [0, n) into n_chunks fixed ranges and runs fn(begin, end, chunk) for
// each. Chunk boundaries depend only on n and n_chunks, never on the worker
// count, so per-chunk partial results can be combined in chunk order to give
// results that are bit-identical for any number of threads.
inline void parallel_chunks(std::size_t n, int threads, int n_chunks,
                            const std::function<void(std::size_t, std::size_t, int)>& fn) {
  if (n == 0 || n_chunks <= 0) return;
  if (static_cast<std::size_t>(n_chunks) > n) n_chunks = static_cast<int>(n);
  auto chunk_range = [&](int c) {
    std::size_t begin = n * static_cast<std::size_t>(c) / static_cast<std::size_t>(n_chunks);
    std::size_t end = n * (static_cast<std::size_t>(c) + 1) / static_cast<std::size_t>(n_chunks);
    return std::pair<std::size_t, std::size_t>(begin, end);
  };
  threads = resolve_thread_count(threads);
  if (threads <= 1) {
    for (int c = 0; c < n_chunks; ++c) {
      auto [b, e] = chunk_range(c);
      fn(b, e, c);
    }
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  std::atomic<int> next{0};
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        int c = next.fetch_add(1);
        if (c >= n_chunks) break;
        auto [b, e] = chunk_range(c);
        fn(b, e, c);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace cosserat
