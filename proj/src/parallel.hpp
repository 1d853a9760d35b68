#ifndef STFEM_SRC_PARALLEL_HPP
#define STFEM_SRC_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace stfem::detail {

inline int thread_count() {
  if (const char* env = std::getenv("STFEM_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

inline constexpr int kChunkSize = 2048;

inline int n_chunks(int n_items) { return (n_items + kChunkSize - 1) / kChunkSize; }

// Chunked parallel loop with a deterministic result layout: the chunk grid is
// fixed (independent of the thread count), each chunk writes only its own
// slot, and callers combine slots in chunk order. fn(chunk_id, begin, end).
template <class Fn>
int for_each_chunk(int n_items, const Fn& fn) {
  const int n_chunks = detail::n_chunks(n_items);
  const int n_threads = std::min(thread_count(), std::max(n_chunks, 1));

  auto run = [&](int chunk_id) {
    const int begin = chunk_id * kChunkSize;
    const int end = std::min(begin + kChunkSize, n_items);
    fn(chunk_id, begin, end);
  };

  if (n_threads <= 1) {
    for (int c = 0; c < n_chunks; ++c) run(c);
    return n_chunks;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t)
    pool.emplace_back([&] {
      for (int c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) run(c);
    });
  for (auto& th : pool) th.join();
  return n_chunks;
}

}  // namespace stfem::detail

#endif
