#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

namespace hilbert {

inline constexpr std::int64_t kChunkSize = 4096;

// Worker count from HILBERT_WORKERS, else hardware concurrency, at least 1.
inline int worker_count() {
  if (const char* env = std::getenv("HILBERT_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw >= 1 ? static_cast<int>(hw) : 1;
}

// Splits [0, n) into fixed chunks, evaluates fn(chunk_index, begin, end) -> Acc
// on a worker pool, and merges the per-chunk accumulators in chunk order.
// Chunking, not scheduling, determines the result, so any worker count yields
// bit-identical output. Acc needs a default constructor and merge(const Acc&).
template <class Acc, class Fn>
Acc chunked_reduce(std::int64_t n, Fn&& fn, std::int64_t chunk_size = kChunkSize) {
  Acc total;
  if (n <= 0) return total;
  const std::int64_t n_chunks = (n + chunk_size - 1) / chunk_size;
  const int workers = std::min<std::int64_t>(worker_count(), n_chunks);

  if (workers <= 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) {
      const std::int64_t begin = c * chunk_size;
      const std::int64_t end = std::min(n, begin + chunk_size);
      Acc part = fn(c, begin, end);
      total.merge(part);
    }
    return total;
  }

  std::vector<std::optional<Acc>> parts(static_cast<std::size_t>(n_chunks));
  std::atomic<std::int64_t> next{0};
  std::mutex error_lock;
  std::int64_t failed_chunk = n_chunks;
  std::exception_ptr error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        try {
          const std::int64_t begin = c * chunk_size;
          const std::int64_t end = std::min(n, begin + chunk_size);
          parts[static_cast<std::size_t>(c)] = fn(c, begin, end);
        } catch (...) {
          // Keep the exception from the lowest-index failing chunk so the
          // rethrown error matches a single-worker run.
          std::lock_guard<std::mutex> guard(error_lock);
          if (c < failed_chunk) {
            failed_chunk = c;
            error = std::current_exception();
          }
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  for (auto& part : parts) total.merge(*part);
  return total;
}

}  // namespace hilbert
