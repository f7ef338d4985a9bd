#pragma once

#include <cstdint>
#include <vector>

#include "hilbert/body.hpp"
#include "hilbert/parallel.hpp"
#include "hilbert/rng.hpp"

namespace hilbert {

inline Vector uniform_in_box(const Box& box, std::mt19937_64& rng) {
  const int n = box.dim();
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = uniform(rng, box.min[i], box.max[i]);
  return x;
}

namespace detail {

// Throws once a chunk has burned >= 2^20 draws with acceptance below 1e-6.
struct StallGuard {
  std::int64_t attempts = 0;
  std::int64_t accepted = 0;

  void tick(bool hit) {
    ++attempts;
    if (hit) ++accepted;
    if ((attempts & ((1 << 20) - 1)) == 0 &&
        accepted < 1e-6 * static_cast<double>(attempts))
      throw RejectionStall("rejection sampler acceptance rate below 1e-6");
  }
};

}  // namespace detail

// n points uniform in the body by rejection from its bounding box. Chunk c of
// the output stream draws from substream (seed, c), so the result depends on
// (seed, n) only, never on the worker count.
inline std::vector<Vector> sample_uniform(const ConvexBody& body, std::int64_t n,
                                          std::uint64_t seed) {
  std::vector<Vector> out;
  if (n <= 0) return out;
  const Box box = bounding_box(body);

  struct Acc {
    std::vector<Vector> points;
    void merge(Acc& other) {
      points.insert(points.end(), std::make_move_iterator(other.points.begin()),
                    std::make_move_iterator(other.points.end()));
    }
  };

  Acc total = chunked_reduce<Acc>(n, [&](std::int64_t chunk, std::int64_t begin,
                                         std::int64_t end) {
    std::mt19937_64 rng = substream(seed, static_cast<std::uint64_t>(chunk));
    detail::StallGuard guard;
    Acc acc;
    acc.points.reserve(static_cast<std::size_t>(end - begin));
    while (acc.points.size() < static_cast<std::size_t>(end - begin)) {
      Vector x = uniform_in_box(box, rng);
      const bool hit = detail::contains_at(body, x, 0);
      guard.tick(hit);
      if (hit) acc.points.push_back(std::move(x));
    }
    return acc;
  });
  return total.points;
}

}  // namespace hilbert
