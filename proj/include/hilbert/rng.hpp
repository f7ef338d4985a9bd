#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace hilbert {

// splitmix64 step; the standard finalizer, good enough to decorrelate
// consecutive stream ids into mt19937_64 seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s ^= stream * 0x9e3779b97f4a7c15ull;
  std::uint64_t b = splitmix64(s);
  return a ^ (b + 0x632be59bd9b4e019ull);
}

// Independent generator for (seed, stream); streams index chunks of work so
// results do not depend on how chunks are scheduled across workers.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(mix(seed, stream));
}

// Uniform in [0,1) from the top 53 bits; avoids the library distribution so
// the byte stream is identical across standard library implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Box-Muller; consumes two uniforms, returns one deviate. The twin from the
// same pair is discarded, keeping calls stateless.
inline double gaussian(std::mt19937_64& rng) {
  double u = 0.0;
  do {
    u = uniform01(rng);
  } while (u <= 0.0);
  const double v = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925286766559 * v);
}

// Fills out with a uniform unit vector; the value-returning form allocates
// per call, which dominates tight direction loops.
inline void sphere_direction(int dim, std::mt19937_64& rng, Eigen::VectorXd& out) {
  out.resize(dim);
  if (dim == 3) {
    // Disk-map picking: two uniforms per accepted pair beat three gaussian
    // draws by a wide margin in the quadrature hot loop.
    for (;;) {
      const double u = 2.0 * uniform01(rng) - 1.0;
      const double v = 2.0 * uniform01(rng) - 1.0;
      const double s = u * u + v * v;
      if (s <= 0.0 || s >= 1.0) continue;
      const double m = 2.0 * std::sqrt(1.0 - s);
      out[0] = u * m;
      out[1] = v * m;
      out[2] = 1.0 - 2.0 * s;
      return;
    }
  }
  double norm2 = 0.0;
  do {
    for (int i = 0; i < dim; ++i) out[i] = gaussian(rng);
    norm2 = out.squaredNorm();
  } while (norm2 <= 0.0);
  out /= std::sqrt(norm2);
}

inline Eigen::VectorXd sphere_direction(int dim, std::mt19937_64& rng) {
  Eigen::VectorXd u;
  sphere_direction(dim, rng, u);
  return u;
}

}  // namespace hilbert
