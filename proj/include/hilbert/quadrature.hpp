#pragma once

#include <cmath>
#include <cstdint>

#include "hilbert/body.hpp"
#include "hilbert/errors.hpp"
#include "hilbert/rng.hpp"

namespace hilbert {

// Direction-set recipe for spherical averages. angle_grid is the
// deterministic planar rule; mc_directions works in any dimension.
struct QuadratureSpec {
  enum class Mode { angle_grid, mc_directions };

  Mode mode = Mode::angle_grid;
  int count = 4096;
  std::uint64_t seed = 0;
};

inline QuadratureSpec default_quadrature(int dim) {
  QuadratureSpec spec;
  if (dim <= 2) {
    spec.mode = QuadratureSpec::Mode::angle_grid;
    spec.count = 4096;
  } else {
    spec.mode = QuadratureSpec::Mode::mc_directions;
    spec.count = 65536;
  }
  return spec;
}

// Refit a spec to a body of dimension dim: the mode follows the dimension's
// default, and the caller's count carries over only when it was written for
// that same mode.
inline QuadratureSpec adapt_quadrature(const QuadratureSpec& spec, int dim) {
  QuadratureSpec out = default_quadrature(dim);
  out.seed = spec.seed;
  if (out.mode == spec.mode) out.count = spec.count;
  return out;
}

// Columns are unit directions. Dimension 1 is always the exact pair {+1, -1}.
// angle_grid: angles 2 pi j / count, j = 0..count-1 (plane only).
// mc_directions: uniform sphere points in antithetic pairs (u, -u); the first
// 2k columns for a smaller even count are a prefix of any larger set with the
// same seed, so refinement rechecks the same directions plus new ones.
inline Matrix make_directions(int dim, const QuadratureSpec& spec) {
  if (dim < 1) throw PreconditionError("make_directions: dimension must be positive");
  if (dim == 1) {
    Matrix dirs(1, 2);
    dirs(0, 0) = 1.0;
    dirs(0, 1) = -1.0;
    return dirs;
  }
  if (spec.count < 8)
    throw PreconditionError("make_directions: need at least 8 directions");
  if (spec.mode == QuadratureSpec::Mode::angle_grid) {
    if (dim != 2)
      throw PreconditionError("make_directions: angle_grid only covers the plane");
    Matrix dirs(2, spec.count);
    const double step = 6.283185307179586476925286766559 / spec.count;
    for (int j = 0; j < spec.count; ++j) {
      dirs(0, j) = std::cos(step * j);
      dirs(1, j) = std::sin(step * j);
    }
    return dirs;
  }
  const int count = spec.count + (spec.count & 1);
  Matrix dirs(dim, count);
  std::mt19937_64 rng = substream(spec.seed, 0x64697273ull);
  for (int k = 0; k < count / 2; ++k) {
    const Vector u = sphere_direction(dim, rng);
    dirs.col(2 * k) = u;
    dirs.col(2 * k + 1) = -u;
  }
  return dirs;
}

}  // namespace hilbert
