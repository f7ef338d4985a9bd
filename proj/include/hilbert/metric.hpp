#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "hilbert/body.hpp"
#include "hilbert/errors.hpp"
#include "hilbert/quadrature.hpp"

namespace hilbert {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Lebesgue volume of the unit euclidean ball.
inline double euclidean_ball_volume(int n) {
  return std::pow(3.14159265358979323846264338328, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

namespace detail {

inline double inv_or_zero(double t) { return std::isinf(t) ? 0.0 : 1.0 / t; }

inline double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// F(p, v) for interior p; 0 for v = 0, and even in v since the chord just
// swaps endpoints under v -> -v.
inline double finsler_raw(const ConvexBody& body, const VectorRef& p, const VectorRef& v) {
  const ChordTimes t = chord_times_raw(body, p, v);
  if (std::isinf(t.t_plus) && std::isinf(t.t_minus)) return 0.0;
  return 0.5 * (inv_or_zero(t.t_plus) + inv_or_zero(t.t_minus));
}

inline double finsler_raw(const BoundChords& bc, const VectorRef& v) {
  const ChordTimes t = bc.times(v);
  if (std::isinf(t.t_plus) && std::isinf(t.t_minus)) return 0.0;
  return 0.5 * (inv_or_zero(t.t_plus) + inv_or_zero(t.t_minus));
}

}  // namespace detail

// Infinitesimal Hilbert norm of v at p.
inline double finsler_norm(const ConvexBody& body, const VectorRef& p, const VectorRef& v) {
  detail::require_dim(body, p, "finsler_norm");
  if (v.size() != p.size())
    throw DimensionMismatch("finsler_norm: direction dimension differs from point");
  if (!detail::contains_at(body, p, 0)) throw PointOutside("finsler_norm: point not interior");
  bool all_zero = true;
  for (int i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) {
      all_zero = false;
      break;
    }
  if (all_zero) return 0.0;
  const ChordTimes t = detail::chord_times_raw(body, p, v);
  if (std::isinf(t.t_plus) && std::isinf(t.t_minus))
    throw ImproperBody("finsler_norm: line through point stays inside the body");
  return 0.5 * (detail::inv_or_zero(t.t_plus) + detail::inv_or_zero(t.t_minus));
}

// Hilbert distance. With v = q - p and boundary hits at times t_plus forward
// and -t_minus backward, the cross ratio collapses to two log1p terms; a ray
// that never exits contributes nothing, which is the correct limit.
inline double distance(const ConvexBody& body, const VectorRef& p, const VectorRef& q) {
  detail::require_dim(body, p, "distance");
  if (q.size() != p.size())
    throw DimensionMismatch("distance: points have different dimensions");
  if (!detail::contains_at(body, p, 0) || !detail::contains_at(body, q, 0))
    throw PointOutside("distance: both points must be interior");
  bool equal = true;
  for (int i = 0; i < p.size(); ++i)
    if (p[i] != q[i]) {
      equal = false;
      break;
    }
  if (equal) return 0.0;
  const Vector v = q - p;
  const ChordTimes t = detail::chord_times_raw(body, p, v);
  if (std::isinf(t.t_plus) && std::isinf(t.t_minus))
    throw ImproperBody("distance: line through points stays inside the body");
  double sum = 0.0;
  if (!std::isinf(t.t_minus)) sum += std::log1p(1.0 / t.t_minus);
  if (!std::isinf(t.t_plus)) {
    const double past_q = t.t_plus - 1.0;
    if (past_q <= 0.0) return kInf;  // q at the boundary up to rounding
    sum += std::log1p(1.0 / past_q);
  }
  return 0.5 * sum;
}

namespace detail {

// Mean of r(theta)^n_exp over count angles (j + offset) 2 pi / count, where
// r = 1/F is the tangent-ball radial function. r is pi-periodic (F is even),
// so only the first half of the grid is evaluated. cs_table, when given,
// holds the same cos/sin values precomputed.
inline double angle_radial_mean(const BoundChords& bc, int n_exp, int count, double offset,
                                const double* cs_table = nullptr) {
  const double step = kTwoPi / count;
  const int half = count / 2;
  double sum = 0.0;
  Vector v(2);
  for (int j = 0; j < half; ++j) {
    if (cs_table) {
      v[0] = cs_table[2 * j];
      v[1] = cs_table[2 * j + 1];
    } else {
      const double a = (j + offset) * step;
      v[0] = std::cos(a);
      v[1] = std::sin(a);
    }
    const double f = finsler_raw(bc, v);
    if (!(f > 0.0))
      throw NonFiniteRadial("tangent ball is unbounded along a grid direction");
    const double rn = ipow(1.0 / f, n_exp);
    if (!std::isfinite(rn)) throw NonFiniteRadial("radial power overflowed");
    sum += rn;
  }
  return sum / half;
}

inline std::vector<double> make_angle_table(int count, double offset) {
  const double step = kTwoPi / count;
  const int half = count / 2;
  std::vector<double> cs(static_cast<std::size_t>(2 * half));
  for (int j = 0; j < half; ++j) {
    const double a = (j + offset) * step;
    cs[2 * j] = std::cos(a);
    cs[2 * j + 1] = std::sin(a);
  }
  return cs;
}

// Trapezoid-style doubling: each level averages in the midpoint grid and
// stops once two consecutive levels agree to 0.5%. Fixed grids misjudge the
// narrow radial spike of strongly anisotropic balls near the boundary, so
// the refinement is part of the estimate, not just a diagnostic.
inline constexpr double kAngleRefineTol = 5e-3;
inline constexpr int kAngleCountCap = 1 << 20;

inline double adaptive_angle_mean(const BoundChords& bc, int n_exp, int start_count,
                                  const double* base_cs = nullptr,
                                  const double* mid_cs = nullptr) {
  int count = start_count;
  double est = angle_radial_mean(bc, n_exp, count, 0.0, base_cs);
  for (;;) {
    const double* table = (count == start_count) ? mid_cs : nullptr;
    const double mid = angle_radial_mean(bc, n_exp, count, 0.5, table);
    const double est2 = 0.5 * (est + mid);
    const bool converged = std::abs(est2 - est) <= kAngleRefineTol * std::abs(est2);
    est = est2;
    count *= 2;
    if (converged || count >= kAngleCountCap) return est;
  }
}

// Antithetic pairs carry equal radii (F is even), so one chord per pair.
// Near the boundary the radial power spikes along few directions and the
// base set underresolves it; since the direction stream is prefix-nested,
// the set is then extended in place until the mean stabilizes or the draw
// budget runs out. Everything depends only on (body, p, spec).
inline constexpr double kMcRefineTol = 2e-3;
inline constexpr std::int64_t kMcPairCap = std::int64_t{1} << 24;

inline double mc_radial_mean(const BoundChords& bc, int n_exp, const Matrix& dirs,
                             const QuadratureSpec& spec) {
  const int dim = static_cast<int>(dirs.rows());
  std::int64_t pairs = dirs.cols() / 2;
  double sum = 0.0, sumsq = 0.0;
  const auto add = [&](const VectorRef& v) {
    const double f = finsler_raw(bc, v);
    if (!(f > 0.0))
      throw NonFiniteRadial("tangent ball is unbounded along a sampled direction");
    const double rn = ipow(1.0 / f, n_exp);
    if (!std::isfinite(rn)) throw NonFiniteRadial("radial power overflowed");
    sum += rn;
    sumsq += rn * rn;
  };
  for (std::int64_t k = 0; k < pairs; ++k) add(dirs.col(2 * k));
  const auto stable = [&]() {
    const double mean = sum / static_cast<double>(pairs);
    const double var =
        std::max(0.0, sumsq / static_cast<double>(pairs) - mean * mean);
    return std::sqrt(var / static_cast<double>(pairs)) <= kMcRefineTol * mean;
  };
  if (stable() || pairs >= kMcPairCap) return sum / static_cast<double>(pairs);

  // Replay the stream that built dirs, then keep drawing past its end.
  std::mt19937_64 rng = substream(spec.seed, 0x64697273ull);
  Vector v(dim);
  for (std::int64_t k = 0; k < pairs; ++k) sphere_direction(dim, rng, v);
  while (pairs < kMcPairCap) {
    const std::int64_t batch = pairs;
    for (std::int64_t k = 0; k < batch; ++k) {
      sphere_direction(dim, rng, v);
      add(v);
    }
    pairs += batch;
    if (stable()) break;
  }
  return sum / static_cast<double>(pairs);
}

inline double radial_mean_pow_dim(const ConvexBody& body, const VectorRef& p,
                                  const QuadratureSpec& spec) {
  const int n = body.dim();
  const BoundChords bc(body, p);
  if (n == 1) {
    Vector v(1);
    v[0] = 1.0;
    const double f = finsler_raw(bc, v);
    if (!(f > 0.0)) throw NonFiniteRadial("tangent ball is unbounded");
    return 1.0 / f;
  }
  if (spec.mode == QuadratureSpec::Mode::angle_grid) {
    if (n != 2)
      throw PreconditionError("angle_grid quadrature only covers the plane");
    return adaptive_angle_mean(bc, n, std::max(spec.count, 8));
  }
  return mc_radial_mean(bc, n, make_directions(n, spec), spec);
}

}  // namespace detail

// Lebesgue volume of the unit tangent ball {v : F(p, v) < 1}. As a star body
// its volume is omega_n times the spherical mean of r^n with r = 1/F.
inline double tangent_ball_volume(const ConvexBody& body, const VectorRef& p,
                                  const QuadratureSpec& spec) {
  detail::require_dim(body, p, "tangent_ball_volume");
  if (!detail::contains_at(body, p, 0))
    throw PointOutside("tangent_ball_volume: point not interior");
  return euclidean_ball_volume(body.dim()) * detail::radial_mean_pow_dim(body, p, spec);
}

struct DensityValue {
  double leb_tangent_ball = 0.0;
  double density = 0.0;
  double omega_n = 0.0;
};

// Busemann density: euclidean-ball volume over tangent-ball volume.
inline DensityValue density(const ConvexBody& body, const VectorRef& p,
                            const QuadratureSpec& spec) {
  DensityValue out;
  out.omega_n = euclidean_ball_volume(body.dim());
  out.leb_tangent_ball = tangent_ball_volume(body, p, spec);
  out.density = out.omega_n / out.leb_tangent_ball;
  return out;
}

// sup over the unit tangent ball of <xi, v>, evaluated on the direction set:
// max over directions of <xi, theta> / F(p, theta), positive part.
inline double dual_norm(const ConvexBody& body, const VectorRef& p, const VectorRef& xi,
                        const QuadratureSpec& spec) {
  detail::require_dim(body, p, "dual_norm");
  if (xi.size() != p.size())
    throw DimensionMismatch("dual_norm: covector dimension differs from point");
  if (!detail::contains_at(body, p, 0)) throw PointOutside("dual_norm: point not interior");
  const Matrix dirs = make_directions(body.dim(), spec);
  const detail::BoundChords bc(body, p);
  double best = 0.0;
  for (int j = 0; j < dirs.cols(); ++j) {
    double dot = 0.0;
    for (int i = 0; i < dirs.rows(); ++i) dot += xi[i] * dirs(i, j);
    if (dot <= 0.0) continue;
    const double f = detail::finsler_raw(bc, dirs.col(j));
    const double val = (f > 0.0) ? dot / f : kInf;
    if (val > best) best = val;
  }
  return best;
}

enum class DensityMode { exact, product_approx };

// Density evaluation for sampling loops: direction sets and trig tables are
// built once, and product_approx replaces the product's tangent ball by the
// product of factor tangent balls (cheap, and within a factor 2^N sandwich of
// the true ball).
class DensityEvaluator {
 public:
  DensityEvaluator(const ConvexBody& body, const QuadratureSpec& spec,
                   DensityMode mode = DensityMode::exact)
      : omega_(euclidean_ball_volume(body.dim())) {
    if (mode == DensityMode::exact) {
      units_.push_back(make_unit(body, 0, spec, /*inherit_count=*/true));
    } else {
      const auto* prod = std::get_if<Product>(&body.node());
      if (!prod)
        throw BodyMismatch("product_approx density needs a Product body");
      int off = 0;
      for (const auto& f : prod->factors) {
        units_.push_back(make_unit(f, off, spec, /*inherit_count=*/false));
        off += f.dim();
      }
    }
  }

  // Tangent-ball volume at x (exact), or the product surrogate.
  double tangent_ball(const VectorRef& x) const {
    double leb = 1.0;
    for (const auto& u : units_) leb *= unit_ball(u, x);
    return leb;
  }

  double operator()(const VectorRef& x) const { return omega_ / tangent_ball(x); }

  double omega() const { return omega_; }

 private:
  struct Unit {
    ConvexBody body;
    int offset;
    int dim;
    QuadratureSpec spec;
    Matrix dirs;                      // mc mode
    std::vector<double> base_cs, mid_cs;  // angle mode
  };

  static Unit make_unit(const ConvexBody& body, int offset, const QuadratureSpec& spec,
                        bool inherit_count) {
    Unit u{body, offset, body.dim(), spec, {}, {}, {}};
    if (!inherit_count) u.spec = adapt_quadrature(spec, u.dim);
    if (u.dim == 1) return u;
    if (u.spec.mode == QuadratureSpec::Mode::angle_grid) {
      if (u.dim != 2)
        throw PreconditionError("angle_grid quadrature only covers the plane");
      u.spec.count = std::max(u.spec.count, 8);
      u.base_cs = detail::make_angle_table(u.spec.count, 0.0);
      u.mid_cs = detail::make_angle_table(u.spec.count, 0.5);
    } else {
      u.dirs = make_directions(u.dim, u.spec);
    }
    return u;
  }

  static double unit_ball(const Unit& u, const VectorRef& x) {
    const detail::BoundChords bc(u.body, x.segment(u.offset, u.dim));
    if (u.dim == 1) {
      Vector v(1);
      v[0] = 1.0;
      const double f = detail::finsler_raw(bc, v);
      if (!(f > 0.0)) throw NonFiniteRadial("tangent ball is unbounded");
      return euclidean_ball_volume(1) * (1.0 / f);
    }
    if (u.spec.mode == QuadratureSpec::Mode::angle_grid) {
      const double mean = detail::adaptive_angle_mean(bc, u.dim, u.spec.count,
                                                      u.base_cs.data(), u.mid_cs.data());
      return euclidean_ball_volume(2) * mean;
    }
    return euclidean_ball_volume(u.dim) * detail::mc_radial_mean(bc, u.dim, u.dirs, u.spec);
  }

  double omega_;
  std::vector<Unit> units_;
};

// Product-of-factor-balls density surrogate at x.
inline double product_density_approx(const ConvexBody& body, const VectorRef& x,
                                     const QuadratureSpec& spec) {
  detail::require_dim(body, x, "product_density_approx");
  if (!detail::contains_at(body, x, 0))
    throw PointOutside("product_density_approx: point not interior");
  return DensityEvaluator(body, spec, DensityMode::product_approx)(x);
}

}  // namespace hilbert
