#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "hilbert/body.hpp"
#include "hilbert/measure.hpp"
#include "hilbert/metric.hpp"
#include "hilbert/parallel.hpp"
#include "hilbert/sampling.hpp"

namespace hilbert {

// Outcome of a randomized property suite. worst_violation is the largest
// normalized gap seen across all trials, reported even when every trial
// passed (a healthy suite shows a clearly negative worst case).
struct SuiteReport {
  std::string suite_name;
  std::int64_t trials = 0;
  std::int64_t failures = 0;
  double worst_violation = -kInf;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> details;
};

namespace detail {

inline constexpr int kSuiteDetailCap = 20;

struct SuiteAcc {
  std::int64_t failures = 0;
  std::int64_t trials = 0;
  double worst = -kInf;
  std::vector<std::string> details;

  void note(double violation, double tolerance, const char* fmt, double a, double b) {
    if (violation > worst) worst = violation;
    if (violation > tolerance) {
      ++failures;
      if (details.size() < kSuiteDetailCap) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), fmt, a, b);
        details.emplace_back(buf);
      }
    }
  }

  void merge(const SuiteAcc& o) {
    failures += o.failures;
    trials += o.trials;
    if (o.worst > worst) worst = o.worst;
    for (const auto& d : o.details)
      if (details.size() < kSuiteDetailCap) details.push_back(d);
  }
};

// Interior point, uniform per factor class; the orthant has no natural
// uniform law, so it draws from the (0,10)^n window.
inline Vector sample_interior(const ConvexBody& body, std::mt19937_64& rng) {
  struct Visitor {
    std::mt19937_64& rng;
    Vector operator()(const Interval& b) const {
      Vector x(1);
      do {
        x[0] = uniform(rng, b.lo, b.hi);
      } while (!(b.lo < x[0] && x[0] < b.hi));
      return x;
    }
    Vector operator()(const HPolytope& b) const { return reject(ConvexBody(b)); }
    Vector operator()(const Ellipsoid& b) const { return reject(ConvexBody(b)); }
    Vector operator()(const Orthant& b) const {
      Vector x(b.dimension);
      for (int i = 0; i < b.dimension; ++i)
        do {
          x[i] = uniform(rng, 0.0, 10.0);
        } while (!(x[i] > 0.0));
      return x;
    }
    Vector operator()(const Product& b) const {
      Vector x;
      for (const auto& f : b.factors) {
        const Vector part = sample_interior(f, rng);
        const int old = static_cast<int>(x.size());
        x.conservativeResize(old + part.size());
        x.segment(old, part.size()) = part;
      }
      return x;
    }
    Vector reject(const ConvexBody& body) const {
      const Box box = bounding_box(body);
      Vector x(box.dim());
      do {
        for (int i = 0; i < box.dim(); ++i) x[i] = uniform(rng, box.min[i], box.max[i]);
      } while (!contains_at(body, x, 0));
      return x;
    }
  };
  return std::visit(Visitor{rng}, body.node());
}

// With probability 0.1, push the point 99.9% of the way to the boundary
// along a random chord; numerical claims must survive thin collars.
inline void stress_toward_boundary(const ConvexBody& body, Vector& p, std::mt19937_64& rng) {
  if (uniform01(rng) >= 0.1) return;
  const Vector u = sphere_direction(static_cast<int>(p.size()), rng);
  const double t = chord_times_raw(body, p, u).t_plus;
  if (!std::isfinite(t)) return;
  p += (t * (1.0 - 1e-3)) * u;
}

inline Vector sample_stressed(const ConvexBody& body, std::mt19937_64& rng) {
  Vector p = sample_interior(body, rng);
  stress_toward_boundary(body, p, rng);
  return p;
}

// Random invertible map under which the body's class is closed: nonzero
// scale and shift on the line, a dense gaussian matrix with condition number
// below 20 for polytopes and ellipsoids (so the image's chord arithmetic
// keeps ample headroom under a 1e-9 gate), a positively scaled permutation
// for orthants, and blockwise recursion for products.
inline AffineMap random_affine_map(const ConvexBody& body, std::mt19937_64& rng) {
  struct Visitor {
    std::mt19937_64& rng;
    AffineMap dense(int n) const {
      AffineMap m;
      m.linear.resize(n, n);
      for (;;) {
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) m.linear(i, j) = gaussian(rng);
        const Vector sv = Eigen::JacobiSVD<Matrix>(m.linear).singularValues();
        if (sv[n - 1] > 0.05 * sv[0]) break;
      }
      m.shift.resize(n);
      for (int i = 0; i < n; ++i) m.shift[i] = uniform(rng, -1.0, 1.0);
      return m;
    }
    AffineMap operator()(const Interval&) const {
      AffineMap m;
      const double mag = uniform(rng, 0.5, 2.0);
      m.linear = Matrix::Constant(1, 1, uniform01(rng) < 0.5 ? -mag : mag);
      m.shift = Vector::Constant(1, uniform(rng, -1.0, 1.0));
      return m;
    }
    AffineMap operator()(const HPolytope& b) const { return dense(b.dimension); }
    AffineMap operator()(const Ellipsoid& b) const {
      return dense(static_cast<int>(b.center.size()));
    }
    AffineMap operator()(const Orthant& b) const {
      const int n = b.dimension;
      std::vector<int> perm(n);
      for (int i = 0; i < n; ++i) perm[i] = i;
      for (int i = n - 1; i > 0; --i) {
        const int j = std::min(static_cast<int>(uniform01(rng) * (i + 1.0)), i);
        std::swap(perm[i], perm[j]);
      }
      AffineMap m;
      m.linear = Matrix::Zero(n, n);
      for (int j = 0; j < n; ++j) m.linear(perm[j], j) = uniform(rng, 0.5, 2.0);
      m.shift = Vector::Zero(n);
      return m;
    }
    AffineMap operator()(const Product& b) const {
      int n = 0;
      for (const auto& f : b.factors) n += f.dim();
      AffineMap m;
      m.linear = Matrix::Zero(n, n);
      m.shift.resize(n);
      int off = 0;
      for (const auto& f : b.factors) {
        const AffineMap sub = random_affine_map(f, rng);
        const int d = f.dim();
        m.linear.block(off, off, d, d) = sub.linear;
        m.shift.segment(off, d) = sub.shift;
        off += d;
      }
      return m;
    }
  };
  return std::visit(Visitor{rng}, body.node());
}

template <class Trial>
SuiteReport run_suite(const char* name, std::int64_t trials, std::uint64_t seed,
                      double tolerance, const Trial& trial) {
  SuiteAcc total = chunked_reduce<SuiteAcc>(
      trials, [&](std::int64_t chunk, std::int64_t begin, std::int64_t end) {
        std::mt19937_64 rng = substream(seed, static_cast<std::uint64_t>(chunk));
        SuiteAcc acc;
        for (std::int64_t i = begin; i < end; ++i) {
          trial(i, rng, acc);
          ++acc.trials;
        }
        return acc;
      });
  SuiteReport rep;
  rep.suite_name = name;
  rep.trials = total.trials;
  rep.failures = total.failures;
  rep.worst_violation = total.worst;
  rep.tolerance = tolerance;
  rep.seed = seed;
  rep.details = std::move(total.details);
  return rep;
}

inline ConvexBody product_of(const std::vector<ConvexBody>& factors) {
  if (factors.empty()) throw PreconditionError("need at least one factor");
  return ConvexBody(Product{factors});
}

}  // namespace detail

// max_i F_i <= F_product <= sum_i F_i at sampled points and directions.
inline SuiteReport suite_finsler_sandwich(const std::vector<ConvexBody>& factors,
                                          std::int64_t trials, std::uint64_t seed) {
  const ConvexBody product = detail::product_of(factors);
  const int dim = product.dim();
  const double tol = 1e-9;
  return detail::run_suite(
      "finsler_sandwich", trials, seed, tol,
      [&](std::int64_t /*trial*/, std::mt19937_64& rng, detail::SuiteAcc& acc) {
        const Vector p = detail::sample_stressed(product, rng);
        Vector v(dim);
        for (int i = 0; i < dim; ++i) v[i] = gaussian(rng);
        const double fp = detail::finsler_raw(product, p, v);
        double fmax = 0.0, fsum = 0.0;
        int off = 0;
        for (const auto& f : factors) {
          const int d = f.dim();
          const double fi = detail::finsler_raw(f, p.segment(off, d), v.segment(off, d));
          fmax = std::max(fmax, fi);
          fsum += fi;
          off += d;
        }
        const double scale = 1.0 + fsum;
        const double viol =
            std::max(fmax - fp, fp - fsum) / scale;
        acc.note(viol, tol, "finsler sandwich gap %.3e at norm %.3e", viol, fp);
      });
}

// max_i d_i <= d_product <= sum_i d_i at sampled point pairs.
inline SuiteReport suite_distance_sandwich(const std::vector<ConvexBody>& factors,
                                           std::int64_t trials, std::uint64_t seed) {
  const ConvexBody product = detail::product_of(factors);
  const double tol = 1e-9;
  return detail::run_suite(
      "distance_sandwich", trials, seed, tol,
      [&](std::int64_t /*trial*/, std::mt19937_64& rng, detail::SuiteAcc& acc) {
        const Vector p = detail::sample_stressed(product, rng);
        const Vector q = detail::sample_stressed(product, rng);
        const double dp = detail::distance_raw(product, p, q);
        double dmax = 0.0, dsum = 0.0;
        int off = 0;
        for (const auto& f : factors) {
          const int d = f.dim();
          const double di =
              detail::distance_raw(f, p.segment(off, d), q.segment(off, d));
          dmax = std::max(dmax, di);
          dsum += di;
          off += d;
        }
        const double scale = 1.0 + dsum;
        const double viol = std::max(dmax - dp, dp - dsum) / scale;
        acc.note(viol, tol, "distance sandwich gap %.3e at distance %.3e", viol, dp);
      });
}

// Tangent-ball volume of the product against the product of factor volumes:
// m^-N prod_i Leb_i <= Leb_product <= prod_i Leb_i for m factors in total
// dimension N, checked to 1% to absorb quadrature error.
inline SuiteReport suite_density_sandwich(const std::vector<ConvexBody>& factors,
                                          std::int64_t trials, std::uint64_t seed,
                                          const QuadratureSpec& quad) {
  const ConvexBody product = detail::product_of(factors);
  const int dim = product.dim();
  const double lower = std::pow(static_cast<double>(factors.size()), -dim);
  const double tol = 0.01;
  return detail::run_suite(
      "density_sandwich", trials, seed, tol,
      [&](std::int64_t /*trial*/, std::mt19937_64& rng, detail::SuiteAcc& acc) {
        const Vector x = detail::sample_interior(product, rng);
        const double leb_product =
            tangent_ball_volume(product, x, adapt_quadrature(quad, dim));
        double leb_factors = 1.0;
        int off = 0;
        for (const auto& f : factors) {
          const int d = f.dim();
          leb_factors *=
              tangent_ball_volume(f, x.segment(off, d), adapt_quadrature(quad, d));
          off += d;
        }
        const double ratio = leb_product / leb_factors;
        // Upper gap and lower gap, each normalized by its own bound.
        const double viol = std::max(ratio - 1.0, 1.0 - ratio / lower);
        acc.note(viol, tol, "ball volume ratio %.6f outside sandwich (gap %.3e)", ratio,
                 viol);
      });
}

// Exact closed forms: positive-orthant and interval tangent balls, centers of
// symmetric bodies, and the cube sandwich with its n!-spread bounds. Each
// check subtracts its own tolerance, so any positive violation is a failure.
inline SuiteReport suite_closed_forms(std::int64_t trials, std::uint64_t seed,
                                      const QuadratureSpec& quad) {
  const ConvexBody orthant2{Orthant{2}};
  const ConvexBody cube2 = make_cube(2);
  const ConvexBody cube3 = make_cube(3);
  const ConvexBody disk = make_unit_ball(2);
  const ConvexBody segment{Interval{-1.0, 1.0}};
  const ConvexBody disk_x_segment{Product{{disk, segment}}};
  const double pi = 3.14159265358979323846;

  return detail::run_suite(
      "closed_forms", trials, seed, 0.0,
      [&](std::int64_t trial, std::mt19937_64& rng, detail::SuiteAcc& acc) {
        // Orthant: the tangent ball has volume 12 x1 x2 exactly.
        {
          Vector x(2);
          x[0] = uniform(rng, 0.1, 5.0);
          x[1] = uniform(rng, 0.1, 5.0);
          const double leb = tangent_ball_volume(orthant2, x, adapt_quadrature(quad, 2));
          const double err = std::abs(leb / (12.0 * x[0] * x[1]) - 1.0);
          acc.note(err - 0.005, 0.0, "orthant ball off by %.3e at x1 x2 = %.3f",
                   err, x[0] * x[1]);
        }
        // Interval: F = 1/(1 - x^2), so the ball has length exactly 2(1 - x^2)
        // and no quadrature is involved.
        {
          Vector x(1);
          x[0] = uniform(rng, -0.999, 0.999);
          const double leb = tangent_ball_volume(segment, x, adapt_quadrature(quad, 1));
          const double err = std::abs(leb / (2.0 * (1.0 - x[0] * x[0])) - 1.0);
          acc.note(err - 1e-12, 0.0, "interval ball off by %.3e at %.3f", err, x[0]);
        }
        // Cube sandwich: 2^n/n! <= Leb / prod(1 - x_i^2) <= 2^n, 1% slack.
        for (const ConvexBody* cube : {&cube2, &cube3}) {
          const int n = cube->dim();
          Vector x(n);
          for (int i = 0; i < n; ++i) x[i] = uniform(rng, -0.95, 0.95);
          const double leb = tangent_ball_volume(*cube, x, adapt_quadrature(quad, n));
          double weight = 1.0, upper = 1.0, fact = 1.0;
          for (int i = 0; i < n; ++i) {
            weight *= 1.0 - x[i] * x[i];
            upper *= 2.0;
            fact *= i + 1;
          }
          const double ratio = leb / weight;
          const double gap = std::max(ratio / upper - 1.0, 1.0 - ratio * fact / upper);
          acc.note(gap - 0.01, 0.0, "cube sandwich gap %.3e (ratio %.4f)", gap, ratio);
        }
        // Symmetric centers: pi for the disk, 4 for the square, and 2 pi for
        // the disk x interval product, where the factor balls multiply.
        // Deterministic, so one trial covers them.
        if (trial == 0) {
          const Vector c2 = Vector::Zero(2);
          const double disk_err = std::abs(
              tangent_ball_volume(disk, c2, adapt_quadrature(quad, 2)) / pi - 1.0);
          acc.note(disk_err - 0.005, 0.0, "disk center ball off by %.3e", disk_err, 0.0);
          const double square_err = std::abs(
              tangent_ball_volume(cube2, c2, adapt_quadrature(quad, 2)) / 4.0 - 1.0);
          acc.note(square_err - 0.005, 0.0, "square center ball off by %.3e", square_err,
                   0.0);
          const Vector c3 = Vector::Zero(3);
          const double prod_err = std::abs(
              tangent_ball_volume(disk_x_segment, c3, adapt_quadrature(quad, 3)) /
                  (2.0 * pi) -
              1.0);
          acc.note(prod_err - 0.01, 0.0, "product center ball off by %.3e", prod_err,
                   0.0);
        }
      });
}

// Symmetry, the triangle inequality, additivity along chords, and invariance
// of distances under random invertible affine maps of the body.
inline SuiteReport suite_metric_axioms(const ConvexBody& body, std::int64_t trials,
                                       std::uint64_t seed) {
  const double tol = 1e-9;
  return detail::run_suite(
      "metric_axioms", trials, seed, tol,
      [&](std::int64_t /*trial*/, std::mt19937_64& rng, detail::SuiteAcc& acc) {
        const Vector p = detail::sample_stressed(body, rng);
        const Vector q = detail::sample_stressed(body, rng);
        const Vector r = detail::sample_stressed(body, rng);
        const double dpq = detail::distance_raw(body, p, q);
        const double dqp = detail::distance_raw(body, q, p);
        const double dpr = detail::distance_raw(body, p, r);
        const double dqr = detail::distance_raw(body, q, r);
        acc.note(std::abs(dpq - dqp) / (1.0 + dpq), tol,
                 "asymmetry %.3e at distance %.3e", std::abs(dpq - dqp), dpq);
        acc.note((dpr - (dpq + dqr)) / (1.0 + dpr), tol,
                 "triangle excess %.3e at distance %.3e", dpr - (dpq + dqr), dpr);
        const double s = uniform(rng, 0.05, 0.95);
        const Vector mid = p + s * (q - p);
        const double along = detail::distance_raw(body, p, mid) +
                             detail::distance_raw(body, mid, q);
        acc.note(std::abs(along - dpq) / (1.0 + dpq), tol,
                 "chord additivity gap %.3e at distance %.3e", std::abs(along - dpq),
                 dpq);
        const AffineMap map = detail::random_affine_map(body, rng);
        const ConvexBody image = affine_image(body, map);
        const Vector tp = map.linear * p + map.shift;
        const Vector tq = map.linear * q + map.shift;
        const double dimage = detail::distance_raw(image, tp, tq);
        acc.note(std::abs(dimage - dpq) / (1.0 + dpq), tol,
                 "affine invariance gap %.3e at distance %.3e", std::abs(dimage - dpq),
                 dpq);
      });
}

// Metric balls of the product against boxes of factor balls and against the
// shrunken body: B(p,R) factorwise inside radius R, the product of radius
// R/m factor balls inside B(p,R), and B(p,R-1) inside the tanh(R) dilation.
inline SuiteReport suite_ball_inclusions(const std::vector<ConvexBody>& factors,
                                         double radius, std::int64_t trials,
                                         std::uint64_t seed) {
  if (!(radius > 1.0))
    throw PreconditionError("suite_ball_inclusions: radius must exceed 1");
  const ConvexBody product = detail::product_of(factors);
  const double m = static_cast<double>(factors.size());
  const double tol = 1e-9;
  return detail::run_suite(
      "ball_inclusions", trials, seed, tol,
      [&](std::int64_t /*trial*/, std::mt19937_64& rng, detail::SuiteAcc& acc) {
        const Vector p = detail::sample_interior(product, rng);
        const Vector q = detail::sample_interior(product, rng);
        const double dpq = detail::distance_raw(product, p, q);
        double dmax = 0.0, dsum = 0.0;
        int off = 0;
        for (const auto& f : factors) {
          const int d = f.dim();
          const double di =
              detail::distance_raw(f, p.segment(off, d), q.segment(off, d));
          dmax = std::max(dmax, di);
          dsum += di;
          off += d;
        }
        if (dpq <= radius)
          acc.note((dmax - radius) / radius, tol,
                   "factor ball escape %.3e at product distance %.3e", dmax - radius,
                   dpq);
        if (dmax <= radius / m)
          acc.note((dpq - radius) / radius, tol,
                   "product ball escape %.3e from factor balls %.3e", dpq - radius,
                   dmax);
        if (dpq <= radius - 1.0) {
          const ConvexBody shrunk = dilate(product, p, std::tanh(radius));
          acc.note(detail::contains_at(shrunk, q, 0) ? -1.0 : 1.0, tol,
                   "ball point outside the tanh dilation (d = %.3e, R = %.3e)", dpq,
                   radius);
        }
      });
}

}  // namespace hilbert
