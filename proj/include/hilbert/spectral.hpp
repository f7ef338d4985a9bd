#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "hilbert/body.hpp"
#include "hilbert/measure.hpp"
#include "hilbert/metric.hpp"

namespace hilbert {

// scale * (1 - d(center, x)/radius)^+ in the Hilbert metric; its dual
// gradient norm is |scale|/radius almost everywhere on the support.
struct Tent {
  Vector center;
  double radius = 1.0;
  double scale = 1.0;
};

class TestFunction;

// Product of one test function per factor of a Product body.
struct ProductOf {
  std::vector<TestFunction> parts;
};

class TestFunction {
 public:
  using Node = std::variant<Tent, ProductOf>;

  TestFunction(Tent t) : node_(std::move(t)) {}
  TestFunction(ProductOf p) : node_(std::move(p)) {}

  const Node& node() const { return node_; }

 private:
  Node node_;
};

namespace detail {

// Value at an interior x; 0 outside the support.
inline double evaluate_test_function_raw(const ConvexBody& body, const TestFunction& f,
                                         const VectorRef& x) {
  struct Visitor {
    const ConvexBody& body;
    const VectorRef& x;
    double operator()(const Tent& t) const {
      const double d = distance_raw(body, t.center, x);
      return d >= t.radius ? 0.0 : t.scale * (1.0 - d / t.radius);
    }
    double operator()(const ProductOf& p) const {
      const auto* prod = std::get_if<Product>(&body.node());
      if (!prod || prod->factors.size() != p.parts.size())
        throw BodyMismatch("test function product does not match the body's factors");
      double val = 1.0;
      int off = 0;
      for (std::size_t i = 0; i < p.parts.size(); ++i) {
        const int d = prod->factors[i].dim();
        val *= evaluate_test_function_raw(prod->factors[i], p.parts[i], x.segment(off, d));
        if (val == 0.0) return 0.0;
        off += d;
      }
      return val;
    }
  };
  return std::visit(Visitor{body, x}, f.node());
}

}  // namespace detail

inline double evaluate_test_function(const ConvexBody& body, const TestFunction& f,
                                     const VectorRef& x) {
  detail::require_dim(body, x, "evaluate_test_function");
  if (!detail::contains_at(body, x, 0))
    throw PointOutside("evaluate_test_function: point not interior");
  return detail::evaluate_test_function_raw(body, f, x);
}

// Compact region containing the support: a tent of radius R lives in the
// metric ball B(center, R), which sits inside the body dilated by tanh(R+1).
inline ConvexBody support_region(const ConvexBody& body, const TestFunction& f) {
  struct Visitor {
    const ConvexBody& body;
    ConvexBody operator()(const Tent& t) const {
      return dilate(body, t.center, std::tanh(t.radius + 1.0));
    }
    ConvexBody operator()(const ProductOf& p) const {
      const auto* prod = std::get_if<Product>(&body.node());
      if (!prod || prod->factors.size() != p.parts.size())
        throw BodyMismatch("test function product does not match the body's factors");
      Product out;
      out.factors.reserve(p.parts.size());
      for (std::size_t i = 0; i < p.parts.size(); ++i)
        out.factors.push_back(support_region(prod->factors[i], p.parts[i]));
      return out;
    }
  };
  return std::visit(Visitor{body}, f.node());
}

namespace detail {

// One tent per factor block of the test function, flattened onto the full
// coordinate vector, with chords bound at the tent center. A value lookup is
// then one direction solve plus the two-log chord formula per tent, and the
// center's chords drive the radial sampler below.
struct TentUnit {
  int offset = 0;
  int dim = 0;
  double radius = 1.0;
  double scale = 1.0;
  double sphere_area = 0.0;  // surface measure of the unit (dim-1)-sphere
  Vector center;
  BoundChords chords;
};

inline void flatten_test_function(const ConvexBody& body, const TestFunction& f, int off,
                                  std::vector<TentUnit>& out) {
  struct Visitor {
    const ConvexBody& body;
    int off;
    std::vector<TentUnit>& out;
    void operator()(const Tent& t) const {
      const int n = body.dim();
      if (t.center.size() != n)
        throw DimensionMismatch("test function center dimension differs from the body");
      if (!contains_at(body, t.center, 0))
        throw PointOutside("test function center is not interior");
      out.push_back(TentUnit{off, n, t.radius, t.scale, n * euclidean_ball_volume(n),
                             t.center, BoundChords(body, t.center)});
    }
    void operator()(const ProductOf& p) const {
      const auto* prod = std::get_if<Product>(&body.node());
      if (!prod || prod->factors.size() != p.parts.size())
        throw BodyMismatch("test function product does not match the body's factors");
      int o = off;
      for (std::size_t i = 0; i < p.parts.size(); ++i) {
        flatten_test_function(prod->factors[i], p.parts[i], o, out);
        o += prod->factors[i].dim();
      }
    }
  };
  std::visit(Visitor{body, off, out}, f.node());
}

// Tent-product value at an interior x through the bound center chords; the
// distance arithmetic mirrors distance_raw term for term, so the values match
// evaluate_test_function_raw bit for bit. diff is scratch of the full point
// dimension.
inline double evaluate_tents_raw(const std::vector<TentUnit>& units, const VectorRef& x,
                                 Vector& diff) {
  double val = 1.0;
  for (const auto& u : units) {
    bool equal = true;
    for (int i = 0; i < u.dim; ++i) {
      diff[i] = x[u.offset + i] - u.center[i];
      if (diff[i] != 0.0) equal = false;
    }
    double d = 0.0;
    if (!equal) {
      const ChordTimes t = u.chords.times(diff.head(u.dim));
      if (std::isinf(t.t_plus) && std::isinf(t.t_minus))
        throw ImproperBody("distance: line through points stays inside the body");
      const double past_q = t.t_plus - 1.0;
      if (std::isfinite(t.t_plus) && past_q <= 0.0) {
        d = kInf;  // x at the boundary up to rounding
      } else {
        double sum = 0.0;
        if (!std::isinf(t.t_minus)) sum += std::log1p(1.0 / t.t_minus);
        if (!std::isinf(t.t_plus)) sum += std::log1p(1.0 / past_q);
        d = 0.5 * sum;
      }
    }
    val *= d >= u.radius ? 0.0 : u.scale * (1.0 - d / u.radius);
    if (val == 0.0) return 0.0;
  }
  return val;
}

// Max over the direction set of |f(x+eps v) - f(x-eps v)| / (2 eps F(x, v)),
// the discrete dual norm of df at x. The step shrinks near the boundary so
// both probes stay interior. Directions come in +/- pairs and the ratio is
// even, so only half of each set is evaluated. probe and diff are scratch of
// the full point dimension.
inline double fd_dual_gradient_units(const BoundChords& at_x,
                                     const std::vector<TentUnit>& units, const VectorRef& x,
                                     const Matrix& dirs, double fd_step, Vector& probe,
                                     Vector& diff) {
  const int half = static_cast<int>(dirs.cols()) / 2;
  // mc sets and the 1-D pair store antipodes adjacently; angle grids put
  // them half a turn apart. Either way the first half of the distinct
  // directions plus the evenness of the ratio covers the whole set.
  const bool paired = dirs.cols() >= 2 && (dirs.col(0) + dirs.col(1)).norm() == 0.0;
  double best = 0.0;
  for (int j = 0; j < half; ++j) {
    const auto v = dirs.col(paired ? 2 * j : j);
    const ChordTimes t = at_x.times(v);
    double eps = fd_step;
    if (std::isfinite(t.t_plus)) eps = std::min(eps, 0.5 * t.t_plus);
    if (std::isfinite(t.t_minus)) eps = std::min(eps, 0.5 * t.t_minus);
    if (!(eps > 0.0)) continue;
    const double fnorm = (std::isinf(t.t_plus) && std::isinf(t.t_minus))
                             ? 0.0
                             : 0.5 * (inv_or_zero(t.t_plus) + inv_or_zero(t.t_minus));
    if (!(fnorm > 0.0)) throw NonFiniteRadial("degenerate direction in gradient probe");
    probe = x + eps * v;
    const double up = evaluate_tents_raw(units, probe, diff);
    probe = x - eps * v;
    const double down = evaluate_tents_raw(units, probe, diff);
    const double ratio = std::abs(up - down) / (2.0 * eps * fnorm);
    if (ratio > best) best = ratio;
  }
  return best;
}

}  // namespace detail

// Finite-difference estimate of the dual norm of df at x.
inline double fd_dual_gradient_norm(const ConvexBody& body, const TestFunction& f,
                                    const VectorRef& x, const QuadratureSpec& quad,
                                    double fd_step = 1e-4) {
  detail::require_dim(body, x, "fd_dual_gradient_norm");
  if (!detail::contains_at(body, x, 0))
    throw PointOutside("fd_dual_gradient_norm: point not interior");
  if (!(fd_step > 0.0)) throw PreconditionError("fd_dual_gradient_norm: step must be positive");
  const Matrix dirs = make_directions(body.dim(), quad);
  std::vector<detail::TentUnit> units;
  detail::flatten_test_function(body, f, 0, units);
  const detail::BoundChords at_x(body, x);
  Vector probe(x.size()), diff(x.size());
  return detail::fd_dual_gradient_units(at_x, units, x, dirs, fd_step, probe, diff);
}

enum class QuotientForm { lambda1, sobolev };

struct RayleighResult {
  double quotient = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  double num_std_error = 0.0;
  double den_std_error = 0.0;
  double quotient_std_error = 0.0;
  std::int64_t n_support = 0;
};

// Rayleigh quotient of a test function: (integral of |df|_*^k h) over
// (integral of |f|^k h), k = 2 for the lambda1 form, k = 1 for the Sobolev
// form. Sampling is radial per tent: a direction uniform on the factor
// sphere, a metric radius s uniform on [0, R), and the chord map from s back
// to the euclidean radius t, whose polar jacobian rides along as the sample
// weight. Every draw lands inside the support with d(center, x) = s by
// construction, so the tent value is exact and the variance stays polynomial
// in R; uniform draws over the support's box degrade like e^R because both
// integrands concentrate in an exponentially thin boundary shell. Both
// integrals run over the same samples; the quotient error bar is the
// uncorrelated ratio propagation, slightly conservative here since the
// integrands are positively correlated.
inline RayleighResult rayleigh_quotient(const ConvexBody& body, const TestFunction& f,
                                        QuotientForm form, const SamplerSpec& sampler,
                                        const QuadratureSpec& quad, double fd_step = 1e-4) {
  if (sampler.n_samples < 1000)
    throw UnderSampled("rayleigh_quotient: need at least 1000 samples");
  const int k = form == QuotientForm::lambda1 ? 2 : 1;
  const DensityEvaluator ev(body, quad, sampler.density_mode);
  const Matrix dirs = make_directions(body.dim(), quad);
  std::vector<detail::TentUnit> units;
  detail::flatten_test_function(body, f, 0, units);
  for (const auto& u : units)
    if (u.scale == 0.0 || !(u.radius > 0.0))
      throw ZeroDenominator("rayleigh_quotient: test function has no mass in the body");

  struct Acc {
    detail::McMoments num, den;
    void merge(const Acc& o) {
      num.merge(o.num);
      den.merge(o.den);
    }
  };
  const Acc acc = chunked_reduce<Acc>(
      sampler.n_samples, [&](std::int64_t chunk, std::int64_t begin, std::int64_t end) {
        std::mt19937_64 rng = substream(sampler.seed, static_cast<std::uint64_t>(chunk));
        Acc a;
        const int d = body.dim();
        Vector x(d), probe(d), diff(d);
        std::vector<Vector> thetas(units.size());
        for (std::size_t ui = 0; ui < units.size(); ++ui)
          thetas[ui] = Vector(units[ui].dim);
        for (std::int64_t i = begin; i < end; ++i) {
          ++a.num.n;
          ++a.den.n;
          double jac = 1.0, val = 1.0;
          for (std::size_t ui = 0; ui < units.size(); ++ui) {
            const detail::TentUnit& u = units[ui];
            Vector& theta = thetas[ui];
            sphere_direction(u.dim, rng, theta);
            const double s = uniform(rng, 0.0, u.radius);
            const ChordTimes ct = u.chords.times(theta);
            const double alpha = detail::inv_or_zero(ct.t_minus);
            const double beta = detail::inv_or_zero(ct.t_plus);
            if (!(alpha + beta > 0.0))
              throw NonFiniteRadial("rayleigh_quotient: tent support never exits the body");
            // t(s) inverts d(center, center + t theta) = s; ds/dt > 0, so the
            // jacobian of (theta, s) -> x is area * R * t^(n-1) * dt/ds.
            const double e2s = std::exp(2.0 * s);
            const double denom = alpha + beta * e2s;
            const double t = (e2s - 1.0) / denom;
            const double dtds = 2.0 * e2s * (alpha + beta) / (denom * denom);
            jac *= u.sphere_area * u.radius * detail::ipow(t, u.dim - 1) * dtds;
            val *= u.scale * (1.0 - s / u.radius);
            for (int c = 0; c < u.dim; ++c) x[u.offset + c] = u.center[c] + t * theta[c];
          }
          if (val == 0.0) continue;  // product underflow; the sample has no mass
          const double h = ev(x);
          const detail::BoundChords at_x(body, x);
          const double grad =
              detail::fd_dual_gradient_units(at_x, units, x, dirs, fd_step, probe, diff);
          const double wnum = detail::ipow(grad, k) * h * jac;
          const double wden = detail::ipow(std::abs(val), k) * h * jac;
          a.num.sum += wnum;
          a.num.sumsq += wnum * wnum;
          ++a.num.accepted;
          a.den.sum += wden;
          a.den.sumsq += wden * wden;
          ++a.den.accepted;
        }
        return a;
      });

  const BallVolumeEstimate num = detail::finish_estimate(acc.num, 1.0);
  const BallVolumeEstimate den = detail::finish_estimate(acc.den, 1.0);
  if (!(den.value > 0.0) || den.n_accepted == 0)
    throw ZeroDenominator("rayleigh_quotient: test function has no mass in the body");
  RayleighResult out;
  out.numerator = num.value;
  out.denominator = den.value;
  out.num_std_error = num.std_error;
  out.den_std_error = den.std_error;
  out.quotient = num.value / den.value;
  const double rn = num.std_error / std::max(num.value, 1e-300);
  const double rd = den.std_error / den.value;
  out.quotient_std_error = std::abs(out.quotient) * std::sqrt(rn * rn + rd * rd);
  out.n_support = den.n_accepted;
  return out;
}

struct AmenabilityReport {
  RayleighResult factor_a;
  RayleighResult factor_c;
  RayleighResult product;
  double bound = 0.0;
  double bound_std_error = 0.0;
  double slack = 0.0;
  bool holds = false;
};

// Product test inequality: for f on A and g on C, the quotient of f*g on
// A x C is at most 2^(dim A + dim C) times (Q(f) + Q(g)) in the Sobolev
// form. The report checks the inequality with a three sigma allowance.
inline AmenabilityReport product_amenability_check(const ConvexBody& body_a,
                                                   const ConvexBody& body_c,
                                                   const TestFunction& f,
                                                   const TestFunction& g,
                                                   const SamplerSpec& sampler,
                                                   const QuadratureSpec& quad,
                                                   double fd_step = 1e-4) {
  AmenabilityReport rep;
  SamplerSpec sa = sampler;
  sa.seed = mix(sampler.seed, 1);
  rep.factor_a = rayleigh_quotient(body_a, f, QuotientForm::sobolev, sa,
                                   adapt_quadrature(quad, body_a.dim()), fd_step);
  SamplerSpec sc = sampler;
  sc.seed = mix(sampler.seed, 2);
  rep.factor_c = rayleigh_quotient(body_c, g, QuotientForm::sobolev, sc,
                                   adapt_quadrature(quad, body_c.dim()), fd_step);

  ConvexBody product{Product{{body_a, body_c}}};
  TestFunction combined{ProductOf{{f, g}}};
  SamplerSpec sp = sampler;
  sp.seed = mix(sampler.seed, 3);
  rep.product = rayleigh_quotient(product, combined, QuotientForm::sobolev, sp,
                                  adapt_quadrature(quad, product.dim()), fd_step);

  const double scale = std::pow(2.0, body_a.dim() + body_c.dim());
  rep.bound = scale * (rep.factor_a.quotient + rep.factor_c.quotient);
  rep.bound_std_error =
      scale * std::sqrt(rep.factor_a.quotient_std_error * rep.factor_a.quotient_std_error +
                        rep.factor_c.quotient_std_error * rep.factor_c.quotient_std_error);
  const double allowance =
      3.0 * std::sqrt(rep.bound_std_error * rep.bound_std_error +
                      rep.product.quotient_std_error * rep.product.quotient_std_error);
  rep.slack = rep.bound + allowance - rep.product.quotient;
  rep.holds = rep.slack >= 0.0;
  return rep;
}

}  // namespace hilbert
