#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hilbert/spectral.hpp"

using namespace hilbert;

namespace {

Vector vec(std::initializer_list<double> vals) {
  Vector x(static_cast<int>(vals.size()));
  int i = 0;
  for (const double v : vals) x[i++] = v;
  return x;
}

}  // namespace

TEST_CASE("tent values on the interval") {
  const ConvexBody seg{Interval{-1.0, 1.0}};
  const TestFunction tent{Tent{vec({0.0}), 2.0, 1.0}};
  REQUIRE(evaluate_test_function(seg, tent, vec({0.0})) == 1.0);
  REQUIRE_THAT(evaluate_test_function(seg, tent, vec({0.5})),
               Catch::Matchers::WithinRel(1.0 - std::atanh(0.5) / 2.0, 1e-12));
  // atanh(0.97) > 2, so the point is outside the support.
  REQUIRE(evaluate_test_function(seg, tent, vec({0.97})) == 0.0);

  const TestFunction scaled{Tent{vec({0.0}), 2.0, -2.0}};
  REQUIRE_THAT(evaluate_test_function(seg, scaled, vec({0.5})),
               Catch::Matchers::WithinRel(-2.0 * (1.0 - std::atanh(0.5) / 2.0), 1e-12));
}

TEST_CASE("product test functions factor") {
  const ConvexBody seg{Interval{-1.0, 1.0}};
  const ConvexBody prod{Product{{seg, seg}}};
  const TestFunction f{Tent{vec({0.0}), 2.0, 1.0}};
  const TestFunction g{Tent{vec({0.1}), 3.0, 1.0}};
  const TestFunction combined{ProductOf{{f, g}}};
  std::mt19937_64 rng = substream(51, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector x = vec({uniform(rng, -0.99, 0.99), uniform(rng, -0.99, 0.99)});
    const double expected = evaluate_test_function(seg, f, x.segment(0, 1)) *
                            evaluate_test_function(seg, g, x.segment(1, 1));
    REQUIRE_THAT(evaluate_test_function(prod, combined, x),
                 Catch::Matchers::WithinRel(expected, 1e-12));
  }

  REQUIRE_THROWS_AS(evaluate_test_function(seg, combined, vec({0.0})), BodyMismatch);
  const TestFunction lopsided{ProductOf{{f}}};
  REQUIRE_THROWS_AS(evaluate_test_function(prod, lopsided, vec({0.0, 0.0})), BodyMismatch);
}

TEST_CASE("support region contains the tent support") {
  const ConvexBody disk = make_unit_ball(2);
  const TestFunction tent{Tent{vec({0.2, 0.0}), 1.5, 1.0}};
  const ConvexBody region = support_region(disk, tent);
  for (const auto& x : sample_uniform(disk, 400, 52)) {
    if (evaluate_test_function(disk, tent, x) != 0.0) REQUIRE(contains(region, x));
  }
}

TEST_CASE("tent gradients have dual norm scale over radius") {
  const ConvexBody disk = make_unit_ball(2);
  const Vector c = Vector::Zero(2);
  const double radius = 1.5, scale = 2.0;
  const TestFunction tent{Tent{c, radius, scale}};
  QuadratureSpec quad = default_quadrature(2);
  quad.count = 2048;
  const double expected = scale / radius;
  for (const auto& x : sample_uniform(disk, 60, 53)) {
    const double d = distance(disk, c, x);
    const double fd = fd_dual_gradient_norm(disk, tent, x, quad);
    REQUIRE(fd <= expected * 1.0001);
    if (d > 0.2 * radius && d < 0.8 * radius)
      REQUIRE_THAT(fd, Catch::Matchers::WithinRel(expected, 5e-3));
  }
}

TEST_CASE("rayleigh quotients are scale invariant") {
  const ConvexBody disk = make_unit_ball(2);
  SamplerSpec sampler;
  sampler.n_samples = 4096;
  sampler.seed = 54;
  QuadratureSpec quad = default_quadrature(2);
  quad.count = 512;
  const RayleighResult base = rayleigh_quotient(
      disk, TestFunction{Tent{Vector::Zero(2), 2.0, 1.0}}, QuotientForm::lambda1,
      sampler, quad);
  const RayleighResult doubled = rayleigh_quotient(
      disk, TestFunction{Tent{Vector::Zero(2), 2.0, 2.0}}, QuotientForm::lambda1,
      sampler, quad);
  const RayleighResult negated = rayleigh_quotient(
      disk, TestFunction{Tent{Vector::Zero(2), 2.0, -3.0}}, QuotientForm::lambda1,
      sampler, quad);
  REQUIRE(base.n_support > 0);
  REQUIRE(doubled.quotient == base.quotient);
  REQUIRE_THAT(negated.quotient, Catch::Matchers::WithinRel(base.quotient, 1e-12));
}

TEST_CASE("disk tent quotient near its known value") {
  const ConvexBody disk = make_unit_ball(2);
  SamplerSpec sampler;
  sampler.n_samples = 8192;
  sampler.seed = 55;
  QuadratureSpec quad = default_quadrature(2);
  quad.count = 512;
  const RayleighResult res = rayleigh_quotient(
      disk, TestFunction{Tent{Vector::Zero(2), 2.0, 1.0}}, QuotientForm::lambda1,
      sampler, quad);
  // Hyperbolic tent of radius 2 at the origin; the lambda1 witness value.
  REQUIRE(res.quotient_std_error < 0.08);
  REQUIRE_THAT(res.quotient, Catch::Matchers::WithinAbs(1.81, 0.15));
}

TEST_CASE("square tent quotients decrease with the radius") {
  const ConvexBody cube = make_cube(2);
  SamplerSpec sampler;
  sampler.n_samples = 8192;
  sampler.seed = 56;
  QuadratureSpec quad = default_quadrature(2);
  quad.count = 512;
  const double q4 = rayleigh_quotient(cube, TestFunction{Tent{Vector::Zero(2), 4.0, 1.0}},
                                      QuotientForm::lambda1, sampler, quad)
                        .quotient;
  const double q8 = rayleigh_quotient(cube, TestFunction{Tent{Vector::Zero(2), 8.0, 1.0}},
                                      QuotientForm::lambda1, sampler, quad)
                        .quotient;
  REQUIRE(q8 < q4);
  REQUIRE(q8 > 0.0);
}

TEST_CASE("interval tents have sobolev quotient 2 over R") {
  const ConvexBody seg{Interval{-1.0, 1.0}};
  SamplerSpec sampler;
  sampler.n_samples = 16384;
  sampler.seed = 57;
  const QuadratureSpec quad = default_quadrature(1);
  for (const double radius : {1.0, 2.0}) {
    const RayleighResult res =
        rayleigh_quotient(seg, TestFunction{Tent{vec({0.0}), radius, 1.0}},
                          QuotientForm::sobolev, sampler, quad);
    REQUIRE_THAT(res.quotient,
                 Catch::Matchers::WithinAbs(2.0 / radius,
                                            std::max(0.05, 5.0 * res.quotient_std_error)));
  }
}

TEST_CASE("interval tents have lambda1 quotient 3 over R squared") {
  const ConvexBody seg{Interval{-1.0, 1.0}};
  SamplerSpec sampler;
  sampler.n_samples = 16384;
  sampler.seed = 60;
  const QuadratureSpec quad = default_quadrature(1);
  // On the centered interval the density exactly cancels the radial jacobian,
  // so the numerator is deterministic and the quotient lands on 3 / R^2 up to
  // the denominator's Monte Carlo average, a fraction of a percent here.
  for (const double radius : {1e-3, 1.0, 4.0}) {
    const RayleighResult res =
        rayleigh_quotient(seg, TestFunction{Tent{vec({0.0}), radius, 1.0}},
                          QuotientForm::lambda1, sampler, quad, 1e-7);
    REQUIRE(res.n_support == sampler.n_samples);
    REQUIRE_THAT(res.quotient,
                 Catch::Matchers::WithinRel(3.0 / (radius * radius), 0.03));
    REQUIRE(res.quotient_std_error < 0.02 * res.quotient);
  }
}

TEST_CASE("product quotient bound holds on a pair of intervals") {
  const ConvexBody seg{Interval{-1.0, 1.0}};
  SamplerSpec sampler;
  sampler.n_samples = 8192;
  sampler.seed = 58;
  const AmenabilityReport rep = product_amenability_check(
      seg, seg, TestFunction{Tent{vec({0.0}), 1.0, 1.0}},
      TestFunction{Tent{vec({0.2}), 1.5, 1.0}}, sampler, default_quadrature(2));
  REQUIRE(rep.holds);
  REQUIRE(rep.product.quotient < rep.bound);
  REQUIRE_THAT(rep.factor_a.quotient,
               Catch::Matchers::WithinAbs(2.0, std::max(0.1, 5.0 * rep.factor_a.quotient_std_error)));
  REQUIRE(rep.bound_std_error > 0.0);
  REQUIRE(rep.slack > 0.0);
}

TEST_CASE("degenerate rayleigh inputs are rejected") {
  const ConvexBody cube = make_cube(2);
  SamplerSpec sampler;
  sampler.n_samples = 2048;
  sampler.seed = 59;
  QuadratureSpec quad = default_quadrature(2);
  quad.count = 512;
  REQUIRE_THROWS_AS(
      rayleigh_quotient(cube, TestFunction{Tent{Vector::Zero(2), 1.0, 0.0}},
                        QuotientForm::lambda1, sampler, quad),
      ZeroDenominator);
  // Tiny supports are sampled radially, so they estimate instead of starving.
  const RayleighResult tiny_tent = rayleigh_quotient(
      cube, TestFunction{Tent{Vector::Zero(2), 1e-3, 1.0}}, QuotientForm::lambda1,
      sampler, quad);
  REQUIRE(std::isfinite(tiny_tent.quotient));
  REQUIRE(tiny_tent.quotient > 0.0);
  SamplerSpec tiny;
  tiny.n_samples = 100;
  REQUIRE_THROWS_AS(rayleigh_quotient(cube, TestFunction{Tent{Vector::Zero(2), 1.0, 1.0}},
                                      QuotientForm::lambda1, tiny, quad),
                    UnderSampled);
}
