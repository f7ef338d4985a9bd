#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>

#include "hilbert/body.hpp"
#include "hilbert/sampling.hpp"

using namespace hilbert;

namespace {

Vector vec(std::initializer_list<double> vals) {
  Vector x(static_cast<int>(vals.size()));
  int i = 0;
  for (const double v : vals) x[i++] = v;
  return x;
}

ConvexBody interval_square() {
  return Product{{Interval{-1.0, 1.0}, Interval{-1.0, 1.0}}};
}

// p +- t v must straddle the boundary at the reported times.
void check_chord_consistency(const ConvexBody& body, const Vector& p, const Vector& v) {
  const ChordTimes t = chord_times(body, p, v);
  for (const double sign : {1.0, -1.0}) {
    const double time = sign > 0 ? t.t_plus : t.t_minus;
    if (std::isinf(time)) continue;
    const double h = 1e-7 * (1.0 + time);
    if (time <= h) continue;
    REQUIRE(contains(body, p + sign * (time - h) * v));
    REQUIRE_FALSE(contains(body, p + sign * (time + h) * v));
  }
}

}  // namespace

TEST_CASE("chord times on the square") {
  const ConvexBody cube = make_cube(2);
  const ChordTimes t = chord_times(cube, vec({0.5, 0.0}), vec({1.0, 0.0}));
  REQUIRE(t.t_plus == 0.5);
  REQUIRE(t.t_minus == 1.5);
}

TEST_CASE("chord times on the half line") {
  const ConvexBody orthant{Orthant{1}};
  const ChordTimes t = chord_times(orthant, vec({2.0}), vec({1.0}));
  REQUIRE(std::isinf(t.t_plus));
  REQUIRE(t.t_minus == 2.0);
}

TEST_CASE("product chord times take the factor minimum") {
  const ConvexBody prod = interval_square();
  const ChordTimes t = chord_times(prod, vec({0.5, 0.3}), vec({1.0, 1.0}));
  REQUIRE(t.t_plus == 0.5);
  REQUIRE(t.t_minus == 1.3);

  std::mt19937_64 rng = substream(11, 0);
  for (int trial = 0; trial < 200; ++trial) {
    Vector p(2), v(2);
    p[0] = uniform(rng, -0.99, 0.99);
    p[1] = uniform(rng, -0.99, 0.99);
    v[0] = gaussian(rng);
    v[1] = gaussian(rng);
    const ChordTimes tp = chord_times(prod, p, v);
    const ConvexBody seg{Interval{-1.0, 1.0}};
    const ChordTimes t0 = detail::chord_times_raw(seg, p.segment(0, 1), v.segment(0, 1));
    const ChordTimes t1 = detail::chord_times_raw(seg, p.segment(1, 1), v.segment(1, 1));
    REQUIRE(tp.t_plus == std::min(t0.t_plus, t1.t_plus));
    REQUIRE(tp.t_minus == std::min(t0.t_minus, t1.t_minus));
  }
}

TEST_CASE("square as polytope matches the interval product") {
  const ConvexBody cube = make_cube(2);
  const ConvexBody prod = interval_square();
  std::mt19937_64 rng = substream(12, 0);
  for (int trial = 0; trial < 200; ++trial) {
    Vector p(2), v(2);
    p[0] = uniform(rng, -0.99, 0.99);
    p[1] = uniform(rng, -0.99, 0.99);
    v[0] = gaussian(rng);
    v[1] = gaussian(rng);
    const ChordTimes a = chord_times(cube, p, v);
    const ChordTimes b = chord_times(prod, p, v);
    REQUIRE(a.t_plus == b.t_plus);
    REQUIRE(a.t_minus == b.t_minus);
  }
}

TEST_CASE("chord times straddle the boundary") {
  Matrix shape(2, 2);
  shape << 5.0, 1.0, 1.0, 2.0;
  const std::vector<ConvexBody> bodies = {
      make_cube(2),
      make_cube(3),
      make_unit_ball(2),
      make_unit_ball(3),
      ConvexBody{Ellipsoid{vec({0.3, -0.2}), shape}},
      make_simplex(2),
      make_simplex(3),
      ConvexBody{Product{{make_unit_ball(2), Interval{-1.0, 1.0}}}},
  };
  for (const auto& body : bodies) {
    const auto points = sample_uniform(body, 40, 101);
    std::mt19937_64 rng = substream(13, 0);
    for (const auto& p : points) {
      Vector v(body.dim());
      for (int i = 0; i < v.size(); ++i) v[i] = gaussian(rng);
      check_chord_consistency(body, p, v);
    }
  }
}

TEST_CASE("chord times straddle the orthant boundary") {
  const ConvexBody orthant{Orthant{2}};
  std::mt19937_64 rng = substream(14, 0);
  for (int trial = 0; trial < 100; ++trial) {
    Vector p(2), v(2);
    p[0] = uniform(rng, 0.01, 10.0);
    p[1] = uniform(rng, 0.01, 10.0);
    v[0] = gaussian(rng);
    v[1] = gaussian(rng);
    check_chord_consistency(orthant, p, v);
  }
}

TEST_CASE("bound chords match the one-shot chord times") {
  Matrix shape(2, 2);
  shape << 5.0, 1.0, 1.0, 2.0;
  const std::vector<ConvexBody> bodies = {
      make_cube(2),
      make_cube(3),
      make_unit_ball(3),
      ConvexBody{Ellipsoid{vec({0.3, -0.2}), shape}},
      make_simplex(3),
      ConvexBody{Product{{make_unit_ball(2), Interval{-1.0, 1.0}}}},
  };
  for (const auto& body : bodies) {
    std::mt19937_64 rng = substream(19, 0);
    for (const auto& p : sample_uniform(body, 20, 102)) {
      const detail::BoundChords bc(body, p);
      for (int trial = 0; trial < 20; ++trial) {
        Vector v(body.dim());
        for (int i = 0; i < v.size(); ++i) v[i] = gaussian(rng);
        const ChordTimes a = detail::chord_times_raw(body, p, v);
        const ChordTimes b = bc.times(v);
        REQUIRE(a.t_plus == b.t_plus);
        REQUIRE(a.t_minus == b.t_minus);
      }
    }
  }

  // Zero blocks inside a product: the flat factor decides both times.
  const ConvexBody tube{Product{{make_unit_ball(2), Interval{-1.0, 1.0}}}};
  const Vector p = vec({0.2, -0.1, 0.4});
  const detail::BoundChords bc(tube, p);
  for (const Vector& v : {vec({0.0, 0.0, 1.0}), vec({1.0, 0.0, 0.0})}) {
    const ChordTimes a = detail::chord_times_raw(tube, p, v);
    const ChordTimes b = bc.times(v);
    REQUIRE(a.t_plus == b.t_plus);
    REQUIRE(a.t_minus == b.t_minus);
  }

  const ConvexBody orthant{Orthant{2}};
  std::mt19937_64 rng = substream(19, 1);
  for (int trial = 0; trial < 50; ++trial) {
    Vector q(2), v(2);
    q[0] = uniform(rng, 0.01, 10.0);
    q[1] = uniform(rng, 0.01, 10.0);
    v[0] = gaussian(rng);
    v[1] = gaussian(rng);
    const ChordTimes a = detail::chord_times_raw(orthant, q, v);
    const ChordTimes b = detail::BoundChords(orthant, q).times(v);
    REQUIRE(a.t_plus == b.t_plus);
    REQUIRE(a.t_minus == b.t_minus);
  }
}

TEST_CASE("chord time validation") {
  const ConvexBody cube = make_cube(2);
  REQUIRE_THROWS_AS(chord_times(cube, vec({2.0, 0.0}), vec({1.0, 0.0})), PointOutside);
  REQUIRE_THROWS_AS(chord_times(cube, vec({0.0, 0.0}), vec({0.0, 0.0})), ZeroDirection);
  REQUIRE_THROWS_AS(chord_times(cube, vec({0.0, 0.0, 0.0}), vec({1.0, 0.0, 0.0})),
                    DimensionMismatch);

  HPolytope slab;
  slab.dimension = 2;
  slab.faces.push_back({vec({0.0, 1.0}), 1.0});
  REQUIRE_THROWS_AS(chord_times(ConvexBody{slab}, vec({0.0, 0.0}), vec({1.0, 0.0})),
                    ImproperBody);
}

TEST_CASE("membership") {
  const ConvexBody simplex = make_simplex(2);
  REQUIRE(contains(simplex, vec({0.2, 0.2})));
  REQUIRE_FALSE(contains(simplex, vec({0.6, 0.6})));
  REQUIRE_FALSE(contains(simplex, vec({0.0, 0.5})));  // boundary is outside
  REQUIRE_THROWS_AS(contains(simplex, vec({0.1, 0.1, 0.1})), DimensionMismatch);
}

TEST_CASE("bounding boxes") {
  const Box cube_box = bounding_box(make_cube(2, 0.5));
  REQUIRE(cube_box.min == vec({-0.5, -0.5}));
  REQUIRE(cube_box.max == vec({0.5, 0.5}));
  REQUIRE(cube_box.volume() == 1.0);

  Matrix shape(2, 2);
  shape << 4.0, 0.0, 0.0, 0.25;
  const Box ell_box = bounding_box(ConvexBody{Ellipsoid{vec({1.0, 2.0}), shape}});
  REQUIRE_THAT(ell_box.min[0], Catch::Matchers::WithinAbs(0.5, 1e-12));
  REQUIRE_THAT(ell_box.max[0], Catch::Matchers::WithinAbs(1.5, 1e-12));
  REQUIRE_THAT(ell_box.min[1], Catch::Matchers::WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(ell_box.max[1], Catch::Matchers::WithinAbs(4.0, 1e-12));

  const Box prod_box =
      bounding_box(ConvexBody{Product{{make_unit_ball(2), Interval{0.0, 3.0}}}});
  REQUIRE(prod_box.dim() == 3);
  REQUIRE(prod_box.min[2] == 0.0);
  REQUIRE(prod_box.max[2] == 3.0);

  REQUIRE_THROWS_AS(bounding_box(ConvexBody{Orthant{2}}), UnboundedBody);

  HPolytope no_box;
  no_box.dimension = 2;
  no_box.faces.push_back({vec({1.0, 0.0}), 1.0});
  REQUIRE_THROWS_AS(bounding_box(ConvexBody{no_box}), MissingBBox);

  // A declared box that misses part of the body is rejected by the probe.
  HPolytope lying = std::get<HPolytope>(make_cube(2).node());
  lying.bbox = Box{vec({-0.5, -0.5}), vec({0.5, 0.5})};
  REQUIRE_THROWS_AS(bounding_box(ConvexBody{lying}), InvalidBodySpec);
}

TEST_CASE("dilate composes and stays inside") {
  Matrix shape(2, 2);
  shape << 3.0, 0.5, 0.5, 1.0;
  const std::vector<ConvexBody> bodies = {
      make_cube(2), ConvexBody{Ellipsoid{vec({0.2, 0.1}), shape}},
      ConvexBody{Product{{make_unit_ball(2), Interval{-1.0, 1.0}}}}};
  for (const auto& body : bodies) {
    const Vector c = Vector::Zero(body.dim());
    const ConvexBody two_step = dilate(dilate(body, c, 0.5), c, 0.6);
    const ConvexBody one_step = dilate(body, c, 0.3);
    std::mt19937_64 rng = substream(15, 0);
    for (int trial = 0; trial < 50; ++trial) {
      Vector v(body.dim());
      for (int i = 0; i < v.size(); ++i) v[i] = gaussian(rng);
      const ChordTimes a = detail::chord_times_raw(two_step, c, v);
      const ChordTimes b = detail::chord_times_raw(one_step, c, v);
      REQUIRE_THAT(a.t_plus, Catch::Matchers::WithinRel(b.t_plus, 1e-12));
      REQUIRE_THAT(a.t_minus, Catch::Matchers::WithinRel(b.t_minus, 1e-12));
    }
    // Every sampled point of the dilation lies in the body.
    for (const auto& x : sample_uniform(one_step, 100, 16)) REQUIRE(contains(body, x));
  }
}

TEST_CASE("dilate of the orthant is the shifted orthant") {
  const ConvexBody orthant{Orthant{2}};
  const ConvexBody shrunk = dilate(orthant, vec({2.0, 4.0}), 0.5);
  REQUIRE(contains(shrunk, vec({1.1, 2.1})));
  REQUIRE_FALSE(contains(shrunk, vec({0.9, 2.1})));
  REQUIRE_FALSE(contains(shrunk, vec({1.1, 1.9})));
}

TEST_CASE("dilate validation") {
  const ConvexBody cube = make_cube(2);
  REQUIRE_THROWS_AS(dilate(cube, vec({0.0, 0.0}), 0.0), PreconditionError);
  REQUIRE_THROWS_AS(dilate(cube, vec({0.0, 0.0}), 1.0), PreconditionError);
  REQUIRE_THROWS_AS(dilate(cube, vec({2.0, 0.0}), 0.5), PointOutside);
}

TEST_CASE("uniform sampling stays inside and is reproducible") {
  const ConvexBody ball = make_unit_ball(2);
  const auto pts = sample_uniform(ball, 10000, 7);
  REQUIRE(pts.size() == 10000);
  for (const auto& p : pts) REQUIRE(contains(ball, p));

  const auto again = sample_uniform(ball, 10000, 7);
  for (std::size_t i = 0; i < pts.size(); ++i) REQUIRE(pts[i] == again[i]);

  const auto other = sample_uniform(ball, 10000, 8);
  REQUIRE(pts[0] != other[0]);
}

TEST_CASE("sampling is independent of the worker count") {
  const ConvexBody ball = make_unit_ball(2);
  setenv("HILBERT_WORKERS", "1", 1);
  const auto seq = sample_uniform(ball, 10000, 7);
  setenv("HILBERT_WORKERS", "3", 1);
  const auto par = sample_uniform(ball, 10000, 7);
  unsetenv("HILBERT_WORKERS");
  REQUIRE(seq.size() == par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) REQUIRE(seq[i] == par[i]);
}

TEST_CASE("sphere directions fill and return the same stream") {
  for (const int dim : {1, 2, 3, 5}) {
    std::mt19937_64 a = substream(20, 0);
    std::mt19937_64 b = substream(20, 0);
    Vector filled(dim);
    for (int trial = 0; trial < 100; ++trial) {
      sphere_direction(dim, a, filled);
      const Vector returned = sphere_direction(dim, b);
      REQUIRE(filled == returned);
      REQUIRE_THAT(filled.norm(), Catch::Matchers::WithinRel(1.0, 1e-12));
    }
  }
}

TEST_CASE("sampling stalls out on a needle body") {
  HPolytope needle = std::get<HPolytope>(make_cube(2, 1e-4).node());
  needle.bbox = Box{vec({-100.0, -100.0}), vec({100.0, 100.0})};
  REQUIRE_THROWS_AS(sample_uniform(ConvexBody{needle}, 10, 1), RejectionStall);
}

TEST_CASE("affine images of intervals and ellipsoids") {
  AffineMap flip;
  flip.linear = Matrix::Constant(1, 1, -2.0);
  flip.shift = vec({1.0});
  const ConvexBody img = affine_image(ConvexBody{Interval{-1.0, 1.0}}, flip);
  const auto& seg = std::get<Interval>(img.node());
  REQUIRE(seg.lo == -1.0);
  REQUIRE(seg.hi == 3.0);

  AffineMap stretch;
  stretch.linear = Matrix::Zero(2, 2);
  stretch.linear(0, 0) = 2.0;
  stretch.linear(1, 1) = 1.0;
  stretch.shift = vec({1.0, 0.0});
  const ConvexBody ell = affine_image(make_unit_ball(2), stretch);
  REQUIRE(contains(ell, vec({2.9, 0.0})));
  REQUIRE_FALSE(contains(ell, vec({3.1, 0.0})));
}

TEST_CASE("affine image preserves chord times") {
  Matrix lin(2, 2);
  lin << 1.0, 2.0, -0.5, 1.5;
  AffineMap map{lin, vec({0.3, -0.7})};
  const std::vector<ConvexBody> bodies = {make_cube(2), make_unit_ball(2),
                                          make_simplex(2)};
  std::mt19937_64 rng = substream(17, 0);
  for (const auto& body : bodies) {
    const ConvexBody image = affine_image(body, map);
    for (const auto& p : sample_uniform(body, 20, 18)) {
      Vector v(2);
      v[0] = gaussian(rng);
      v[1] = gaussian(rng);
      const ChordTimes a = chord_times(body, p, v);
      const Vector ip = map.linear * p + map.shift;
      const Vector iv = map.linear * v;
      const ChordTimes b = chord_times(image, ip, iv);
      REQUIRE_THAT(b.t_plus, Catch::Matchers::WithinRel(a.t_plus, 1e-9));
      REQUIRE_THAT(b.t_minus, Catch::Matchers::WithinRel(a.t_minus, 1e-9));
    }
  }
}

TEST_CASE("affine images of orthants and products") {
  const ConvexBody orthant{Orthant{2}};
  AffineMap perm;
  perm.linear = Matrix::Zero(2, 2);
  perm.linear(0, 1) = 2.0;
  perm.linear(1, 0) = 3.0;
  perm.shift = Vector::Zero(2);
  REQUIRE(std::holds_alternative<Orthant>(affine_image(orthant, perm).node()));

  AffineMap shifted = perm;
  shifted.shift = vec({1.0, 0.0});
  REQUIRE_THROWS_AS(affine_image(orthant, shifted), UnrepresentableImage);

  AffineMap negated;
  negated.linear = -Matrix::Identity(2, 2);
  negated.shift = Vector::Zero(2);
  REQUIRE_THROWS_AS(affine_image(orthant, negated), UnrepresentableImage);

  const ConvexBody prod = interval_square();
  AffineMap shear;
  shear.linear = Matrix::Identity(2, 2);
  shear.linear(0, 1) = 1.0;
  shear.shift = Vector::Zero(2);
  REQUIRE_THROWS_AS(affine_image(prod, shear), UnrepresentableImage);

  AffineMap blockwise;
  blockwise.linear = Matrix::Zero(2, 2);
  blockwise.linear(0, 0) = 2.0;
  blockwise.linear(1, 1) = 3.0;
  blockwise.shift = vec({0.5, -0.5});
  const ConvexBody img = affine_image(prod, blockwise);
  const auto& factors = std::get<Product>(img.node()).factors;
  REQUIRE(factors.size() == 2);
  REQUIRE(std::get<Interval>(factors[0].node()).lo == -1.5);
  REQUIRE(std::get<Interval>(factors[0].node()).hi == 2.5);

  AffineMap singular;
  singular.linear = Matrix::Zero(2, 2);
  singular.shift = Vector::Zero(2);
  REQUIRE_THROWS_AS(affine_image(prod, singular), PreconditionError);
}

TEST_CASE("rotated squares keep their extent") {
  const double c = std::cos(0.25 * 3.14159265358979323846);
  Matrix rot(2, 2);
  rot << c, -c, c, c;
  AffineMap map{rot, Vector::Zero(2)};
  const ConvexBody body = affine_image(make_cube(2), map);
  REQUIRE(contains(body, vec({1.2, 0.0})));
  REQUIRE_FALSE(contains(body, vec({1.5, 0.0})));
  const Box box = bounding_box(body);
  const double diag = std::sqrt(2.0);
  REQUIRE_THAT(box.max[0], Catch::Matchers::WithinAbs(diag, 1e-9));
  REQUIRE_THAT(box.min[1], Catch::Matchers::WithinAbs(-diag, 1e-9));
}

TEST_CASE("boundedness") {
  REQUIRE(is_bounded(make_cube(3)));
  REQUIRE_FALSE(is_bounded(ConvexBody{Orthant{2}}));
  REQUIRE_FALSE(is_bounded(ConvexBody{Product{{make_cube(2), Orthant{1}}}}));
  HPolytope open_slab;
  open_slab.dimension = 1;
  open_slab.faces.push_back({vec({1.0}), 1.0});
  REQUIRE_FALSE(is_bounded(ConvexBody{open_slab}));
}
