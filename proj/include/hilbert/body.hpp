#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "hilbert/errors.hpp"
#include "hilbert/rng.hpp"

namespace hilbert {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// Read-only view; binds to vectors, segments and expressions without copying.
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Box {
  Vector min;
  Vector max;

  int dim() const { return static_cast<int>(min.size()); }
  double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= max[i] - min[i];
    return v;
  }
};

// Open interval (lo, hi) on the line.
struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

// One face a.x < b.
struct Halfspace {
  Vector normal;
  double offset = 0.0;
};

// Intersection of open halfspaces. Boundedness is not decidable from the
// faces alone at this level, so bounded use requires a caller-supplied box
// that covers the body; the box is spot-checked before it is trusted.
struct HPolytope {
  int dimension = 0;
  std::vector<Halfspace> faces;
  std::optional<Box> bbox;
};

// (x - center)^T shape (x - center) < 1 with shape symmetric positive definite.
struct Ellipsoid {
  Vector center;
  Matrix shape;
};

// All coordinates strictly positive.
struct Orthant {
  int dimension = 0;
};

class ConvexBody;

struct Product {
  std::vector<ConvexBody> factors;
};

class ConvexBody {
 public:
  using Node = std::variant<Interval, HPolytope, Ellipsoid, Orthant, Product>;

  ConvexBody(Interval b) : node_(std::move(b)) {}
  ConvexBody(HPolytope b) : node_(std::move(b)) {}
  ConvexBody(Ellipsoid b) : node_(std::move(b)) {}
  ConvexBody(Orthant b) : node_(std::move(b)) {}
  ConvexBody(Product b) : node_(std::move(b)) {}

  const Node& node() const { return node_; }
  int dim() const;

 private:
  Node node_;
};

inline int ConvexBody::dim() const {
  struct Visitor {
    int operator()(const Interval&) const { return 1; }
    int operator()(const HPolytope& b) const { return b.dimension; }
    int operator()(const Ellipsoid& b) const { return static_cast<int>(b.center.size()); }
    int operator()(const Orthant& b) const { return b.dimension; }
    int operator()(const Product& b) const {
      int d = 0;
      for (const auto& f : b.factors) d += f.dim();
      return d;
    }
  };
  return std::visit(Visitor{}, node_);
}

namespace detail {

inline void require_dim(const ConvexBody& body, const VectorRef& p, const char* what) {
  if (body.dim() != p.size()) {
    throw DimensionMismatch(std::string(what) + ": point has dimension " +
                            std::to_string(p.size()) + ", body has dimension " +
                            std::to_string(body.dim()));
  }
}

}  // namespace detail

inline bool contains(const ConvexBody& body, const VectorRef& p);

namespace detail {

inline bool contains_at(const ConvexBody& body, const VectorRef& p, int offset) {
  struct Visitor {
    const VectorRef& p;
    int off;
    bool operator()(const Interval& b) const { return b.lo < p[off] && p[off] < b.hi; }
    bool operator()(const HPolytope& b) const {
      for (const auto& face : b.faces) {
        double dot = 0.0;
        for (int i = 0; i < b.dimension; ++i) dot += face.normal[i] * p[off + i];
        if (!(dot < face.offset)) return false;
      }
      return true;
    }
    bool operator()(const Ellipsoid& b) const {
      const int n = static_cast<int>(b.center.size());
      double q = 0.0;
      for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += b.shape(i, j) * (p[off + j] - b.center[j]);
        q += (p[off + i] - b.center[i]) * row;
      }
      return q < 1.0;
    }
    bool operator()(const Orthant& b) const {
      for (int i = 0; i < b.dimension; ++i)
        if (!(p[off + i] > 0.0)) return false;
      return true;
    }
    bool operator()(const Product& b) const {
      int o = off;
      for (const auto& f : b.factors) {
        if (!contains_at(f, p, o)) return false;
        o += f.dim();
      }
      return true;
    }
  };
  return std::visit(Visitor{p, offset}, body.node());
}

}  // namespace detail

// Strict interior membership.
inline bool contains(const ConvexBody& body, const VectorRef& p) {
  detail::require_dim(body, p, "contains");
  return detail::contains_at(body, p, 0);
}

// Exit times of the line t -> p + t v: t_plus is the first boundary hit
// forward, t_minus backward, +infinity when that ray never leaves.
struct ChordTimes {
  double t_plus = kInf;
  double t_minus = kInf;
};

namespace detail {

// Unvalidated chord times for interior p. A zero direction block yields
// (+inf, +inf), which is exactly what the product minimum rule needs.
inline ChordTimes chord_times_at(const ConvexBody& body, const VectorRef& p,
                                 const VectorRef& v, int offset) {
  struct Visitor {
    const VectorRef& p;
    const VectorRef& v;
    int off;
    ChordTimes operator()(const Interval& b) const {
      ChordTimes t;
      const double x = p[off], d = v[off];
      if (d > 0.0) {
        t.t_plus = (b.hi - x) / d;
        t.t_minus = (x - b.lo) / d;
      } else if (d < 0.0) {
        t.t_plus = (b.lo - x) / d;
        t.t_minus = (x - b.hi) / d;
      }
      return t;
    }
    ChordTimes operator()(const HPolytope& b) const {
      ChordTimes t;
      for (const auto& face : b.faces) {
        double s = 0.0, dot = 0.0;
        for (int i = 0; i < b.dimension; ++i) {
          s += face.normal[i] * v[off + i];
          dot += face.normal[i] * p[off + i];
        }
        const double slack = face.offset - dot;
        if (s > 0.0) {
          const double cand = slack / s;
          if (cand < t.t_plus) t.t_plus = cand;
        } else if (s < 0.0) {
          const double cand = slack / (-s);
          if (cand < t.t_minus) t.t_minus = cand;
        }
      }
      return t;
    }
    ChordTimes operator()(const Ellipsoid& b) const {
      const int n = static_cast<int>(b.center.size());
      // A t^2 + 2 B t + C = 0 along p + t v; the sign-dispatched root forms
      // avoid cancellation so both roots keep full relative accuracy.
      double A = 0.0, B = 0.0, C = -1.0;
      for (int i = 0; i < n; ++i) {
        double qv = 0.0, qw = 0.0;
        for (int j = 0; j < n; ++j) {
          const double q = b.shape(i, j);
          qv += q * v[off + j];
          qw += q * (p[off + j] - b.center[j]);
        }
        const double wi = p[off + i] - b.center[i];
        A += v[off + i] * qv;
        B += v[off + i] * qw;
        C += wi * qw;
      }
      ChordTimes t;
      if (A <= 0.0) return t;  // zero direction block
      const double s = std::sqrt(B * B - A * C);
      t.t_plus = (B <= 0.0) ? (s - B) / A : -C / (B + s);
      t.t_minus = (B >= 0.0) ? (s + B) / A : -C / (s - B);
      return t;
    }
    ChordTimes operator()(const Orthant& b) const {
      ChordTimes t;
      for (int i = 0; i < b.dimension; ++i) {
        const double x = p[off + i], d = v[off + i];
        if (d > 0.0) {
          const double cand = x / d;
          if (cand < t.t_minus) t.t_minus = cand;
        } else if (d < 0.0) {
          const double cand = x / (-d);
          if (cand < t.t_plus) t.t_plus = cand;
        }
      }
      return t;
    }
    ChordTimes operator()(const Product& b) const {
      ChordTimes t;
      int o = off;
      for (const auto& f : b.factors) {
        const ChordTimes ft = chord_times_at(f, p, v, o);
        if (ft.t_plus < t.t_plus) t.t_plus = ft.t_plus;
        if (ft.t_minus < t.t_minus) t.t_minus = ft.t_minus;
        o += f.dim();
      }
      return t;
    }
  };
  return std::visit(Visitor{p, v, offset}, body.node());
}

inline ChordTimes chord_times_raw(const ConvexBody& body, const VectorRef& p,
                                  const VectorRef& v) {
  return chord_times_at(body, p, v, 0);
}

// Chord times from a fixed interior base point. Binding hoists everything
// that does not depend on the direction (face slacks, the ellipsoid's base
// quadratic terms), so loops that shoot thousands of directions from one
// point pay only the direction-dependent work. Every term is accumulated in
// the same order as chord_times_at, so the times are bit-identical to the
// unbound visitor's.
class BoundChords {
 public:
  BoundChords(const ConvexBody& body, const VectorRef& p) { bind(body, p, 0); }

  ChordTimes times(const VectorRef& v) const {
    ChordTimes t;
    for (const auto& u : intervals_) {
      const double d = v[u.off];
      if (d > 0.0) {
        merge_plus(t, (u.hi - u.x) / d);
        merge_minus(t, (u.x - u.lo) / d);
      } else if (d < 0.0) {
        merge_plus(t, (u.lo - u.x) / d);
        merge_minus(t, (u.x - u.hi) / d);
      }
    }
    for (const auto& u : polys_) {
      const int faces = static_cast<int>(u.normals.cols());
      for (int f = 0; f < faces; ++f) {
        double s = 0.0;
        for (int i = 0; i < u.dim; ++i) s += u.normals(i, f) * v[u.off + i];
        if (s > 0.0) {
          merge_plus(t, u.slack[f] / s);
        } else if (s < 0.0) {
          merge_minus(t, u.slack[f] / (-s));
        }
      }
    }
    for (const auto& u : ellipsoids_) {
      double A = 0.0, B = 0.0;
      for (int i = 0; i < u.dim; ++i) {
        double qv = 0.0;
        for (int j = 0; j < u.dim; ++j) qv += u.shape(i, j) * v[u.off + j];
        A += v[u.off + i] * qv;
        B += v[u.off + i] * u.sw[i];
      }
      if (A <= 0.0) continue;  // zero direction block
      const double s = std::sqrt(B * B - A * u.c0);
      merge_plus(t, (B <= 0.0) ? (s - B) / A : -u.c0 / (B + s));
      merge_minus(t, (B >= 0.0) ? (s + B) / A : -u.c0 / (s - B));
    }
    for (const auto& u : orthants_) {
      for (int i = 0; i < u.dim; ++i) {
        const double x = u.x[i], d = v[u.off + i];
        if (d > 0.0) {
          merge_minus(t, x / d);
        } else if (d < 0.0) {
          merge_plus(t, x / (-d));
        }
      }
    }
    return t;
  }

 private:
  struct IntervalUnit {
    int off;
    double x, lo, hi;
  };
  struct PolyUnit {
    int off;
    int dim;
    Matrix normals;  // one face per column
    Vector slack;    // offset - normal . p per face
  };
  struct EllipsoidUnit {
    int off;
    int dim;
    Matrix shape;
    Vector sw;  // shape (p - center)
    double c0;  // (p - center)^T shape (p - center) - 1
  };
  struct OrthantUnit {
    int off;
    int dim;
    Vector x;
  };

  static void merge_plus(ChordTimes& t, double cand) {
    if (cand < t.t_plus) t.t_plus = cand;
  }
  static void merge_minus(ChordTimes& t, double cand) {
    if (cand < t.t_minus) t.t_minus = cand;
  }

  void bind(const ConvexBody& body, const VectorRef& p, int off) {
    struct Visitor {
      BoundChords& bc;
      const VectorRef& p;
      int off;
      void operator()(const Interval& b) const {
        bc.intervals_.push_back(IntervalUnit{off, p[off], b.lo, b.hi});
      }
      void operator()(const HPolytope& b) const {
        PolyUnit u;
        u.off = off;
        u.dim = b.dimension;
        const int faces = static_cast<int>(b.faces.size());
        u.normals.resize(b.dimension, faces);
        u.slack.resize(faces);
        for (int f = 0; f < faces; ++f) {
          double dot = 0.0;
          for (int i = 0; i < b.dimension; ++i) {
            u.normals(i, f) = b.faces[f].normal[i];
            dot += b.faces[f].normal[i] * p[off + i];
          }
          u.slack[f] = b.faces[f].offset - dot;
        }
        bc.polys_.push_back(std::move(u));
      }
      void operator()(const Ellipsoid& b) const {
        const int n = static_cast<int>(b.center.size());
        EllipsoidUnit u;
        u.off = off;
        u.dim = n;
        u.shape = b.shape;
        u.sw.resize(n);
        u.c0 = -1.0;
        for (int i = 0; i < n; ++i) {
          double qw = 0.0;
          for (int j = 0; j < n; ++j) qw += b.shape(i, j) * (p[off + j] - b.center[j]);
          u.sw[i] = qw;
          u.c0 += (p[off + i] - b.center[i]) * qw;
        }
        bc.ellipsoids_.push_back(std::move(u));
      }
      void operator()(const Orthant& b) const {
        OrthantUnit u;
        u.off = off;
        u.dim = b.dimension;
        u.x.resize(b.dimension);
        for (int i = 0; i < b.dimension; ++i) u.x[i] = p[off + i];
        bc.orthants_.push_back(std::move(u));
      }
      void operator()(const Product& b) const {
        int o = off;
        for (const auto& f : b.factors) {
          bc.bind(f, p, o);
          o += f.dim();
        }
      }
    };
    std::visit(Visitor{*this, p, off}, body.node());
  }

  std::vector<IntervalUnit> intervals_;
  std::vector<PolyUnit> polys_;
  std::vector<EllipsoidUnit> ellipsoids_;
  std::vector<OrthantUnit> orthants_;
};

}  // namespace detail

inline ChordTimes chord_times(const ConvexBody& body, const VectorRef& p,
                              const VectorRef& v) {
  detail::require_dim(body, p, "chord_times");
  if (v.size() != p.size())
    throw DimensionMismatch("chord_times: direction dimension differs from point");
  if (!detail::contains_at(body, p, 0)) throw PointOutside("chord_times: point not interior");
  bool all_zero = true;
  for (int i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) {
      all_zero = false;
      break;
    }
  if (all_zero) throw ZeroDirection("chord_times: zero direction");
  const ChordTimes t = detail::chord_times_raw(body, p, v);
  if (std::isinf(t.t_plus) && std::isinf(t.t_minus))
    throw ImproperBody("chord_times: line through point stays inside the body");
  return t;
}

inline bool is_bounded(const ConvexBody& body) {
  struct Visitor {
    bool operator()(const Interval&) const { return true; }
    bool operator()(const HPolytope& b) const { return b.bbox.has_value(); }
    bool operator()(const Ellipsoid&) const { return true; }
    bool operator()(const Orthant&) const { return false; }
    bool operator()(const Product& b) const {
      for (const auto& f : b.factors)
        if (!is_bounded(f)) return false;
      return true;
    }
  };
  return std::visit(Visitor{}, body.node());
}

namespace detail {

// Spot-check that the declared box really covers the polytope: sample a box
// inflated by half its width and reject the spec if any sampled body point
// falls outside the declared box.
inline void check_polytope_box(const HPolytope& b) {
  const Box& box = *b.bbox;
  const int n = b.dimension;
  Vector lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    const double w = box.max[i] - box.min[i];
    if (!(w >= 0.0) || !std::isfinite(w))
      throw InvalidBodySpec("polytope bbox has empty or non-finite extent");
    const double pad = 0.25 * w + 1e-9;
    lo[i] = box.min[i] - pad;
    hi[i] = box.max[i] + pad;
  }
  std::mt19937_64 rng = substream(0x626f78ull, static_cast<std::uint64_t>(n));
  Vector x(n);
  ConvexBody probe{HPolytope{b.dimension, b.faces, std::nullopt}};
  for (int trial = 0; trial < 1000; ++trial) {
    for (int i = 0; i < n; ++i) x[i] = uniform(rng, lo[i], hi[i]);
    if (!contains_at(probe, x, 0)) continue;
    for (int i = 0; i < n; ++i)
      if (x[i] < box.min[i] || x[i] > box.max[i])
        throw InvalidBodySpec("polytope bbox does not cover the body");
  }
}

}  // namespace detail

// Axis-aligned box covering the body.
inline Box bounding_box(const ConvexBody& body) {
  struct Visitor {
    Box operator()(const Interval& b) const {
      Box box;
      box.min = Vector::Constant(1, b.lo);
      box.max = Vector::Constant(1, b.hi);
      return box;
    }
    Box operator()(const HPolytope& b) const {
      if (!b.bbox) throw MissingBBox("bounding_box: polytope lacks a declared box");
      detail::check_polytope_box(b);
      return *b.bbox;
    }
    Box operator()(const Ellipsoid& b) const {
      const int n = static_cast<int>(b.center.size());
      // Extent along axis i is sqrt((shape^{-1})_ii).
      const Matrix inv = b.shape.llt().solve(Matrix::Identity(n, n));
      Box box;
      box.min.resize(n);
      box.max.resize(n);
      for (int i = 0; i < n; ++i) {
        const double r = std::sqrt(std::max(inv(i, i), 0.0));
        box.min[i] = b.center[i] - r;
        box.max[i] = b.center[i] + r;
      }
      return box;
    }
    Box operator()(const Orthant&) const {
      throw UnboundedBody("bounding_box: orthant is unbounded");
    }
    Box operator()(const Product& b) const {
      Box box;
      box.min.resize(0);
      box.max.resize(0);
      for (const auto& f : b.factors) {
        const Box fb = bounding_box(f);
        const int old = static_cast<int>(box.min.size());
        box.min.conservativeResize(old + fb.dim());
        box.max.conservativeResize(old + fb.dim());
        box.min.segment(old, fb.dim()) = fb.min;
        box.max.segment(old, fb.dim()) = fb.max;
      }
      return box;
    }
  };
  return std::visit(Visitor{}, body.node());
}

// Shrink the body toward an interior center by ratio in (0, 1). The image of
// K under x -> center + ratio (x - center), computed in closed form per class.
inline ConvexBody dilate(const ConvexBody& body, const VectorRef& center, double ratio) {
  detail::require_dim(body, center, "dilate");
  if (!(ratio > 0.0 && ratio < 1.0))
    throw PreconditionError("dilate: ratio must lie strictly between 0 and 1");
  if (!detail::contains_at(body, center, 0)) throw PointOutside("dilate: center not interior");

  struct Visitor {
    const VectorRef& c;
    double r;
    ConvexBody operator()(const Interval& b) const {
      return Interval{c[0] + r * (b.lo - c[0]), c[0] + r * (b.hi - c[0])};
    }
    ConvexBody operator()(const HPolytope& b) const {
      HPolytope out = b;
      for (auto& face : out.faces) {
        double dot = 0.0;
        for (int i = 0; i < b.dimension; ++i) dot += face.normal[i] * c[i];
        face.offset = r * face.offset + (1.0 - r) * dot;
      }
      if (out.bbox) {
        for (int i = 0; i < b.dimension; ++i) {
          out.bbox->min[i] = c[i] + r * (out.bbox->min[i] - c[i]);
          out.bbox->max[i] = c[i] + r * (out.bbox->max[i] - c[i]);
        }
      }
      return out;
    }
    ConvexBody operator()(const Ellipsoid& b) const {
      Ellipsoid out;
      out.center = c + r * (b.center - c);
      out.shape = b.shape / (r * r);
      return out;
    }
    ConvexBody operator()(const Orthant& b) const {
      // Image is a shifted orthant, which we carry as a polytope.
      HPolytope out;
      out.dimension = b.dimension;
      out.faces.reserve(b.dimension);
      for (int i = 0; i < b.dimension; ++i) {
        Halfspace face;
        face.normal = Vector::Zero(b.dimension);
        face.normal[i] = -1.0;
        face.offset = -(1.0 - r) * c[i];
        out.faces.push_back(std::move(face));
      }
      return out;
    }
    ConvexBody operator()(const Product& b) const {
      Product out;
      out.factors.reserve(b.factors.size());
      int off = 0;
      for (const auto& f : b.factors) {
        const int d = f.dim();
        out.factors.push_back(dilate(f, c.segment(off, d), r));
        off += d;
      }
      return out;
    }
  };
  return std::visit(Visitor{center, ratio}, body.node());
}

// y = linear x + shift with linear invertible.
struct AffineMap {
  Matrix linear;
  Vector shift;
};

inline ConvexBody affine_image(const ConvexBody& body, const AffineMap& map) {
  const int n = body.dim();
  if (map.linear.rows() != n || map.linear.cols() != n || map.shift.size() != n)
    throw DimensionMismatch("affine_image: map dimensions do not match the body");
  Eigen::FullPivLU<Matrix> lu(map.linear);
  if (!lu.isInvertible())
    throw PreconditionError("affine_image: linear part is singular");

  struct Visitor {
    const AffineMap& m;
    const Eigen::FullPivLU<Matrix>& lu;
    ConvexBody operator()(const Interval& b) const {
      const double a = m.linear(0, 0), t = m.shift[0];
      const double u = a * b.lo + t, w = a * b.hi + t;
      return Interval{std::min(u, w), std::max(u, w)};
    }
    ConvexBody operator()(const HPolytope& b) const {
      HPolytope out;
      out.dimension = b.dimension;
      out.faces.reserve(b.faces.size());
      const Matrix inv_t = lu.inverse().transpose();
      for (const auto& face : b.faces) {
        Halfspace img;
        img.normal = inv_t * face.normal;
        img.offset = face.offset + img.normal.dot(m.shift);
        out.faces.push_back(std::move(img));
      }
      if (b.bbox) {
        // Axis-aligned hull of the transformed box corners.
        const int n = b.dimension;
        Vector lo = Vector::Constant(n, kInf), hi = Vector::Constant(n, -kInf);
        Vector corner(n);
        for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
          for (int i = 0; i < n; ++i)
            corner[i] = (mask >> i) & 1 ? b.bbox->max[i] : b.bbox->min[i];
          const Vector img = m.linear * corner + m.shift;
          lo = lo.cwiseMin(img);
          hi = hi.cwiseMax(img);
        }
        out.bbox = Box{lo, hi};
      }
      return out;
    }
    ConvexBody operator()(const Ellipsoid& b) const {
      Ellipsoid out;
      out.center = m.linear * b.center + m.shift;
      const Matrix inv = lu.inverse();
      out.shape = inv.transpose() * b.shape * inv;
      // Symmetrize away the solve noise.
      out.shape = 0.5 * (out.shape + out.shape.transpose()).eval();
      return out;
    }
    ConvexBody operator()(const Orthant& b) const {
      const int n = b.dimension;
      for (int i = 0; i < n; ++i)
        if (m.shift[i] != 0.0)
          throw UnrepresentableImage("affine_image: orthant image is shifted");
      // Must be a positively scaled permutation to land back on the orthant.
      std::vector<bool> row_hit(n, false);
      for (int j = 0; j < n; ++j) {
        int nonzero = -1;
        for (int i = 0; i < n; ++i) {
          if (m.linear(i, j) == 0.0) continue;
          if (nonzero >= 0 || m.linear(i, j) < 0.0 || row_hit[i])
            throw UnrepresentableImage("affine_image: orthant image is not an orthant");
          nonzero = i;
          row_hit[i] = true;
        }
        if (nonzero < 0)
          throw UnrepresentableImage("affine_image: orthant image is not an orthant");
      }
      return b;
    }
    ConvexBody operator()(const Product& b) const {
      // The map must act blockwise on the factors.
      Product out;
      out.factors.reserve(b.factors.size());
      int off = 0;
      const int n = static_cast<int>(m.shift.size());
      for (const auto& f : b.factors) {
        const int d = f.dim();
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            const bool in_block = i >= off && i < off + d && j >= off && j < off + d;
            if (!in_block && (i >= off && i < off + d) != (j >= off && j < off + d) &&
                m.linear(i, j) != 0.0)
              throw UnrepresentableImage("affine_image: map mixes product factors");
          }
        AffineMap block;
        block.linear = m.linear.block(off, off, d, d);
        block.shift = m.shift.segment(off, d);
        out.factors.push_back(affine_image(f, block));
        off += d;
      }
      return out;
    }
  };
  return std::visit(Visitor{map, lu}, body.node());
}

// [-halfwidth, halfwidth]^dim as a polytope with its exact box.
inline ConvexBody make_cube(int dim, double halfwidth = 1.0) {
  HPolytope b;
  b.dimension = dim;
  b.faces.reserve(2 * static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    for (const double sign : {1.0, -1.0}) {
      Halfspace face;
      face.normal = Vector::Zero(dim);
      face.normal[i] = sign;
      face.offset = halfwidth;
      b.faces.push_back(std::move(face));
    }
  }
  b.bbox = Box{Vector::Constant(dim, -halfwidth), Vector::Constant(dim, halfwidth)};
  return b;
}

// {x > 0, sum x_i < 1} as a polytope with its exact box.
inline ConvexBody make_simplex(int dim) {
  HPolytope b;
  b.dimension = dim;
  b.faces.reserve(static_cast<std::size_t>(dim) + 1);
  for (int i = 0; i < dim; ++i) {
    Halfspace face;
    face.normal = Vector::Zero(dim);
    face.normal[i] = -1.0;
    face.offset = 0.0;
    b.faces.push_back(std::move(face));
  }
  Halfspace top;
  top.normal = Vector::Ones(dim);
  top.offset = 1.0;
  b.faces.push_back(std::move(top));
  b.bbox = Box{Vector::Zero(dim), Vector::Ones(dim)};
  return b;
}

inline ConvexBody make_unit_ball(int dim) {
  return Ellipsoid{Vector::Zero(dim), Matrix::Identity(dim, dim)};
}

}  // namespace hilbert
