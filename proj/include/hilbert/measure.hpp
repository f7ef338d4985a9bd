#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hilbert/body.hpp"
#include "hilbert/metric.hpp"
#include "hilbert/parallel.hpp"
#include "hilbert/quadrature.hpp"
#include "hilbert/sampling.hpp"

namespace hilbert {

struct SamplerSpec {
  std::int64_t n_samples = 65536;
  std::uint64_t seed = 0;
  DensityMode density_mode = DensityMode::exact;
};

struct BallVolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n_accepted = 0;
  double sampling_region_volume = 0.0;
};

namespace detail {

// Hilbert distance for points already known to be interior.
inline double distance_raw(const ConvexBody& body, const VectorRef& p, const VectorRef& q) {
  bool equal = true;
  for (int i = 0; i < p.size(); ++i)
    if (p[i] != q[i]) {
      equal = false;
      break;
    }
  if (equal) return 0.0;
  const Vector v = q - p;
  const ChordTimes t = chord_times_raw(body, p, v);
  if (std::isinf(t.t_plus) && std::isinf(t.t_minus))
    throw ImproperBody("distance: line through points stays inside the body");
  double sum = 0.0;
  if (!std::isinf(t.t_minus)) sum += std::log1p(1.0 / t.t_minus);
  if (!std::isinf(t.t_plus)) {
    const double past_q = t.t_plus - 1.0;
    if (past_q <= 0.0) return kInf;
    sum += std::log1p(1.0 / past_q);
  }
  return 0.5 * sum;
}

struct McMoments {
  double sum = 0.0;
  double sumsq = 0.0;
  std::int64_t accepted = 0;
  std::int64_t n = 0;

  void merge(const McMoments& o) {
    sum += o.sum;
    sumsq += o.sumsq;
    accepted += o.accepted;
    n += o.n;
  }
};

// Mean/variance accumulation of weight(x) over uniform box samples. chunk_offset
// shifts the substream ids so a run split into phases draws exactly the same
// numbers as one uninterrupted pass.
template <class Weight>
McMoments mc_box_moments(const Box& box, std::int64_t n, std::uint64_t seed,
                         std::int64_t chunk_offset, const Weight& weight) {
  return chunked_reduce<McMoments>(
      n, [&](std::int64_t chunk, std::int64_t begin, std::int64_t end) {
        std::mt19937_64 rng =
            substream(seed, static_cast<std::uint64_t>(chunk + chunk_offset));
        McMoments acc;
        const int d = box.dim();
        Vector x(d);
        for (std::int64_t i = begin; i < end; ++i) {
          for (int k = 0; k < d; ++k) x[k] = uniform(rng, box.min[k], box.max[k]);
          const double w = weight(x);
          if (w != 0.0) {
            acc.sum += w;
            acc.sumsq += w * w;
            ++acc.accepted;
          }
          ++acc.n;
        }
        return acc;
      });
}

inline BallVolumeEstimate finish_estimate(const McMoments& m, double box_volume) {
  BallVolumeEstimate e;
  e.sampling_region_volume = box_volume;
  e.n_accepted = m.accepted;
  const double n = static_cast<double>(m.n);
  const double mean = m.sum / n;
  const double var = std::max(0.0, m.sumsq / n - mean * mean);
  e.value = box_volume * mean;
  e.std_error = box_volume * std::sqrt(var / n);
  return e;
}

// The density integral over a region diverges iff the region reaches the
// body's boundary, so probe chords from an interior anchor: the region's exit
// time may never reach the body's.
inline void check_region_inside(const ConvexBody& body, const ConvexBody& region) {
  const Vector anchor = sample_uniform(region, 1, 0xd1full)[0];
  if (!contains_at(body, anchor, 0))
    throw RegionEscapesBody("sampling region is not contained in the body");
  std::mt19937_64 rng = substream(0x70726f6265ull, 0);
  const int dim = body.dim();
  for (int k = 0; k < 32; ++k) {
    const Vector u = sphere_direction(dim, rng);
    for (const double sign : {1.0, -1.0}) {
      const Vector v = sign * u;
      const double t_region = chord_times_raw(region, anchor, v).t_plus;
      const double t_body = chord_times_raw(body, anchor, v).t_plus;
      if (t_region > t_body * (1.0 + 1e-9) + 1e-12)
        throw RegionEscapesBody("sampling region is not contained in the body");
      if (std::isfinite(t_body) && t_region >= t_body - 1e-9 * (1.0 + t_body))
        throw DivergentIntegral(
            "sampling region touches the boundary; the density integral diverges");
    }
  }
}

}  // namespace detail

// Hilbert measure of a region strictly inside the body: integral of the
// Busemann density over the region by uniform box sampling.
inline BallVolumeEstimate hilbert_measure(const ConvexBody& body, const ConvexBody& region,
                                          const SamplerSpec& sampler,
                                          const QuadratureSpec& quad) {
  if (body.dim() != region.dim())
    throw DimensionMismatch("hilbert_measure: region dimension differs from body");
  if (sampler.n_samples < 1000)
    throw UnderSampled("hilbert_measure: need at least 1000 samples");
  detail::check_region_inside(body, region);
  const Box box = bounding_box(region);
  const DensityEvaluator ev(body, quad, sampler.density_mode);
  const auto weight = [&](const Vector& x) -> double {
    if (!detail::contains_at(region, x, 0)) return 0.0;
    if (!detail::contains_at(body, x, 0))
      throw RegionEscapesBody("sampled region point falls outside the body");
    return ev(x);
  };

  // First half of the chunk stream, then a divergence sanity check on its
  // relative error, then the rest; the split leaves the draws unchanged.
  const std::int64_t n = sampler.n_samples;
  const std::int64_t n_chunks = (n + kChunkSize - 1) / kChunkSize;
  const std::int64_t half_chunks = n_chunks / 2;
  const std::int64_t n1 = half_chunks * kChunkSize;
  detail::McMoments m = detail::mc_box_moments(box, n1, sampler.seed, 0, weight);
  if (m.n > 0 && m.sum > 0.0) {
    const BallVolumeEstimate first_half = detail::finish_estimate(m, box.volume());
    if (first_half.std_error > 10.0 * first_half.value)
      throw DivergentIntegral("hilbert_measure: estimate would not stabilize");
  }
  detail::McMoments m2 =
      detail::mc_box_moments(box, n - n1, sampler.seed, half_chunks, weight);
  m.merge(m2);
  return detail::finish_estimate(m, box.volume());
}

// Volume of the metric ball B(p, radius) in the Hilbert measure. The ball
// lies inside the body shrunk by tanh(radius + 1), so that dilation is the
// sampling region and the ball membership test is a distance evaluation.
inline BallVolumeEstimate metric_ball_volume(const ConvexBody& body, const VectorRef& p,
                                             double radius, const SamplerSpec& sampler,
                                             const QuadratureSpec& quad) {
  detail::require_dim(body, p, "metric_ball_volume");
  if (!detail::contains_at(body, p, 0))
    throw PointOutside("metric_ball_volume: center not interior");
  if (!(radius > 0.0)) throw PreconditionError("metric_ball_volume: radius must be positive");
  if (sampler.n_samples < 1000)
    throw UnderSampled("metric_ball_volume: need at least 1000 samples");
  const ConvexBody region = dilate(body, p, std::tanh(radius + 1.0));
  const Box box = bounding_box(region);
  const DensityEvaluator ev(body, quad, sampler.density_mode);
  const Vector center = p;
  const auto weight = [&](const Vector& x) -> double {
    if (!detail::contains_at(region, x, 0)) return 0.0;
    if (detail::distance_raw(body, center, x) > radius) return 0.0;
    return ev(x);
  };
  const detail::McMoments m =
      detail::mc_box_moments(box, sampler.n_samples, sampler.seed, 0, weight);
  return detail::finish_estimate(m, box.volume());
}

struct RadiusGrid {
  double r_min = 1.0;
  double r_max = 4.0;
  int steps = 4;
};

struct EntropyEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  std::vector<double> radii;
  std::vector<double> log_volumes;
  std::vector<BallVolumeEstimate> estimates;
};

namespace detail {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
};

inline LineFit ols_line(const std::vector<double>& x, const std::vector<double>& y) {
  const int m = static_cast<int>(x.size());
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (m > 2) {
    double rss = 0.0;
    for (int i = 0; i < m; ++i) {
      const double e = y[i] - fit.intercept - fit.slope * x[i];
      rss += e * e;
    }
    fit.stderr_slope = std::sqrt(rss / (m - 2)) / std::sqrt(sxx);
  }
  return fit;
}

}  // namespace detail

// Volume-entropy estimate: slope of log ball volume against radius over an
// even radius grid. Each radius gets its own substream, so enlarging the grid
// does not reshuffle earlier estimates.
inline EntropyEstimate entropy_estimate(const ConvexBody& body, const VectorRef& p,
                                        const RadiusGrid& grid, const SamplerSpec& sampler,
                                        const QuadratureSpec& quad) {
  if (grid.steps < 2) throw PreconditionError("entropy_estimate: need at least 2 radii");
  if (!(grid.r_min > 0.0 && grid.r_max > grid.r_min))
    throw PreconditionError("entropy_estimate: bad radius range");
  EntropyEstimate out;
  for (int i = 0; i < grid.steps; ++i) {
    const double r =
        grid.r_min + (grid.r_max - grid.r_min) * static_cast<double>(i) / (grid.steps - 1);
    SamplerSpec sub = sampler;
    sub.seed = mix(sampler.seed, static_cast<std::uint64_t>(i));
    const BallVolumeEstimate est = metric_ball_volume(body, p, r, sub, quad);
    if (!(est.value > 0.0))
      throw DegenerateFit("entropy_estimate: zero ball volume at radius " + std::to_string(r));
    out.radii.push_back(r);
    out.log_volumes.push_back(std::log(est.value));
    out.estimates.push_back(est);
  }
  const detail::LineFit fit = detail::ols_line(out.radii, out.log_volumes);
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.stderr_slope = fit.stderr_slope;
  return out;
}

struct AdditivityReport {
  std::vector<EntropyEstimate> factor_entropies;
  EntropyEstimate product_entropy;
  double max_factor_slope = 0.0;
  double sum_factor_slopes = 0.0;
  // Product entropy should land between the largest factor slope and the sum
  // of factor slopes; each flag allows three combined standard errors.
  bool lower_consistent = false;
  bool upper_consistent = false;
};

// Checks entropy additivity across a product: factors are measured with the
// exact density, the product with the factor-ball surrogate (whose sandwich
// constant is radius-free, so it cannot bend the slope).
inline AdditivityReport entropy_additivity_report(const std::vector<ConvexBody>& factors,
                                                  const VectorRef& base,
                                                  const RadiusGrid& factor_grid,
                                                  const RadiusGrid& product_grid,
                                                  const SamplerSpec& sampler,
                                                  const QuadratureSpec& quad) {
  if (factors.empty())
    throw PreconditionError("entropy_additivity_report: need at least one factor");
  AdditivityReport rep;
  int off = 0;
  double worst_factor_se = 0.0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const int d = factors[i].dim();
    SamplerSpec sub = sampler;
    sub.seed = mix(sampler.seed, 0xfac0ull + i);
    sub.density_mode = DensityMode::exact;
    const EntropyEstimate est = entropy_estimate(
        factors[i], base.segment(off, d), factor_grid, sub, adapt_quadrature(quad, d));
    rep.sum_factor_slopes += est.slope;
    if (i == 0 || est.slope > rep.max_factor_slope) rep.max_factor_slope = est.slope;
    if (est.stderr_slope > worst_factor_se) worst_factor_se = est.stderr_slope;
    rep.factor_entropies.push_back(est);
    off += d;
  }
  ConvexBody product{Product{factors}};
  SamplerSpec sub = sampler;
  sub.density_mode = DensityMode::product_approx;
  rep.product_entropy =
      entropy_estimate(product, base, product_grid, sub, quad);

  double sum_se2 = 0.0;
  for (const auto& est : rep.factor_entropies) sum_se2 += est.stderr_slope * est.stderr_slope;
  const double se_prod = rep.product_entropy.stderr_slope;
  const double lower_slack =
      3.0 * std::sqrt(se_prod * se_prod + worst_factor_se * worst_factor_se);
  const double upper_slack = 3.0 * std::sqrt(se_prod * se_prod + sum_se2);
  rep.lower_consistent = rep.product_entropy.slope >= rep.max_factor_slope - lower_slack;
  rep.upper_consistent = rep.product_entropy.slope <= rep.sum_factor_slopes + upper_slack;
  return rep;
}

}  // namespace hilbert
