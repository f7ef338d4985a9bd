#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hilbert/hilbert.hpp"

namespace {

hilbert::Vector to_vector(const std::vector<double>& vals) {
  hilbert::Vector x(static_cast<int>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) x[static_cast<int>(i)] = vals[i];
  return x;
}

// Directions recipe for a body of this dimension; 0 keeps the default count.
hilbert::QuadratureSpec quad_for(int dim, int count, std::uint64_t seed) {
  hilbert::QuadratureSpec spec = hilbert::default_quadrature(dim);
  if (count > 0) spec.count = count;
  spec.seed = seed;
  return spec;
}

hilbert::DensityMode parse_mode(const std::string& mode) {
  return mode == "product-approx" ? hilbert::DensityMode::product_approx
                                  : hilbert::DensityMode::exact;
}

void emit(const hilbert::JsonWriter& w) { std::cout << w.str() << '\n'; }

void emit_scalar(const char* key, double value) {
  hilbert::JsonWriter w;
  w.begin_object();
  w.key(key).value(value);
  w.end_object();
  emit(w);
}

std::vector<hilbert::ConvexBody> load_factors(const std::vector<std::string>& paths) {
  std::vector<hilbert::ConvexBody> factors;
  factors.reserve(paths.size());
  for (const auto& path : paths) factors.push_back(hilbert::load_body_file(path));
  return factors;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hilbert geometry of convex bodies: distances, Finsler norms, "
               "Busemann densities, metric-ball volumes and verification suites"};
  app.require_subcommand(1);

  std::string body_path, region_path, body_a_path, body_c_path;
  std::vector<std::string> factor_paths;
  std::vector<double> point_a, point_b, center_a, center_c;
  double ball_radius = 2.0, tent_radius = 1.0, tent_scale = 1.0, fd_step = 1e-4;
  double radius_a = 1.0, radius_c = 1.0, scale_a = 1.0, scale_c = 1.0;
  double incl_radius = 2.0, tol_override = 0.0;
  double r_min = 1.0, r_max = 4.0;
  int steps = 4, quad_count = 0;
  std::int64_t samples = 65536, trials = 200;
  std::uint64_t seed = 0;
  std::string mode = "exact", form = "lambda1", suite;
  bool csv = false;
  int exit_code = 0;

  const auto add_body = [&](CLI::App* sub) {
    sub->add_option("--body", body_path, "body spec file (JSON)")->required();
  };
  const auto add_point = [&](CLI::App* sub, const char* name, std::vector<double>& dst,
                             const char* help) {
    sub->add_option(name, dst, help)->required()->expected(-1)->delimiter(',');
  };
  const auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "random stream seed");
  };
  const auto add_quad = [&](CLI::App* sub) {
    sub->add_option("--quad", quad_count, "direction count for spherical averages");
  };
  const auto add_samples = [&](CLI::App* sub) {
    sub->add_option("--samples", samples, "Monte Carlo sample count");
  };
  const auto add_mode = [&](CLI::App* sub) {
    sub->add_option("--mode", mode, "density mode")
        ->check(CLI::IsMember({"exact", "product-approx"}));
  };

  auto* dist = app.add_subcommand("distance", "Hilbert distance between two points");
  add_body(dist);
  add_point(dist, "--from", point_a, "first point (coordinates, space or comma separated)");
  add_point(dist, "--to", point_b, "second point");
  dist->callback([&] {
    const hilbert::ConvexBody body = hilbert::load_body_file(body_path);
    emit_scalar("distance",
                hilbert::distance(body, to_vector(point_a), to_vector(point_b)));
  });

  auto* fn = app.add_subcommand("fnorm", "Finsler norm of a tangent vector");
  add_body(fn);
  add_point(fn, "--point", point_a, "base point");
  add_point(fn, "--dir", point_b, "tangent vector");
  fn->callback([&] {
    const hilbert::ConvexBody body = hilbert::load_body_file(body_path);
    emit_scalar("finsler_norm",
                hilbert::finsler_norm(body, to_vector(point_a), to_vector(point_b)));
  });

  auto* dual = app.add_subcommand("dualnorm", "dual Finsler norm of a covector");
  add_body(dual);
  add_point(dual, "--point", point_a, "base point");
  add_point(dual, "--covector", point_b, "covector");
  add_quad(dual);
  add_seed(dual);
  dual->callback([&] {
    const hilbert::ConvexBody body = hilbert::load_body_file(body_path);
    emit_scalar("dual_norm",
                hilbert::dual_norm(body, to_vector(point_a), to_vector(point_b),
                                   quad_for(body.dim(), quad_count, seed)));
  });

  auto* tb = app.add_subcommand("tangent-ball",
                                "Lebesgue volume of the unit Finsler ball at a point");
  add_body(tb);
  add_point(tb, "--point", point_a, "base point");
  add_quad(tb);
  add_seed(tb);
  tb->callback([&] {
    const hilbert::ConvexBody body = hilbert::load_body_file(body_path);
    emit_scalar("leb_tangent_ball",
                hilbert::tangent_ball_volume(body, to_vector(point_a),
                                             quad_for(body.dim(), quad_count, seed)));
  });

  auto* dens = app.add_subcommand("density", "Busemann density at a point");
  add_body(dens);
  add_point(dens, "--point", point_a, "base point");
  add_quad(dens);
  add_seed(dens);
  add_mode(dens);
  dens->callback([&] {
    const hilbert::ConvexBody body = hilbert::load_body_file(body_path);
    const hilbert::Vector p = to_vector(point_a);
    const hilbert::QuadratureSpec spec = quad_for(body.dim(), quad_count, seed);
    hilbert::DensityValue d;
    if (parse_mode(mode) == hilbert::DensityMode::exact) {
      d = hilbert::density(body, p, spec);
    } else {
      // Factor-ball surrogate; the implied tangent ball is the product of the
      // factor tangent balls.
      d.omega_n = hilbert::euclidean_ball_volume(body.dim());
      d.density = hilbert::product_density_approx(body, p, spec);
      d.leb_tangent_ball = d.omega_n / d.density;
    }
    hilbert::JsonWriter w;
    write_json(w, d);
    emit(w);
  });

  auto* bv = app.add_subcommand("ballvol", "volume of a Hilbert metric ball");
  add_body(bv);
  add_point(bv, "--center", point_a, "ball center");
  bv->add_option("--radius", ball_radius, "metric radius")->required();
  add_samples(bv);
  add_quad(bv);
  add_seed(bv);
  add_mode(bv);
  bv->callback([&] {
    const hilbert::ConvexBody body = hilbert::load_body_file(body_path);
    hilbert::SamplerSpec sampler;
    sampler.n_samples = samples;
    sampler.seed = seed;
    sampler.density_mode = parse_mode(mode);
    const hilbert::BallVolumeEstimate est = hilbert::metric_ball_volume(
        body, to_vector(point_a), ball_radius, sampler,
        quad_for(body.dim(), quad_count, seed));
    hilbert::JsonWriter w;
    write_json(w, est);
    emit(w);
  });

  auto* meas = app.add_subcommand(
      "measure", "Hilbert measure of a convex region inside a body");
  add_body(meas);
  meas->add_option("--region", region_path, "region spec file (JSON)")->required();
  add_samples(meas);
  add_quad(meas);
  add_seed(meas);
  add_mode(meas);
  meas->callback([&] {
    const hilbert::ConvexBody body = hilbert::load_body_file(body_path);
    const hilbert::ConvexBody region = hilbert::load_body_file(region_path);
    hilbert::SamplerSpec sampler;
    sampler.n_samples = samples;
    sampler.seed = seed;
    sampler.density_mode = parse_mode(mode);
    const hilbert::BallVolumeEstimate est = hilbert::hilbert_measure(
        body, region, sampler, quad_for(body.dim(), quad_count, seed));
    hilbert::JsonWriter w;
    write_json(w, est);
    emit(w);
  });

  auto* ent = app.add_subcommand(
      "entropy", "volume-entropy slope over a radius grid");
  add_body(ent);
  add_point(ent, "--center", point_a, "ball center");
  ent->add_option("--rmin", r_min, "smallest radius");
  ent->add_option("--rmax", r_max, "largest radius");
  ent->add_option("--steps", steps, "radius count");
  add_samples(ent);
  add_quad(ent);
  add_seed(ent);
  add_mode(ent);
  ent->add_flag("--csv", csv, "emit per-radius rows as CSV instead of JSON");
  ent->callback([&] {
    const hilbert::ConvexBody body = hilbert::load_body_file(body_path);
    hilbert::RadiusGrid grid;
    grid.r_min = r_min;
    grid.r_max = r_max;
    grid.steps = steps;
    hilbert::SamplerSpec sampler;
    sampler.n_samples = samples;
    sampler.seed = seed;
    sampler.density_mode = parse_mode(mode);
    const hilbert::EntropyEstimate est = hilbert::entropy_estimate(
        body, to_vector(point_a), grid, sampler,
        quad_for(body.dim(), quad_count, seed));
    if (csv) {
      std::cout << hilbert::entropy_csv(est);
      return;
    }
    hilbert::JsonWriter w;
    write_json(w, est);
    emit(w);
  });

  auto* ray = app.add_subcommand(
      "rayleigh", "Rayleigh quotient of a tent test function");
  add_body(ray);
  add_point(ray, "--center", point_a, "tent center");
  ray->add_option("--radius", tent_radius, "tent radius in the Hilbert metric");
  ray->add_option("--scale", tent_scale, "tent peak value");
  ray->add_option("--form", form, "quotient form")
      ->check(CLI::IsMember({"lambda1", "sobolev"}));
  ray->add_option("--fd-step", fd_step, "finite difference step");
  add_samples(ray);
  add_quad(ray);
  add_seed(ray);
  add_mode(ray);
  ray->callback([&] {
    const hilbert::ConvexBody body = hilbert::load_body_file(body_path);
    hilbert::Tent tent;
    tent.center = to_vector(point_a);
    tent.radius = tent_radius;
    tent.scale = tent_scale;
    hilbert::SamplerSpec sampler;
    sampler.n_samples = samples;
    sampler.seed = seed;
    sampler.density_mode = parse_mode(mode);
    const hilbert::RayleighResult res = hilbert::rayleigh_quotient(
        body, hilbert::TestFunction{tent},
        form == "sobolev" ? hilbert::QuotientForm::sobolev
                          : hilbert::QuotientForm::lambda1,
        sampler, quad_for(body.dim(), quad_count, seed), fd_step);
    hilbert::JsonWriter w;
    write_json(w, res);
    emit(w);
  });

  auto* amen = app.add_subcommand(
      "amenability-check",
      "tent-pair Sobolev quotient bound on a two-factor product");
  amen->add_option("--body-a", body_a_path, "first factor spec file")->required();
  amen->add_option("--body-c", body_c_path, "second factor spec file")->required();
  add_point(amen, "--center-a", center_a, "tent center on the first factor");
  add_point(amen, "--center-c", center_c, "tent center on the second factor");
  amen->add_option("--radius-a", radius_a, "first tent radius");
  amen->add_option("--radius-c", radius_c, "second tent radius");
  amen->add_option("--scale-a", scale_a, "first tent peak value");
  amen->add_option("--scale-c", scale_c, "second tent peak value");
  amen->add_option("--fd-step", fd_step, "finite difference step");
  add_samples(amen);
  add_quad(amen);
  add_seed(amen);
  amen->callback([&] {
    const hilbert::ConvexBody body_a = hilbert::load_body_file(body_a_path);
    const hilbert::ConvexBody body_c = hilbert::load_body_file(body_c_path);
    hilbert::Tent tent_a{to_vector(center_a), radius_a, scale_a};
    hilbert::Tent tent_c{to_vector(center_c), radius_c, scale_c};
    hilbert::SamplerSpec sampler;
    sampler.n_samples = samples;
    sampler.seed = seed;
    hilbert::QuadratureSpec spec;
    spec.seed = seed;
    if (quad_count > 0) spec.count = quad_count;
    const hilbert::AmenabilityReport rep = hilbert::product_amenability_check(
        body_a, body_c, hilbert::TestFunction{tent_a}, hilbert::TestFunction{tent_c},
        sampler, spec, fd_step);
    hilbert::JsonWriter w;
    write_json(w, rep);
    emit(w);
    if (!rep.holds) exit_code = 4;
  });

  auto* ver = app.add_subcommand("verify", "randomized property suites");
  ver->add_option("--suite", suite, "suite name")
      ->required()
      ->check(CLI::IsMember(
          {"sandwich", "distance", "density", "closed-forms", "axioms", "inclusions"}));
  ver->add_option("--body", body_path, "body spec file (axioms suite)");
  ver->add_option("--factors", factor_paths, "factor spec files (product suites)")
      ->expected(-1);
  ver->add_option("--radius", incl_radius, "ball radius (inclusions suite)");
  ver->add_option("--trials", trials, "trial count");
  add_quad(ver);
  add_seed(ver);
  CLI::Option* tol_opt = ver->add_option(
      "--tolerance", tol_override,
      "pass/fail threshold on the worst violation (default: the suite's own)");
  ver->callback([&] {
    hilbert::QuadratureSpec spec;
    spec.seed = seed;
    if (quad_count > 0) spec.count = quad_count;
    const auto need_factors = [&]() -> std::vector<hilbert::ConvexBody> {
      if (factor_paths.empty())
        throw CLI::ValidationError("verify", "suite " + suite + " needs --factors");
      return load_factors(factor_paths);
    };
    hilbert::SuiteReport rep;
    if (suite == "sandwich") {
      rep = hilbert::suite_finsler_sandwich(need_factors(), trials, seed);
    } else if (suite == "distance") {
      rep = hilbert::suite_distance_sandwich(need_factors(), trials, seed);
    } else if (suite == "density") {
      rep = hilbert::suite_density_sandwich(need_factors(), trials, seed, spec);
    } else if (suite == "closed-forms") {
      rep = hilbert::suite_closed_forms(trials, seed, spec);
    } else if (suite == "axioms") {
      if (body_path.empty())
        throw CLI::ValidationError("verify", "suite axioms needs --body");
      rep = hilbert::suite_metric_axioms(hilbert::load_body_file(body_path), trials,
                                         seed);
    } else {
      rep = hilbert::suite_ball_inclusions(need_factors(), incl_radius, trials, seed);
    }
    hilbert::JsonWriter w;
    write_json(w, rep);
    emit(w);
    // With an explicit threshold the verdict is on the worst violation, so a
    // suite can be held to a stricter (or looser) bar than its built-in one.
    const bool failed = tol_opt->count() > 0 ? rep.worst_violation > tol_override
                                             : rep.failures > 0;
    if (failed) exit_code = 4;
  });

  // 1: usage or precondition, 2: malformed body spec, 3: numeric breakdown,
  // 4: verification failed.
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const hilbert::BodySpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const hilbert::NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return exit_code;
}
