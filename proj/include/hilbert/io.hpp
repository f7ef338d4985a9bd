#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hilbert/body.hpp"
#include "hilbert/measure.hpp"
#include "hilbert/spectral.hpp"
#include "hilbert/verify.hpp"

namespace hilbert {

using json = nlohmann::json;

namespace detail {

inline Vector vector_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw InvalidBodySpec(std::string(what) + " must be a non-empty array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw InvalidBodySpec(std::string(what) + " must contain numbers");
    v[static_cast<int>(i)] = j[i].get<double>();
    if (!std::isfinite(v[static_cast<int>(i)]))
      throw InvalidBodySpec(std::string(what) + " must be finite");
  }
  return v;
}

}  // namespace detail

// Body description language: interval, hpolytope, ellipsoid, orthant and
// product, plus cube/simplex/ball sugar that expands to the core classes.
inline ConvexBody load_body(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw InvalidBodySpec("body spec must be an object with a \"type\" string");
  const std::string type = j["type"].get<std::string>();

  if (type == "interval") {
    if (!j.contains("min") || !j.contains("max") || !j["min"].is_number() ||
        !j["max"].is_number())
      throw InvalidBodySpec("interval needs numeric \"min\" and \"max\"");
    const double lo = j["min"].get<double>(), hi = j["max"].get<double>();
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
      throw InvalidBodySpec("interval needs finite min < max");
    return Interval{lo, hi};
  }

  if (type == "hpolytope") {
    if (!j.contains("dim") || !j["dim"].is_number_integer())
      throw InvalidBodySpec("hpolytope needs an integer \"dim\"");
    HPolytope b;
    b.dimension = j["dim"].get<int>();
    if (b.dimension < 1) throw InvalidBodySpec("hpolytope dimension must be positive");
    if (!j.contains("halfspaces") || !j["halfspaces"].is_array() ||
        j["halfspaces"].empty())
      throw InvalidBodySpec("hpolytope needs a non-empty \"halfspaces\" array");
    for (const auto& hj : j["halfspaces"]) {
      if (!hj.is_object() || !hj.contains("normal") || !hj.contains("offset") ||
          !hj["offset"].is_number())
        throw InvalidBodySpec("halfspace needs \"normal\" and numeric \"offset\"");
      Halfspace face;
      face.normal = detail::vector_from_json(hj["normal"], "halfspace normal");
      if (face.normal.size() != b.dimension)
        throw InvalidBodySpec("halfspace normal has the wrong dimension");
      if (face.normal.lpNorm<1>() == 0.0)
        throw InvalidBodySpec("halfspace normal must be nonzero");
      face.offset = hj["offset"].get<double>();
      if (!std::isfinite(face.offset))
        throw InvalidBodySpec("halfspace offset must be finite");
      b.faces.push_back(std::move(face));
    }
    if (j.contains("bbox")) {
      const auto& bj = j["bbox"];
      if (!bj.is_object() || !bj.contains("min") || !bj.contains("max"))
        throw InvalidBodySpec("bbox needs \"min\" and \"max\" arrays");
      Box box;
      box.min = detail::vector_from_json(bj["min"], "bbox min");
      box.max = detail::vector_from_json(bj["max"], "bbox max");
      if (box.min.size() != b.dimension || box.max.size() != b.dimension)
        throw InvalidBodySpec("bbox has the wrong dimension");
      for (int i = 0; i < b.dimension; ++i)
        if (!(box.min[i] < box.max[i]))
          throw InvalidBodySpec("bbox needs min < max in every coordinate");
      b.bbox = std::move(box);
    }
    return b;
  }

  if (type == "ellipsoid") {
    if (!j.contains("center") || !j.contains("shape") || !j["shape"].is_array())
      throw InvalidBodySpec("ellipsoid needs \"center\" and \"shape\"");
    Ellipsoid b;
    b.center = detail::vector_from_json(j["center"], "ellipsoid center");
    const int n = static_cast<int>(b.center.size());
    if (static_cast<int>(j["shape"].size()) != n)
      throw InvalidBodySpec("ellipsoid shape must be an n x n matrix");
    b.shape.resize(n, n);
    for (int i = 0; i < n; ++i) {
      const Vector row = detail::vector_from_json(j["shape"][i], "ellipsoid shape row");
      if (row.size() != n)
        throw InvalidBodySpec("ellipsoid shape must be an n x n matrix");
      b.shape.row(i) = row;
    }
    if ((b.shape - b.shape.transpose()).lpNorm<Eigen::Infinity>() >
        1e-12 * (1.0 + b.shape.lpNorm<Eigen::Infinity>()))
      throw InvalidBodySpec("ellipsoid shape must be symmetric");
    b.shape = 0.5 * (b.shape + b.shape.transpose()).eval();
    if (b.shape.llt().info() != Eigen::Success)
      throw InvalidBodySpec("ellipsoid shape must be positive definite");
    return b;
  }

  if (type == "orthant") {
    if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
      throw InvalidBodySpec("orthant needs a positive integer \"dim\"");
    return Orthant{j["dim"].get<int>()};
  }

  if (type == "product") {
    if (!j.contains("factors") || !j["factors"].is_array() || j["factors"].empty())
      throw InvalidBodySpec("product needs a non-empty \"factors\" array");
    Product b;
    for (const auto& fj : j["factors"]) b.factors.push_back(load_body(fj));
    return b;
  }

  if (type == "cube") {
    if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
      throw InvalidBodySpec("cube needs a positive integer \"dim\"");
    const double h = j.contains("halfwidth") ? j["halfwidth"].get<double>() : 1.0;
    if (!(h > 0.0) || !std::isfinite(h))
      throw InvalidBodySpec("cube halfwidth must be positive and finite");
    return make_cube(j["dim"].get<int>(), h);
  }

  if (type == "simplex") {
    if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
      throw InvalidBodySpec("simplex needs a positive integer \"dim\"");
    return make_simplex(j["dim"].get<int>());
  }

  if (type == "ball") {
    if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
      throw InvalidBodySpec("ball needs a positive integer \"dim\"");
    return make_unit_ball(j["dim"].get<int>());
  }

  throw InvalidBodySpec("unknown body type \"" + type + "\"");
}

inline ConvexBody load_body_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidBodySpec("cannot open body file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidBodySpec("cannot parse " + path + ": " + e.what());
  }
  return load_body(j);
}

// Shortest round-tripping form through to_chars: locale-free and
// byte-identical across runs. Non-finite values become quoted strings since
// JSON has no literal for them.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

// Streaming writer with deterministic key order (insertion order).
class JsonWriter {
 public:
  JsonWriter& begin_object() {
    separate();
    out_ += '{';
    fresh_.push_back(true);
    return *this;
  }
  JsonWriter& end_object() {
    out_ += '}';
    fresh_.pop_back();
    return *this;
  }
  JsonWriter& begin_array() {
    separate();
    out_ += '[';
    fresh_.push_back(true);
    return *this;
  }
  JsonWriter& end_array() {
    out_ += ']';
    fresh_.pop_back();
    return *this;
  }
  JsonWriter& key(std::string_view k) {
    separate();
    quote(k);
    out_ += ':';
    pending_value_ = true;
    return *this;
  }
  JsonWriter& value(double x) {
    separate();
    out_ += format_number(x);
    return *this;
  }
  JsonWriter& value(std::int64_t x) {
    separate();
    out_ += std::to_string(x);
    return *this;
  }
  JsonWriter& value(std::uint64_t x) {
    separate();
    out_ += std::to_string(x);
    return *this;
  }
  JsonWriter& value(bool x) {
    separate();
    out_ += x ? "true" : "false";
    return *this;
  }
  JsonWriter& value(std::string_view s) {
    separate();
    quote(s);
    return *this;
  }
  const std::string& str() const { return out_; }

 private:
  void separate() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!fresh_.empty()) {
      if (!fresh_.back()) out_ += ',';
      fresh_.back() = false;
    }
  }
  void quote(std::string_view s) {
    out_ += '"';
    for (const char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> fresh_;
  bool pending_value_ = false;
};

inline void write_json(JsonWriter& w, const ChordTimes& t) {
  w.begin_object();
  w.key("t_plus").value(t.t_plus);
  w.key("t_minus").value(t.t_minus);
  w.end_object();
}

inline void write_json(JsonWriter& w, const DensityValue& d) {
  w.begin_object();
  w.key("leb_tangent_ball").value(d.leb_tangent_ball);
  w.key("density").value(d.density);
  w.key("omega_n").value(d.omega_n);
  w.end_object();
}

inline void write_json(JsonWriter& w, const BallVolumeEstimate& e) {
  w.begin_object();
  w.key("value").value(e.value);
  w.key("std_error").value(e.std_error);
  w.key("n_accepted").value(e.n_accepted);
  w.key("sampling_region_volume").value(e.sampling_region_volume);
  w.end_object();
}

inline void write_json(JsonWriter& w, const EntropyEstimate& e) {
  w.begin_object();
  w.key("slope").value(e.slope);
  w.key("intercept").value(e.intercept);
  w.key("stderr_slope").value(e.stderr_slope);
  w.key("radii").begin_array();
  for (const double r : e.radii) w.value(r);
  w.end_array();
  w.key("log_volumes").begin_array();
  for (const double v : e.log_volumes) w.value(v);
  w.end_array();
  w.key("estimates").begin_array();
  for (const auto& est : e.estimates) write_json(w, est);
  w.end_array();
  w.end_object();
}

inline void write_json(JsonWriter& w, const RayleighResult& r) {
  w.begin_object();
  w.key("quotient").value(r.quotient);
  w.key("quotient_std_error").value(r.quotient_std_error);
  w.key("numerator").value(r.numerator);
  w.key("num_std_error").value(r.num_std_error);
  w.key("denominator").value(r.denominator);
  w.key("den_std_error").value(r.den_std_error);
  w.key("n_support").value(r.n_support);
  w.end_object();
}

inline void write_json(JsonWriter& w, const AmenabilityReport& r) {
  w.begin_object();
  w.key("factor_a");
  write_json(w, r.factor_a);
  w.key("factor_c");
  write_json(w, r.factor_c);
  w.key("product");
  write_json(w, r.product);
  w.key("bound").value(r.bound);
  w.key("bound_std_error").value(r.bound_std_error);
  w.key("slack").value(r.slack);
  w.key("holds").value(r.holds);
  w.end_object();
}

inline void write_json(JsonWriter& w, const SuiteReport& r) {
  w.begin_object();
  w.key("suite_name").value(std::string_view(r.suite_name));
  w.key("trials").value(r.trials);
  w.key("failures").value(r.failures);
  w.key("worst_violation").value(r.worst_violation);
  w.key("tolerance").value(r.tolerance);
  w.key("seed").value(r.seed);
  w.key("details").begin_array();
  for (const auto& d : r.details) w.value(std::string_view(d));
  w.end_array();
  w.end_object();
}

inline void write_json(JsonWriter& w, const AdditivityReport& r) {
  w.begin_object();
  w.key("factor_entropies").begin_array();
  for (const auto& e : r.factor_entropies) write_json(w, e);
  w.end_array();
  w.key("product_entropy");
  write_json(w, r.product_entropy);
  w.key("max_factor_slope").value(r.max_factor_slope);
  w.key("sum_factor_slopes").value(r.sum_factor_slopes);
  w.key("lower_consistent").value(r.lower_consistent);
  w.key("upper_consistent").value(r.upper_consistent);
  w.end_object();
}

// Per-radius rows of an entropy run; stderr is the relative error of the
// volume, which is the absolute error of its log.
inline std::string entropy_csv(const EntropyEstimate& e) {
  std::string out = "R,log_volume,stderr,n_accepted\n";
  for (std::size_t i = 0; i < e.radii.size(); ++i) {
    out += format_number(e.radii[i]);
    out += ',';
    out += format_number(e.log_volumes[i]);
    out += ',';
    out += format_number(e.estimates[i].std_error / e.estimates[i].value);
    out += ',';
    out += std::to_string(e.estimates[i].n_accepted);
    out += '\n';
  }
  return out;
}

}  // namespace hilbert
