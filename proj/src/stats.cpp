#include "fracmax/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracmax/errors.hpp"

namespace fracmax::stats {

namespace {

// Neumaier summation; the decomposition identity is checked at 1e-9.
class Accumulator {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double field_value(const SampledScene& scene, std::size_t i, Which which) noexcept {
  switch (which) {
    case Which::w1: return scene.w1[i];
    case Which::w2: return scene.w2[i];
    case Which::wmax: return scene.w_max(i);
  }
  return 0.0;
}

double scale_of(const SampledScene& scene, std::size_t a, std::size_t b) noexcept {
  return scene.params.sigma() * std::pow(distance(scene.pts[a], scene.pts[b]), 0.5 * scene.params.alpha);
}

void check_scene(const SampledScene& scene) {
  if (scene.w1.size() != scene.pts.size() || scene.w2.size() != scene.pts.size())
    throw InvalidArgument("scene values do not match its point set");
}

struct TriangleGeometry {
  double s12 = 0.0;
  double s13 = 0.0;
  double r = 0.0;
  bool degenerate = false;
};

TriangleGeometry triangle_geometry(const SampledScene& scene, const geom::TriIdx& t) {
  const double alpha = scene.params.alpha;
  const Point p1 = scene.pts[t[0]], p2 = scene.pts[t[1]], p3 = scene.pts[t[2]];
  const double d12 = distance(p1, p2), d13 = distance(p1, p3), d23 = distance(p2, p3);
  TriangleGeometry g;
  g.r = corr_r_unchecked(d12, d13, d23, alpha);
  g.degenerate = !(std::abs(g.r) < 1.0 - kDegenerateGap);
  g.s12 = scene.params.sigma() * std::pow(d12, 0.5 * alpha);
  g.s13 = scene.params.sigma() * std::pow(d13, 0.5 * alpha);
  return g;
}

}  // namespace

double psi(Functional f, double x, double y, double w) noexcept {
  const double gap = x - y;
  if (w < 0.0) {
    if (gap <= w) return apply(f, y + w) - apply(f, x);
    return 0.0;
  }
  if (w <= gap) return apply(f, x - w) - apply(f, y);
  return 0.0;
}

double corr_r_unchecked(double d12, double d13, double d23, double alpha) noexcept {
  return (std::pow(d12, alpha) + std::pow(d13, alpha) - std::pow(d23, alpha)) /
         (2.0 * std::pow(d12 * d13, 0.5 * alpha));
}

double corr_r(double d12, double d13, double d23, double alpha) {
  if (!(d12 > 0.0 && d13 > 0.0 && d23 > 0.0))
    throw DegenerateTriangle("side lengths must be positive");
  const double r = corr_r_unchecked(d12, d13, d23, alpha);
  if (!(std::abs(r) < 1.0 - kDegenerateGap))
    throw DegenerateTriangle("|R| = " + std::to_string(r) + " too close to 1");
  return r;
}

double quadratic_form(double u, double v, double r) {
  return (u * u + v * v - 2.0 * r * u * v) / (1.0 - r * r) - 2.0;
}

double hermite_expanded_form(double u, double v, double r) {
  return (h2(u) + h2(v) - 2.0 * r * u * v) / (1.0 - r * r);
}

double omega(double u1, double v1, double u2, double v2, double w1, double w2, double r) {
  if (!(std::abs(r) < 1.0 - kDegenerateGap))
    throw NumericalGuard("omega needs |r| < 1, got " + std::to_string(r));
  const double inv = 1.0 / (1.0 - r * r);
  const double cross = 2.0 * r * inv;
  const double i1 = psi(Functional::I, u1, v1, w1);
  const double i2 = psi(Functional::I, u2, v2, w2);
  double value = inv * (psi(Functional::H2, u1, v1, w1) + psi(Functional::H2, u2, v2, w2)) -
                 cross * i1 * i2;
  if (w1 < 0.0)
    value -= cross * (u1 * i2 + u2 * i1);
  else
    value -= cross * (v1 * i2 + v2 * i1);
  return value;
}

double identity_residual(double lhs, const Parts& parts) noexcept {
  const double denom = std::max({std::abs(lhs),
                                 std::abs(parts.v1) + std::abs(parts.v2) + std::abs(parts.v21),
                                 1.0});
  return std::abs(lhs - parts.total()) / denom;
}

double v2_statistic(const SampledScene& scene, const geom::OrderedSelection& sel, Which which) {
  check_scene(scene);
  if (sel.e_n.empty()) throw EmptySelection("no edges anchored in the unit square");
  Accumulator acc;
  for (const auto& e : sel.e_n) {
    const double u =
        (field_value(scene, e[1], which) - field_value(scene, e[0], which)) / scale_of(scene, e[0], e[1]);
    acc.add(h2(u));
  }
  return acc.value() / std::sqrt(static_cast<double>(sel.e_n.size()));
}

Decomposition v2_decomposition(const SampledScene& scene, const geom::OrderedSelection& sel) {
  check_scene(scene);
  if (sel.e_n.empty()) throw EmptySelection("no edges anchored in the unit square");
  Accumulator a1, a2, a21;
  Decomposition out;
  for (const auto& e : sel.e_n) {
    const double s = scale_of(scene, e[0], e[1]);
    const double x = (scene.w1[e[1]] - scene.w1[e[0]]) / s;
    const double y = (scene.w2[e[1]] - scene.w2[e[0]]) / s;
    const double gap = scene.w_diff(e[0]);
    if (gap == 0.0) ++out.ties;
    if (gap < 0.0)
      a1.add(h2(x));
    else
      a2.add(h2(y));
    a21.add(psi(Functional::H2, x, y, gap / s));
  }
  out.used = sel.e_n.size();
  const double norm = 1.0 / std::sqrt(static_cast<double>(out.used));
  out.parts = {a1.value() * norm, a2.value() * norm, a21.value() * norm};
  return out;
}

double v3_statistic(const SampledScene& scene, const geom::OrderedSelection& sel, Which which) {
  check_scene(scene);
  Accumulator acc;
  std::size_t used = 0;
  for (const auto& t : sel.dt_n) {
    const TriangleGeometry g = triangle_geometry(scene, t);
    if (g.degenerate) continue;
    const double f1 = field_value(scene, t[0], which);
    const double u = (field_value(scene, t[1], which) - f1) / g.s12;
    const double v = (field_value(scene, t[2], which) - f1) / g.s13;
    acc.add(quadratic_form(u, v, g.r));
    ++used;
  }
  if (used == 0) throw EmptySelection("no non-degenerate triangles anchored in the unit square");
  return acc.value() / std::sqrt(static_cast<double>(used));
}

Decomposition v3_decomposition(const SampledScene& scene, const geom::OrderedSelection& sel) {
  check_scene(scene);
  Accumulator a1, a2, a21;
  Decomposition out;
  for (const auto& t : sel.dt_n) {
    const TriangleGeometry g = triangle_geometry(scene, t);
    if (g.degenerate) {
      ++out.dropped;
      continue;
    }
    const double u1 = (scene.w1[t[1]] - scene.w1[t[0]]) / g.s12;
    const double v1 = (scene.w2[t[1]] - scene.w2[t[0]]) / g.s12;
    const double u2 = (scene.w1[t[2]] - scene.w1[t[0]]) / g.s13;
    const double v2 = (scene.w2[t[2]] - scene.w2[t[0]]) / g.s13;
    const double gap = scene.w_diff(t[0]);
    if (gap == 0.0) ++out.ties;
    if (gap < 0.0)
      a1.add(quadratic_form(u1, u2, g.r));
    else
      a2.add(quadratic_form(v1, v2, g.r));
    a21.add(omega(u1, v1, u2, v2, gap / g.s12, gap / g.s13, g.r));
    ++out.used;
  }
  if (out.used == 0) throw EmptySelection("no non-degenerate triangles anchored in the unit square");
  const double norm = 1.0 / std::sqrt(static_cast<double>(out.used));
  out.parts = {a1.value() * norm, a2.value() * norm, a21.value() * norm};
  return out;
}

Scaled scaled_statistics(const IncrementReport& report, double n, double alpha) {
  if (!(n > 0.0)) throw InvalidArgument("intensity must be positive");
  const double f = std::pow(n, -(2.0 - alpha) / 4.0);
  return {std::sqrt(3.0) / 3.0 * f * report.v2_max, std::sqrt(2.0) / 2.0 * f * report.v3_max};
}

IncrementReport increment_report(const SampledScene& scene, const geom::OrderedSelection& sel,
                                 double n) {
  IncrementReport r;
  r.v2_max = v2_statistic(scene, sel, Which::wmax);
  r.v3_max = v3_statistic(scene, sel, Which::wmax);
  const Decomposition d2 = v2_decomposition(scene, sel);
  const Decomposition d3 = v3_decomposition(scene, sel);
  r.v2_parts = d2.parts;
  r.v3_parts = d3.parts;
  r.edges = sel.e_n.size();
  r.triangles = sel.dt_n.size();
  r.dropped_triangles = d3.dropped;
  r.ties = d2.ties;
  r.scaled = scaled_statistics(r, n, scene.params.alpha);
  return r;
}

void to_json(nlohmann::json& j, const IncrementReport& r) {
  j = nlohmann::json{{"v2_max", r.v2_max},
                     {"v3_max", r.v3_max},
                     {"v2_parts", r.v2_parts.as_array()},
                     {"v3_parts", r.v3_parts.as_array()},
                     {"counts", {{"edges", r.edges}, {"triangles", r.triangles}}},
                     {"dropped_triangles", r.dropped_triangles},
                     {"scaled", {{"s2", r.scaled.s2}, {"s3", r.scaled.s3}}}};
}

void from_json(const nlohmann::json& j, IncrementReport& r) {
  r.v2_max = j.at("v2_max").get<double>();
  r.v3_max = j.at("v3_max").get<double>();
  const auto p2 = j.at("v2_parts").get<std::array<double, 3>>();
  const auto p3 = j.at("v3_parts").get<std::array<double, 3>>();
  r.v2_parts = {p2[0], p2[1], p2[2]};
  r.v3_parts = {p3[0], p3[1], p3[2]};
  r.edges = j.at("counts").at("edges").get<std::size_t>();
  r.triangles = j.at("counts").at("triangles").get<std::size_t>();
  r.dropped_triangles = j.at("dropped_triangles").get<std::size_t>();
  r.scaled = {j.at("scaled").at("s2").get<double>(), j.at("scaled").at("s3").get<double>()};
}

}  // namespace fracmax::stats
