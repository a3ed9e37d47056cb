#include "fracmax/palm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fracmax/errors.hpp"

namespace fracmax::palm {

using std::numbers::pi;

double TypicalCellSample::area() const noexcept {
  const Point a = vertex(0), b = vertex(1), c = vertex(2);
  return 0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

namespace {

void fill_sides(TypicalCellSample& s) {
  s.d12 = s.r * distance(s.u[0], s.u[1]);
  s.d13 = s.r * distance(s.u[0], s.u[2]);
  s.d23 = s.r * distance(s.u[1], s.u[2]);
}

double unit_triangle_area(const std::array<Point, 3>& u) {
  return 0.5 * std::abs((u[1].x - u[0].x) * (u[2].y - u[0].y) -
                        (u[2].x - u[0].x) * (u[1].y - u[0].y));
}

}  // namespace

TypicalCellSample sample_typical_cell(rng::Stream& stream) {
  TypicalCellSample s;
  std::gamma_distribution<double> radius_sq(2.0, 1.0 / pi);
  s.r = std::sqrt(radius_sq(stream.engine()));
  for (;;) {
    for (Point& u : s.u) {
      const double t = 2.0 * pi * stream.uniform();
      u = {std::cos(t), std::sin(t)};
    }
    if (stream.uniform() * kMaxInscribedArea < unit_triangle_area(s.u)) break;
  }
  fill_sides(s);
  return s;
}

TypicalCellSample lex_ordered(const TypicalCellSample& sample) {
  std::array<std::size_t, 3> idx{0, 1, 2};
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return lex_less(sample.u[a], sample.u[b]);
  });
  TypicalCellSample out = sample;
  for (std::size_t i = 0; i < 3; ++i) out.u[i] = sample.u[idx[i]];
  fill_sides(out);
  return out;
}

SideLengths triangle_side_lengths(const TypicalCellSample& sample) {
  return {sample.d12, sample.d23, sample.d13};
}

TypicalCoupleSample couple_of(const TypicalCellSample& cell, CoupleAngle convention) {
  const Point u1 = cell.u[0], u2 = cell.u[1];
  double angle = std::atan2(u1.x * u2.y - u1.y * u2.x, u1.x * u2.x + u1.y * u2.y);
  if (convention == CoupleAngle::counterclockwise) {
    if (angle < 0.0) angle += 2.0 * pi;
  } else {
    angle = std::abs(angle);
  }
  double theta = std::asin(std::clamp(std::cos(0.5 * angle), -1.0, 1.0));
  // Only u1 == u2 exactly reaches pi/2; wrap it into the half-open range.
  if (theta >= 0.5 * pi) theta = -0.5 * pi;
  return {cell.d23, cell.d12, theta};
}

TypicalCoupleSample sample_typical_couple(rng::Stream& stream, CoupleAngle convention) {
  return couple_of(sample_typical_cell(stream), convention);
}

double chord_angle_density(double phi) {
  const double s = std::sin(0.5 * phi);
  const double c = std::cos(0.5 * phi);
  return 2.0 * s * (2.0 * s + (pi - phi) * c) / (6.0 * pi);
}

double circumradius_density(double r) {
  if (r <= 0.0) return 0.0;
  return 2.0 * pi * pi * r * r * r * std::exp(-pi * r * r);
}

struct EdgeLengthDensity::Spline {
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
};

double EdgeLengthDensity::exact(double ell) {
  if (!(ell > 0.0)) throw OutOfRange("edge length must be positive, got " + std::to_string(ell));
  // D = R * 2 sin(phi / 2); phi and R are independent.
  auto integrand = [ell](double phi) {
    const double chord = 2.0 * std::sin(0.5 * phi);
    if (chord <= 0.0) return 0.0;
    return chord_angle_density(phi) * circumradius_density(ell / chord) / chord;
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  return 2.0 * GK::integrate(integrand, 0.0, pi, 20, 1e-13);
}

EdgeLengthDensity::EdgeLengthDensity(Options options) : options_(options) {
  if (options_.nodes < 16 || !(options_.ell_max > 0.0))
    throw InvalidArgument("edge-length table needs >= 16 nodes and a positive range");
  step_ = options_.ell_max / static_cast<double>(options_.nodes);
  values_.resize(options_.nodes + 1);
  values_[0] = 0.0;
  for (std::size_t k = 1; k <= options_.nodes; ++k)
    values_[k] = exact(static_cast<double>(k) * step_);
  spline_ = std::make_unique<Spline>(
      Spline{{values_.data(), values_.size(), 0.0, step_}});

  using GL = boost::math::quadrature::gauss<double, 7>;
  cumulative_.resize(values_.size());
  cumulative_[0] = 0.0;
  for (std::size_t k = 1; k < values_.size(); ++k) {
    const double a = static_cast<double>(k - 1) * step_;
    cumulative_[k] = cumulative_[k - 1] + GL::integrate(spline_->spline, a, a + step_);
  }
}

EdgeLengthDensity::~EdgeLengthDensity() = default;

const EdgeLengthDensity& EdgeLengthDensity::shared() {
  static const EdgeLengthDensity table;
  return table;
}

double EdgeLengthDensity::operator()(double ell) const {
  if (!(ell > 0.0)) throw OutOfRange("edge length must be positive, got " + std::to_string(ell));
  if (ell > options_.ell_max) return exact(ell);
  return std::max(0.0, spline_->spline(ell));
}

double EdgeLengthDensity::cdf(double ell) const {
  if (ell <= 0.0) return 0.0;
  using GL = boost::math::quadrature::gauss<double, 7>;
  if (ell >= options_.ell_max) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double tail = GK::integrate([](double t) { return exact(t); }, options_.ell_max, ell);
    return std::min(1.0, cumulative_.back() + tail);
  }
  const auto k = static_cast<std::size_t>(ell / step_);
  const double a = static_cast<double>(k) * step_;
  return std::clamp(cumulative_[k] + GL::integrate(spline_->spline, a, ell), 0.0, 1.0);
}

}  // namespace fracmax::palm
