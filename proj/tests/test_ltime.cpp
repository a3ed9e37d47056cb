#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fracmax/errors.hpp"
#include "fracmax/ltime.hpp"

using namespace fracmax;
using doctest::Approx;

namespace {

SampledScene synthetic(std::size_t m, double diff) {
  SampledScene s;
  s.params = {1.0, 0.5};
  s.pts = ltime::make_grid(m);
  s.w1.assign(s.pts.size(), 0.3);
  s.w2.assign(s.pts.size(), 0.3 + diff);
  return s;
}

}  // namespace

TEST_CASE("grid layout") {
  const auto g = ltime::grid_points(8);
  CHECK(g.size() == 64);
  CHECK(g.front().x == Approx(-0.5 + 1.0 / 16));
  CHECK(g.back().y == Approx(0.5 - 1.0 / 16));
  for (Point p : g) CHECK(in_unit_square(p));
  CHECK_THROWS_AS(ltime::grid_points(4), InvalidArgument);
  CHECK(ltime::default_epsilon(64, 0.5) == Approx(0.125));
}

TEST_CASE("mollifier estimate on synthetic scenes") {
  const auto far = ltime::estimate_local_time(synthetic(16, 1.0), 16, 0.01);
  CHECK(far.value == Approx(std::exp(-50.0) / std::sqrt(2.0 * std::numbers::pi * 0.01)).epsilon(1e-12).scale(0.0));
  CHECK(far.value < 1e-20);
  const auto at = ltime::estimate_local_time(synthetic(16, 0.0), 16, 0.01);
  CHECK(at.value == Approx(3.98942).epsilon(1e-5));
  CHECK(at.grid_m == 16);
  CHECK(at.epsilon == 0.01);
}

TEST_CASE("missing or incomplete grids") {
  SampledScene s;
  s.params = {1.0, 0.5};
  s.pts = PointSet(std::vector<Point>{{0, 0}, {0.1, 0.1}}, PointRole::poisson);
  s.w1 = {0, 0};
  s.w2 = {0, 0};
  CHECK_THROWS_AS(ltime::estimate_local_time(s, 8, 0.1), MissingGrid);
  CHECK_THROWS_AS(ltime::occupation_histogram(s, 8, 0.1), MissingGrid);
  CHECK_THROWS_AS(ltime::estimate_local_time(synthetic(16, 0.0), 8, 0.1), MissingGrid);
}

TEST_CASE("occupation histogram") {
  const auto bins = ltime::occupation_histogram(synthetic(16, 0.0), 16, 0.2);
  REQUIRE(bins.size() == 1);
  CHECK(bins[0].mass == 1.0);
  CHECK(bins[0].lo == Approx(-0.1));
  CHECK(ltime::bin_density(bins) == Approx(5.0));

  SampledScene s = synthetic(32, 0.0);
  auto r = rng::substream(51, "hist");
  for (double& v : s.w2) v = r.normal();
  const auto spread = ltime::occupation_histogram(s, 32, 0.25);
  double total = 0.0;
  for (const auto& b : spread) total += b.mass;
  CHECK(total == Approx(1.0).epsilon(1e-15));
  std::ostringstream csv;
  ltime::write_histogram_csv(csv, spread);
  CHECK(csv.str().rfind("level,mass\n", 0) == 0);
}

TEST_CASE("estimate ignores grid order and vanishes far from the field") {
  SampledScene s = synthetic(16, 0.0);
  auto r = rng::substream(52, "perm");
  for (double& v : s.w2) v = 0.3 * r.normal();
  const double base = ltime::estimate_local_time(s, 16, 0.05).value;
  SampledScene rev = s;
  std::reverse(rev.w2.begin(), rev.w2.end());
  CHECK(ltime::estimate_local_time(rev, 16, 0.05).value == Approx(base).epsilon(1e-14));
  CHECK(ltime::estimate_local_time(s, 16, 0.05, 100.0).value < 1e-12);
}

TEST_CASE("mollifier and histogram estimators agree on sampled fields") {
  const std::size_t m = 64;
  const FieldParams p{1.0, 0.5};
  const PointSet grid = ltime::make_grid(m);
  const GaussianSampler sampler(p, grid);
  const double eps = ltime::default_epsilon(m, p.alpha);
  const double width = ltime::matched_bin_width(eps);
  double mollifier = 0.0, histogram = 0.0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    auto a = rng::substream(53, "lt-w1", {k}), b = rng::substream(53, "lt-w2", {k});
    const SampledScene s{p, grid, sampler.draw(a), sampler.draw(b)};
    mollifier += ltime::estimate_local_time(s, m, eps).value;
    histogram += ltime::bin_density(ltime::occupation_histogram(s, m, width));
  }
  CHECK(std::abs(histogram - mollifier) / mollifier < 0.10);
}
