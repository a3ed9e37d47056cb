#include "fracmax/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "fracmax/consts.hpp"
#include "fracmax/field.hpp"
#include "fracmax/geom.hpp"
#include "fracmax/palm.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fracmax::verify {

namespace {

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

}  // namespace

Check delaunay_bruteforce(std::uint64_t seed, int sets, int max_points) {
  Check c{"delaunay-bruteforce", true, ""};
  std::size_t violations = 0, mismatches = 0;
  for (int s = 0; s < sets; ++s) {
    rng::Stream stream = rng::substream(seed, "verify-delaunay", {static_cast<std::uint64_t>(s)});
    const int n = 3 + static_cast<int>(stream.uniform() * (max_points - 2));
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back({stream.uniform(), stream.uniform()});
    const PointSet set(std::move(pts));
    const geom::DelaunayComplex dt = geom::triangulate(set);
    violations += geom::count_circumdisk_violations(dt);
    if (geom::canonical_triangles(dt) != geom::brute_force_delaunay(set)) ++mismatches;
  }
  c.pass = violations == 0 && mismatches == 0;
  c.detail = fmt("%g sets, %g circumdisk violations, %g triangle-set mismatches", sets,
                 static_cast<double>(violations), static_cast<double>(mismatches));
  return c;
}

Check covariance_monte_carlo(std::uint64_t seed, int draws) {
  const FieldParams params{1.0, 0.5};
  const PointSet pts(std::vector<Point>{{0.1, 0.2}, {-0.3, 0.25}, {0.4, -0.1}});
  const Eigen::MatrixXd cov = build_covariance(params, pts);
  const GaussianSampler sampler(params, pts);
  rng::Stream stream = rng::substream(seed, "verify-covariance");
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(3, 3);
  for (int k = 0; k < draws; ++k) {
    const auto w = sampler.draw(stream);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) acc(i, j) += w[i] * w[j];
  }
  acc /= draws;
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double se = std::sqrt((cov(i, i) * cov(j, j) + cov(i, j) * cov(i, j)) / draws);
      worst = std::max(worst, std::abs(acc(i, j) - cov(i, j)) / se);
    }
  return {"covariance-monte-carlo", worst < 3.0,
          fmt("%g draws, max |z| = %.2f", draws, worst)};
}

Check palm_consistency(std::uint64_t seed, int samples) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const auto& fd = palm::EdgeLengthDensity::shared();
  const double mass = GK::integrate([&](double l) { return fd(l); }, 0.0, fd.ell_max(), 15, 1e-12) +
                      GK::integrate([](double l) { return palm::EdgeLengthDensity::exact(l); }, fd.ell_max(),
                                    2.0 * fd.ell_max(), 15, 1e-12);
  rng::Stream stream = rng::substream(seed, "verify-palm");
  double area = 0.0;
  for (int i = 0; i < samples; ++i) area += palm::sample_typical_cell(stream).area();
  area /= samples;
  return {"palm-consistency", std::abs(mass - 1.0) < 1e-3 && std::abs(area - 0.5) < 0.005,
          fmt("int f_D = %.8f, mean area = %.5f over %g cells", mass, area, samples)};
}

Check constants_dual_method(std::uint64_t seed, int samples, double rel_tol) {
  const double alpha = 0.5;
  double asym = 0.0;
  for (double z : {0.3, 1.0, 2.5, 5.0})
    asym = std::max(asym, std::abs(consts::f2_of_z(z, alpha).value - consts::f2_of_z(-z, alpha).value));
  const double zmax = consts::choose_zmax(alpha);
  const consts::Estimate quad = consts::c_v2_quadrature(alpha, zmax);
  rng::Stream stream = rng::substream(seed, "verify-cv2");
  const consts::Estimate mc = consts::c_v2_monte_carlo(alpha, stream, static_cast<std::size_t>(samples));
  const double rel = std::abs(quad.value - mc.value) / std::abs(quad.value);
  return {"constants-dual-method", asym < 1e-8 && rel < rel_tol,
          fmt("c_V2 quadrature %.6f, Monte Carlo %.6f (rel gap %.2e)", quad.value, mc.value, rel) +
              fmt(", F2 asymmetry %.1e", asym)};
}

bool run_all(std::uint64_t seed, bool fast, std::ostream& out) {
  std::vector<Check (*)(std::uint64_t, bool)> suites{
      [](std::uint64_t s, bool f) { return delaunay_bruteforce(s, f ? 10 : 50, f ? 60 : 200); },
      [](std::uint64_t s, bool f) { return covariance_monte_carlo(s, f ? 20'000 : 50'000); },
      [](std::uint64_t s, bool f) { return palm_consistency(s, f ? 200'000 : 1'000'000); },
      [](std::uint64_t s, bool f) { return constants_dual_method(s, f ? 1'000'000 : 4'000'000, 0.01); },
  };
  bool all = true;
  for (auto suite : suites) {
    const auto t0 = std::chrono::steady_clock::now();
    const Check c = suite(seed, fast);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << " [" << fmt("%.1f", secs) << " s]\n"
        << std::flush;
    all = all && c.pass;
  }
  return all;
}

}  // namespace fracmax::verify
