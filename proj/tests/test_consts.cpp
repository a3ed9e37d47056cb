#include <doctest.h>

#include <cmath>

#include "fracmax/consts.hpp"
#include "fracmax/errors.hpp"
#include "fracmax/stats.hpp"

using namespace fracmax;
using namespace fracmax::consts;
using doctest::Approx;

namespace {

// Independent high-precision evaluations (mpmath), frozen.
constexpr double kInnerAt07 = -0.197347902373379;
constexpr double kF2Half = -0.174122637948;    // alpha 0.5, z 0.5
constexpr double kF2Two = -0.0997587567216;    // alpha 0.5, z 2
constexpr double kCV2_03 = -0.752174724099163;
constexpr double kCV2_05 = -0.755315651862064;
constexpr double kCV2_08 = -0.764484254965406;
constexpr double kCV2_049 = -0.755100825343698;
constexpr double kCV2_051 = -0.7555364544309;
// Flat importance sampling in numpy, 8e6 samples.
constexpr double kCV3_05 = -1.4916474570;
constexpr double kCV3_05_se = 0.0017770;

}  // namespace

TEST_CASE("inner Gaussian integral") {
  CHECK(inner_gaussian(0.7) == Approx(kInnerAt07).epsilon(1e-12));
  CHECK(inner_gaussian(-0.7) == inner_gaussian(0.7));
  CHECK(inner_gaussian(0.0) == 0.0);

  // against direct sampling of Psi_H2
  auto s = rng::substream(61, "inner");
  double sum = 0.0, sq = 0.0;
  const int n = 2'000'000;
  for (int i = 0; i < n; ++i) {
    const double v = stats::psi(stats::Functional::H2, s.normal(), s.normal(), 0.7);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n, se = std::sqrt((sq / n - mean * mean) / n);
  CHECK(std::abs(mean - kInnerAt07) < 4.0 * se);
}

TEST_CASE("F2 values, symmetry and decay") {
  CHECK(f2_of_z(0.5, 0.5).value == Approx(kF2Half).epsilon(1e-9));
  CHECK(f2_of_z(2.0, 0.5).value == Approx(kF2Two).epsilon(1e-9));
  for (double z : {0.1, 0.9, 3.0, 7.5})
    CHECK(std::abs(f2_of_z(z, 0.5).value - f2_of_z(-z, 0.5).value) < 1e-12);
  CHECK(f2_of_z(0.0, 0.5).value == 0.0);
  CHECK(std::abs(f2_of_z(20.0, 0.5).value) < 1e-8);
  const double zmax = choose_zmax(0.5);
  CHECK(zmax >= 12.0);
  CHECK(std::abs(f2_of_z(zmax, 0.5).value) < 1e-8);
}

TEST_CASE("F2 against Monte Carlo over typical edges") {
  auto s = rng::substream(62, "f2mc");
  double sum = 0.0, sq = 0.0;
  const int n = 2'000'000;
  for (int i = 0; i < n; ++i) {
    const double d = palm::sample_typical_cell(s).d12;
    const double v = stats::psi(stats::Functional::H2, s.normal(), s.normal(), 0.5 / std::pow(d, 0.25));
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n, se = std::sqrt((sq / n - mean * mean) / n);
  CHECK(std::abs(mean - kF2Half) < 4.0 * se);
}

TEST_CASE("c_V2 by quadrature") {
  const struct {
    double alpha, expected;
  } cases[] = {{0.3, kCV2_03}, {0.5, kCV2_05}, {0.8, kCV2_08}, {0.49, kCV2_049}, {0.51, kCV2_051}};
  for (const auto& c : cases) {
    CAPTURE(c.alpha);
    const double zmax = choose_zmax(c.alpha);
    const Estimate e = c_v2_quadrature(c.alpha, zmax);
    CHECK(e.value == Approx(c.expected).epsilon(1e-7));
    CHECK(e.error < 1e-6);
    CHECK(c_v2_quadrature(c.alpha, 2.0 * zmax).value == Approx(e.value).epsilon(1e-8));
  }
}

TEST_CASE("c_V2 by flat Monte Carlo") {
  auto s = rng::substream(63, "cv2mc");
  const Estimate e = c_v2_monte_carlo(0.5, s, 2'000'000);
  CHECK(std::abs(e.value - kCV2_05) / std::abs(kCV2_05) < 0.01);
  CHECK(std::abs(e.value - kCV2_05) < 4.0 * e.error);
}

TEST_CASE("sinh grid and trapezoid rule") {
  const auto z = sinh_grid(12.0, 41, 3.0);
  REQUIRE(z.size() == 41);
  CHECK(z.front() == Approx(-12.0));
  CHECK(z.back() == Approx(12.0));
  CHECK(z[20] == 0.0);
  for (std::size_t k = 0; k < z.size(); ++k) CHECK(z[k] == Approx(-z[40 - k]).epsilon(1e-14));
  const auto w = trapezoid_weights(z);
  double total = 0.0;
  for (double x : w) total += x;
  CHECK(total == Approx(24.0).epsilon(1e-14));
  CHECK_THROWS_AS(sinh_grid(12.0, 40, 3.0), InvalidArgument);

  // the grid used for F3 integrates F2 to 1e-3
  const double zmax = choose_zmax(0.5);
  const auto zz = sinh_grid(zmax, 41, 3.0);
  const auto ww = trapezoid_weights(zz);
  double est = 0.0;
  for (std::size_t k = 0; k < zz.size(); ++k) est += ww[k] * f2_of_z(zz[k], 0.5).value;
  CHECK(std::abs(est - kCV2_05) / std::abs(kCV2_05) < 1e-3);
}

TEST_CASE("F3 symmetry and decay") {
  auto a = rng::substream(64, "f3", {1}), b = rng::substream(64, "f3", {2});
  const Estimate plus = f3_of_z(0.8, 0.5, a, 200'000);
  const Estimate minus = f3_of_z(-0.8, 0.5, b, 200'000);
  CHECK(plus.value < 0.0);
  CHECK(std::abs(plus.value - minus.value) < 4.0 * std::hypot(plus.error, minus.error));
  auto c = rng::substream(64, "f3", {3});
  CHECK(std::abs(f3_of_z(40.0, 0.5, c, 100'000).value) < 1e-6);
}

TEST_CASE("F3 reduces to twice F2 for uncorrelated increments") {
  // With R = 0 Omega splits into two independent Psi_H2 terms.
  auto s = rng::substream(65, "omega0");
  double sum = 0.0;
  const int n = 400'000;
  for (int i = 0; i < n; ++i) {
    const double x1 = s.normal(), x2 = s.normal(), y1 = s.normal(), y2 = s.normal();
    sum += stats::omega(x1, x2, y1, y2, 0.7, 0.7, 0.0) -
           stats::psi(stats::Functional::H2, x1, x2, 0.7) - stats::psi(stats::Functional::H2, y1, y2, 0.7);
  }
  CHECK(std::abs(sum / n) < 1e-12);
}

TEST_CASE("c_V3 estimators agree with the frozen oracle") {
  auto s = rng::substream(66, "cv3is");
  const Estimate is = c_v3_importance(0.5, s, 2'000'000);
  CHECK(std::abs(is.value - kCV3_05) < 4.0 * std::hypot(is.error, kCV3_05_se));

  ConstantsOptions opt;
  opt.f3_samples = 40'000;
  const Estimate tr = c_v3_trapezoid(0.5, 67, choose_zmax(0.5), opt);
  CHECK(std::abs(tr.value - kCV3_05) < 4.0 * std::hypot(tr.error, kCV3_05_se) + 2e-3);
  CHECK_THROWS_AS(c_v3_trapezoid(0.5, 67, 12.0, ConstantsOptions{.f3_samples = 100}), InvalidArgument);
}

TEST_CASE("constants report is reproducible and serializes") {
  ConstantsOptions opt;
  opt.nodes = 11;
  opt.f3_samples = 10'000;
  const ConstantsReport a = compute_constants(0.5, 5, opt);
  const ConstantsReport b = compute_constants(0.5, 5, opt);
  CHECK(a.c_v3.value == b.c_v3.value);
  CHECK(a.z_grid.size() == 11);
  nlohmann::json j = a;
  for (const char* key : {"alpha", "c_v2", "c_v2_err", "c_v2_method", "c_v3", "c_v3_err", "c_v3_method",
                          "zmax", "z_grid", "seed"})
    CHECK(j.contains(key));
  const ConstantsReport back = j.get<ConstantsReport>();
  CHECK(back.c_v3.value == a.c_v3.value);
  CHECK(back.z_grid.size() == a.z_grid.size());
  CHECK_THROWS_AS(compute_constants(1.2, 5, opt), InvalidArgument);
  CHECK(parse_labeling(to_string(CellLabeling::exchangeable)) == CellLabeling::exchangeable);
  CHECK(parse_phi2("paper") == Phi2Normalization::paper);
  CHECK_THROWS_AS(parse_phi2("other"), ConfigError);
}
