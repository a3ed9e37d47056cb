#include "fracmax/consts.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fracmax/errors.hpp"
#include "fracmax/parallel.hpp"
#include "fracmax/stats.hpp"

namespace fracmax::consts {

using std::numbers::pi;

namespace {

class MeanAccumulator {
 public:
  void add(double x) noexcept {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }
  Estimate estimate(std::string method) const {
    const double n = static_cast<double>(n_);
    const double var = n_ > 1 ? m2_ / (n - 1.0) : 0.0;
    return {mean_, std::sqrt(var / n), std::move(method)};
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct CellDraw {
  double d1 = 0.0;
  double d3 = 0.0;
  double r = 0.0;
  bool degenerate = false;
};

CellDraw draw_cell(rng::Stream& stream, double alpha, CellLabeling labeling) {
  palm::TypicalCellSample cell = palm::sample_typical_cell(stream);
  if (labeling == CellLabeling::lexicographic) cell = palm::lex_ordered(cell);
  const palm::SideLengths s = palm::triangle_side_lengths(cell);
  CellDraw out{s.d1, s.d3, stats::corr_r_unchecked(s.d1, s.d3, s.d2, alpha), false};
  out.degenerate = !(std::abs(out.r) < 1.0 - stats::kDegenerateGap);
  return out;
}

double phi2_weight(double r, Phi2Normalization phi2) noexcept {
  return phi2 == Phi2Normalization::paper ? 1.0 / (1.0 - r * r) : 1.0;
}

std::uint64_t alpha_key(double alpha) noexcept { return std::bit_cast<std::uint64_t>(alpha); }

}  // namespace

double inner_gaussian(double w) {
  const double a = std::abs(w);
  const double pdf = std::exp(-0.25 * a * a) / std::sqrt(2.0 * pi);  // phi(a / sqrt2)
  const double tail = 0.5 * std::erfc(0.5 * a);                      // Phibar(a / sqrt2)
  return -a * (std::sqrt(2.0) * pdf - a * tail);
}

Estimate f2_of_z(double z, double alpha, const palm::EdgeLengthDensity& fd) {
  if (z == 0.0) return {0.0, 0.0, "nested-quadrature"};
  const double half = 0.5 * alpha;
  auto integrand = [&](double d) { return fd(d) * inner_gaussian(z * std::pow(d, -half)); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double err = 0.0;
  const double value = GK::integrate(integrand, 0.0, fd.ell_max(), 15, 1e-12, &err);
  if (!(err <= 1e-9) || !std::isfinite(value))
    throw QuadratureFailure("F2(" + std::to_string(z) + ") error estimate " + std::to_string(err));
  return {value, err, "nested-quadrature"};
}

double choose_zmax(double alpha, double start, double tol) {
  double z = start;
  for (int i = 0; i < 20; ++i, z *= 1.5)
    if (std::abs(f2_of_z(z, alpha).value) < tol) return z;
  throw QuadratureFailure("F2 does not decay below " + std::to_string(tol));
}

Estimate c_v2_quadrature(double alpha, double zmax) {
  double inner_err = 0.0;
  auto f = [&](double z) {
    const Estimate e = f2_of_z(z, alpha);
    inner_err = std::max(inner_err, e.error);
    return e.value;
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err = 0.0;
  const double half = GK::integrate(f, 0.0, zmax, 15, 1e-10, &err);
  return {2.0 * half, 2.0 * (err + zmax * inner_err), "nested-quadrature"};
}

Estimate c_v2_monte_carlo(double alpha, rng::Stream& stream, std::size_t samples) {
  MeanAccumulator acc;
  for (std::size_t i = 0; i < samples; ++i) {
    const palm::TypicalCellSample cell = palm::sample_typical_cell(stream);
    const double x = stream.normal();
    const double y = stream.normal();
    const double scale = std::pow(cell.d12, 0.5 * alpha);
    const double length = std::abs(x - y) * scale;
    const double z = stream.uniform() * (x - y) * scale;
    acc.add(length * stats::psi(stats::Functional::H2, x, y, z / scale));
  }
  return acc.estimate("flat-monte-carlo");
}

Estimate f3_of_z(double z, double alpha, rng::Stream& stream, std::size_t samples,
                 const F3Options& options) {
  MeanAccumulator acc;
  const double half = 0.5 * alpha;
  for (std::size_t i = 0; i < samples; ++i) {
    const CellDraw c = draw_cell(stream, alpha, options.labeling);
    const double g[4] = {stream.normal(), stream.normal(), stream.normal(), stream.normal()};
    if (c.degenerate) {
      acc.add(0.0);
      continue;
    }
    const double s = std::sqrt(1.0 - c.r * c.r);
    const double x1 = g[0], y1 = c.r * g[0] + s * g[1];
    const double x2 = g[2], y2 = c.r * g[2] + s * g[3];
    const double w1 = z / std::pow(c.d1, half);
    const double w2 = z / std::pow(c.d3, half);
    acc.add(stats::omega(x1, x2, y1, y2, w1, w2, c.r) * phi2_weight(c.r, options.phi2));
  }
  return acc.estimate("monte-carlo");
}

std::vector<double> sinh_grid(double zmax, std::size_t nodes, double lambda) {
  if (nodes < 3 || nodes % 2 == 0) throw InvalidArgument("z-grid needs an odd number >= 3 of nodes");
  if (!(zmax > 0.0) || !(lambda > 0.0)) throw InvalidArgument("z-grid needs zmax > 0 and lambda > 0");
  std::vector<double> z(nodes);
  const double denom = std::sinh(lambda);
  for (std::size_t k = 0; k < nodes; ++k) {
    const double t = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(nodes - 1);
    z[k] = zmax * std::sinh(lambda * t) / denom;
  }
  z[nodes / 2] = 0.0;
  return z;
}

std::vector<double> trapezoid_weights(const std::vector<double>& z) {
  std::vector<double> w(z.size(), 0.0);
  for (std::size_t k = 0; k + 1 < z.size(); ++k) {
    const double h = z[k + 1] - z[k];
    w[k] += 0.5 * h;
    w[k + 1] += 0.5 * h;
  }
  return w;
}

Estimate c_v3_trapezoid(double alpha, std::uint64_t seed, double zmax,
                        const ConstantsOptions& options, std::vector<GridNode>* grid) {
  if (options.f3_samples < 10'000) throw InvalidArgument("F3 needs at least 1e4 samples per node");
  const std::vector<double> z = sinh_grid(zmax, options.nodes, options.grid_lambda);
  const std::vector<double> w = trapezoid_weights(z);
  std::vector<GridNode> nodes(z.size());
  parallel_for(z.size(), options.workers, [&](std::size_t k) {
    rng::Stream stream = rng::substream(seed, "f3", {alpha_key(alpha), k});
    const Estimate f3 = f3_of_z(z[k], alpha, stream, options.f3_samples, options.f3);
    nodes[k] = {z[k], f2_of_z(z[k], alpha).value, f3.value, f3.error};
  });
  double value = 0.0, var = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    value += w[k] * nodes[k].f3;
    var += w[k] * w[k] * nodes[k].f3_err * nodes[k].f3_err;
  }
  if (grid) *grid = std::move(nodes);
  return {value, std::sqrt(var), "trapezoid-monte-carlo"};
}

Estimate c_v3_importance(double alpha, rng::Stream& stream, std::size_t samples,
                         const F3Options& options) {
  MeanAccumulator acc;
  const double half = 0.5 * alpha;
  for (std::size_t i = 0; i < samples; ++i) {
    const CellDraw c = draw_cell(stream, alpha, options.labeling);
    const double g[4] = {stream.normal(), stream.normal(), stream.normal(), stream.normal()};
    const double u = stream.uniform();
    if (c.degenerate) {
      acc.add(0.0);
      continue;
    }
    const double s = std::sqrt(1.0 - c.r * c.r);
    const double x1 = g[0], y1 = c.r * g[0] + s * g[1];
    const double x2 = g[2], y2 = c.r * g[2] + s * g[3];
    const double a1 = std::pow(c.d1, half), a3 = std::pow(c.d3, half);
    const double e1 = (x1 - x2) * a1, e3 = (y1 - y2) * a3;
    const double lo = std::min({0.0, e1, e3}), hi = std::max({0.0, e1, e3});
    const double length = hi - lo;
    if (length <= 0.0) {
      acc.add(0.0);
      continue;
    }
    const double z = lo + u * length;
    acc.add(length * stats::omega(x1, x2, y1, y2, z / a1, z / a3, c.r) * phi2_weight(c.r, options.phi2));
  }
  return acc.estimate("importance-monte-carlo");
}

ConstantsReport compute_constants(double alpha, std::uint64_t seed, const ConstantsOptions& options) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  ConstantsReport r;
  r.alpha = alpha;
  r.seed = seed;
  r.zmax = choose_zmax(alpha, options.zmax_start);
  r.c_v2 = c_v2_quadrature(alpha, r.zmax);
  r.c_v3 = c_v3_trapezoid(alpha, seed, r.zmax, options, &r.z_grid);
  return r;
}

void to_json(nlohmann::json& j, const ConstantsReport& r) {
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& g : r.z_grid)
    grid.push_back({{"z", g.z}, {"f2", g.f2}, {"f3", g.f3}, {"f3_err", g.f3_err}});
  j = nlohmann::json{{"alpha", r.alpha},
                     {"c_v2", r.c_v2.value},
                     {"c_v2_err", r.c_v2.error},
                     {"c_v2_method", r.c_v2.method},
                     {"c_v3", r.c_v3.value},
                     {"c_v3_err", r.c_v3.error},
                     {"c_v3_method", r.c_v3.method},
                     {"zmax", r.zmax},
                     {"z_grid", grid},
                     {"seed", r.seed}};
}

void from_json(const nlohmann::json& j, ConstantsReport& r) {
  r.alpha = j.at("alpha").get<double>();
  r.c_v2 = {j.at("c_v2").get<double>(), j.at("c_v2_err").get<double>(),
            j.value("c_v2_method", std::string("nested-quadrature"))};
  r.c_v3 = {j.at("c_v3").get<double>(), j.at("c_v3_err").get<double>(),
            j.value("c_v3_method", std::string("trapezoid-monte-carlo"))};
  r.zmax = j.value("zmax", 0.0);
  r.seed = j.value("seed", std::uint64_t{0});
  r.z_grid.clear();
  if (j.contains("z_grid"))
    for (const auto& g : j.at("z_grid"))
      r.z_grid.push_back({g.at("z").get<double>(), g.at("f2").get<double>(), g.at("f3").get<double>(),
                          g.at("f3_err").get<double>()});
}

std::string to_string(CellLabeling v) {
  return v == CellLabeling::lexicographic ? "lexicographic" : "exchangeable";
}

std::string to_string(Phi2Normalization v) {
  return v == Phi2Normalization::standard ? "standard" : "paper";
}

CellLabeling parse_labeling(const std::string& s) {
  if (s == "lexicographic") return CellLabeling::lexicographic;
  if (s == "exchangeable") return CellLabeling::exchangeable;
  throw ConfigError("unknown cell labeling '" + s + "'");
}

Phi2Normalization parse_phi2(const std::string& s) {
  if (s == "standard") return Phi2Normalization::standard;
  if (s == "paper") return Phi2Normalization::paper;
  throw ConfigError("unknown phi2 normalization '" + s + "'");
}

}  // namespace fracmax::consts
