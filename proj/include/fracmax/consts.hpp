#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracmax/palm.hpp"
#include "fracmax/rng.hpp"

namespace fracmax::consts {

struct Estimate {
  double value = 0.0;
  double error = 0.0;  ///< standard error or quadrature error estimate
  std::string method;
};

/// E[Psi_H2(X, Y, w)] for independent standard normals X, Y, in closed form:
/// -|w| (sqrt2 phi(w / sqrt2) - |w| Phibar(|w| / sqrt2)).
double inner_gaussian(double w);

/// F2(z) = int f_D(d) E[Psi_H2(X, Y, z d^{-a/2})] dd, by adaptive quadrature
/// over d. Throws QuadratureFailure if the error estimate exceeds 1e-9.
Estimate f2_of_z(double z, double alpha,
                 const palm::EdgeLengthDensity& fd = palm::EdgeLengthDensity::shared());

/// Smallest z >= start (grown by 1.5x) with |F2(z)| < tol.
double choose_zmax(double alpha, double start = 12.0, double tol = 1e-8);

/// c_V2 = int F2 over [-zmax, zmax] by nested adaptive quadrature.
Estimate c_v2_quadrature(double alpha, double zmax);

/// c_V2 by flat Monte Carlo over (z, X, Y, D): D drawn from typical cells, z
/// uniform on the window where Psi can be nonzero, weighted by its length.
Estimate c_v2_monte_carlo(double alpha, rng::Stream& stream, std::size_t samples);

/// How the typical triangle is labeled before the sides are read off.
enum class CellLabeling {
  lexicographic,  ///< x1 lexicographically smallest, as in DT_N
  exchangeable,   ///< labels as drawn
};

/// Normalization of the bivariate normal weight in F3.
enum class Phi2Normalization {
  standard,  ///< 1 / (2 pi sqrt(1 - R^2)): expectation under correlated normals
  paper,     ///< 1 / (2 pi (1 - R^2)): reweights each sample by 1 / (1 - R^2)
};

struct F3Options {
  CellLabeling labeling = CellLabeling::lexicographic;
  Phi2Normalization phi2 = Phi2Normalization::standard;
};

/// Monte Carlo estimate of F3(z) = E[Omega(X1, X2, Y1, Y2, z/D1^{a/2}, z/D3^{a/2}; R)],
/// with (X1, Y1) and (X2, Y2) independent normal pairs of correlation R(D1, D2, D3).
Estimate f3_of_z(double z, double alpha, rng::Stream& stream, std::size_t samples,
                 const F3Options& options = {});

/// Nodes of the symmetric grid zmax sinh(lambda t) / sinh(lambda), t uniform on [-1, 1].
std::vector<double> sinh_grid(double zmax, std::size_t nodes, double lambda);
/// Trapezoid weights for an ascending grid.
std::vector<double> trapezoid_weights(const std::vector<double>& z);

struct GridNode {
  double z = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;
  double f3_err = 0.0;
};

struct ConstantsOptions {
  std::size_t nodes = 41;
  std::size_t f3_samples = 1'000'000;
  double zmax_start = 12.0;
  double grid_lambda = 3.0;
  std::size_t workers = 1;
  F3Options f3;
};

/// c_V3 by the trapezoid rule over f3_of_z on a sinh grid; each node uses the
/// substream (seed, "f3", {node}). Fills `grid` when non-null.
Estimate c_v3_trapezoid(double alpha, std::uint64_t seed, double zmax,
                        const ConstantsOptions& options, std::vector<GridNode>* grid = nullptr);

/// c_V3 by one flat importance-sampling Monte Carlo: z uniform on the hull of
/// the two Psi windows, weighted by the hull length.
Estimate c_v3_importance(double alpha, rng::Stream& stream, std::size_t samples,
                         const F3Options& options = {});

struct ConstantsReport {
  double alpha = 0.5;
  std::uint64_t seed = 0;
  double zmax = 0.0;
  Estimate c_v2;
  Estimate c_v3;
  std::vector<GridNode> z_grid;
};

ConstantsReport compute_constants(double alpha, std::uint64_t seed,
                                  const ConstantsOptions& options = {});

void to_json(nlohmann::json& j, const ConstantsReport& r);
void from_json(const nlohmann::json& j, ConstantsReport& r);

std::string to_string(CellLabeling v);
std::string to_string(Phi2Normalization v);
CellLabeling parse_labeling(const std::string& s);
Phi2Normalization parse_phi2(const std::string& s);

}  // namespace fracmax::consts
