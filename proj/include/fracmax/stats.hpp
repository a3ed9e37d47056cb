#pragma once

#include <array>
#include <cstddef>

#include <json.hpp>

#include "fracmax/field.hpp"
#include "fracmax/geom.hpp"

namespace fracmax::stats {

/// H2(u) = u^2 - 1.
inline double h2(double u) noexcept { return u * u - 1.0; }

enum class Functional { H2, I };

inline double apply(Functional f, double u) noexcept { return f == Functional::H2 ? h2(u) : u; }

/// Psi_f(x, y, w): change of f when the increment x of the leading field is
/// replaced by the increment of the maximum, with w the normalized gap
/// W^(2)(x1) - W^(1)(x1). The window at w = 0 belongs to the second branch.
double psi(Functional f, double x, double y, double w) noexcept;

/// Correlation of U_{x1,x2} and U_{x1,x3}:
/// (d12^a + d13^a - d23^a) / (2 (d12 d13)^(a/2)).
/// Throws DegenerateTriangle when |R| >= 1 - kDegenerateGap.
double corr_r(double d12, double d13, double d23, double alpha);
double corr_r_unchecked(double d12, double d13, double d23, double alpha) noexcept;

inline constexpr double kDegenerateGap = 1e-10;

/// (u^2 + v^2 - 2 r u v) / (1 - r^2) - 2: the centered V3 summand.
double quadratic_form(double u, double v, double r);

/// (H2(u) + H2(v) - 2 r u v) / (1 - r^2). Differs from quadratic_form by
/// 2 r^2 / (1 - r^2); kept for the identity tests.
double hermite_expanded_form(double u, double v, double r);

/// Change of the V3 summand when one field is replaced by the maximum.
/// (u1, v1) are the W^(1), W^(2) increments on the first edge, (u2, v2) on the
/// second; w1, w2 the normalized gaps. w1 < 0 selects the W^(1) baseline.
/// Throws NumericalGuard when |r| >= 1 - kDegenerateGap.
double omega(double u1, double v1, double u2, double v2, double w1, double w2, double r);

enum class Which { w1, w2, wmax };

struct Parts {
  double v1 = 0.0;   ///< baseline W^(1), where W^(2\1)(x1) < 0
  double v2 = 0.0;   ///< baseline W^(2), where W^(2\1)(x1) >= 0
  double v21 = 0.0;  ///< Psi / Omega corrections

  double total() const noexcept { return v1 + v2 + v21; }
  std::array<double, 3> as_array() const noexcept { return {v1, v2, v21}; }
};

struct Decomposition {
  Parts parts;
  std::size_t ties = 0;     ///< anchors with W^(2\1)(x1) == 0 exactly
  std::size_t used = 0;     ///< summands entering the normalization
  std::size_t dropped = 0;  ///< degenerate triangles excluded
};

/// |lhs - sum(parts)| / max(|lhs|, sum |parts|, 1).
double identity_residual(double lhs, const Parts& parts) noexcept;

/// (1 / sqrt|E_N|) sum over e_n of H2(U_{x1,x2}) for the chosen field.
double v2_statistic(const SampledScene& scene, const geom::OrderedSelection& sel, Which which);
Decomposition v2_decomposition(const SampledScene& scene, const geom::OrderedSelection& sel);

/// (1 / sqrt|DT_N|) sum over non-degenerate dt_n of quadratic_form(U12, U13, R).
double v3_statistic(const SampledScene& scene, const geom::OrderedSelection& sel, Which which);
Decomposition v3_decomposition(const SampledScene& scene, const geom::OrderedSelection& sel);

struct Scaled {
  double s2 = 0.0;
  double s3 = 0.0;
};

struct IncrementReport {
  double v2_max = 0.0;
  double v3_max = 0.0;
  Parts v2_parts;
  Parts v3_parts;
  std::size_t edges = 0;
  std::size_t triangles = 0;
  std::size_t dropped_triangles = 0;
  std::size_t ties = 0;
  Scaled scaled;

  double v2_residual() const noexcept { return identity_residual(v2_max, v2_parts); }
  double v3_residual() const noexcept { return identity_residual(v3_max, v3_parts); }
};

/// s2 = (sqrt3/3) n^{-(2-a)/4} v2_max, s3 = (sqrt2/2) n^{-(2-a)/4} v3_max.
Scaled scaled_statistics(const IncrementReport& report, double n, double alpha);

/// Full report for one scene; `n` is the Poisson intensity.
IncrementReport increment_report(const SampledScene& scene, const geom::OrderedSelection& sel,
                                 double n);

void to_json(nlohmann::json& j, const IncrementReport& r);
void from_json(const nlohmann::json& j, IncrementReport& r);

}  // namespace fracmax::stats
