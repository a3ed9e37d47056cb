#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fracmax/field.hpp"
#include "fracmax/rng.hpp"

namespace fracmax::palm {

/// Typical Poisson-Delaunay cell R * Delta(u1, u2, u3) at unit intensity.
struct TypicalCellSample {
  double r = 0.0;
  std::array<Point, 3> u{};  ///< points on the unit circle
  double d12 = 0.0;
  double d13 = 0.0;
  double d23 = 0.0;

  Point vertex(std::size_t i) const noexcept { return r * u[i]; }
  double area() const noexcept;
};

/// Maximal area of a triangle inscribed in the unit circle.
inline constexpr double kMaxInscribedArea = 1.299038105676658;  // 3 sqrt(3) / 4

/// R ~ sqrt(Gamma(2, rate pi)); (u1, u2, u3) by rejection from uniform (S^1)^3
/// with acceptance probability area / kMaxInscribedArea. Labels are exchangeable.
TypicalCellSample sample_typical_cell(rng::Stream& stream);

/// Relabels the sample so that its vertices r*u_i are lexicographically sorted,
/// matching the anchoring used for Delaunay triples in the unit square.
TypicalCellSample lex_ordered(const TypicalCellSample& sample);

struct SideLengths {
  double d1 = 0.0;  ///< |x2 - x1|
  double d2 = 0.0;  ///< |x3 - x2|
  double d3 = 0.0;  ///< |x3 - x1|
};

/// (d1, d2, d3) = (d12, d23, d13).
SideLengths triangle_side_lengths(const TypicalCellSample& sample);

/// How the angle between u1 and u2 is measured for the typical couple.
enum class CoupleAngle {
  counterclockwise,  ///< angle from u1 to u2 in [0, 2 pi)
  unsigned_angle,    ///< geometric angle in [0, pi]
};

struct TypicalCoupleSample {
  double d1 = 0.0;
  double d2 = 0.0;
  double theta = 0.0;  ///< in [-pi/2, pi/2)
};

/// (r|u3 - u2|, r|u2 - u1|, arcsin(cos(theta_{u1,u2} / 2))) of a typical cell.
TypicalCoupleSample sample_typical_couple(rng::Stream& stream,
                                          CoupleAngle convention = CoupleAngle::counterclockwise);
TypicalCoupleSample couple_of(const TypicalCellSample& cell,
                              CoupleAngle convention = CoupleAngle::counterclockwise);

/// Density of the angle phi in [0, 2 pi) from u1 to u2, with u3 integrated out.
double chord_angle_density(double phi);

/// Density of R: 2 pi^2 r^3 exp(-pi r^2).
double circumradius_density(double r);

/// Density f_D of the typical edge length, tabulated once on a uniform grid
/// and interpolated with a cubic B-spline. Beyond the grid the density is
/// evaluated directly.
class EdgeLengthDensity {
 public:
  struct Options {
    std::size_t nodes = 4096;
    double ell_max = 7.0;
  };

  EdgeLengthDensity() : EdgeLengthDensity(Options{}) {}
  explicit EdgeLengthDensity(Options options);
  ~EdgeLengthDensity();
  EdgeLengthDensity(const EdgeLengthDensity&) = delete;
  EdgeLengthDensity& operator=(const EdgeLengthDensity&) = delete;

  /// Process-wide table with default options.
  static const EdgeLengthDensity& shared();

  /// Direct quadrature of f_D(ell), no table.
  static double exact(double ell);

  /// Throws OutOfRange for ell <= 0.
  double operator()(double ell) const;
  double cdf(double ell) const;

  double ell_max() const noexcept { return options_.ell_max; }
  double step() const noexcept { return step_; }
  std::span<const double> values() const noexcept { return values_; }  ///< at k * step()

 private:
  struct Spline;
  Options options_;
  double step_ = 0.0;
  std::vector<double> values_;
  std::vector<double> cumulative_;
  std::unique_ptr<Spline> spline_;
};

inline double edge_length_density(double ell) { return EdgeLengthDensity::shared()(ell); }

}  // namespace fracmax::palm
