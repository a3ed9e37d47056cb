#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "fracmax/field.hpp"

namespace fracmax::ltime {

/// Cell centers of the m x m grid over C, row-major in y then x.
std::vector<Point> grid_points(std::size_t m);
PointSet make_grid(std::size_t m);

/// Default mollifier bandwidth eps = h^alpha with h = 1/m.
double default_epsilon(std::size_t m, double alpha);

struct LocalTimeEstimate {
  double value = 0.0;
  double epsilon = 0.0;
  std::size_t grid_m = 0;
  double level = 0.0;
};

/// (1/m^2) sum over grid points of (2 pi eps)^{-1/2} exp(-(W^(2\1)(x) - level)^2 / (2 eps)).
/// Throws MissingGrid unless the scene holds exactly m^2 grid-tagged points.
LocalTimeEstimate estimate_local_time(const SampledScene& scene, std::size_t grid_m,
                                      double epsilon, double level = 0.0);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  double mass = 0.0;

  double center() const noexcept { return 0.5 * (lo + hi); }
};

/// Occupation masses of W^(2\1) over the grid, in bins [(k - 1/2) b, (k + 1/2) b)
/// so that one bin is centered on 0. Masses sum to 1.
std::vector<HistogramBin> occupation_histogram(const SampledScene& scene, std::size_t grid_m,
                                               double bin_width);

/// Mass of the bin holding `level`, divided by its width.
double bin_density(const std::vector<HistogramBin>& bins, double level = 0.0);

/// Width of a box kernel with the variance of the eps-mollifier: sqrt(12 eps).
inline double matched_bin_width(double epsilon) noexcept { return std::sqrt(12.0 * epsilon); }

/// `level,mass` rows, one per bin center.
void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins);

}  // namespace fracmax::ltime
