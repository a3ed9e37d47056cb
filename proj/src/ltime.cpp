#include "fracmax/ltime.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <string>

#include "fracmax/errors.hpp"

namespace fracmax::ltime {

std::vector<Point> grid_points(std::size_t m) {
  if (m < 8) throw InvalidArgument("grid must be at least 8 x 8, got " + std::to_string(m));
  std::vector<Point> pts;
  pts.reserve(m * m);
  const double h = 1.0 / static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i)
      pts.push_back({(static_cast<double>(i) + 0.5) * h - 0.5, (static_cast<double>(j) + 0.5) * h - 0.5});
  return pts;
}

PointSet make_grid(std::size_t m) { return PointSet(grid_points(m), PointRole::grid); }

double default_epsilon(std::size_t m, double alpha) {
  if (m == 0) throw InvalidArgument("grid size must be positive");
  return std::pow(1.0 / static_cast<double>(m), alpha);
}

namespace {

std::vector<std::size_t> grid_indices(const SampledScene& scene, std::size_t grid_m) {
  std::vector<std::size_t> idx = scene.pts.indices_with(PointRole::grid);
  if (idx.empty()) throw MissingGrid("scene has no grid points");
  if (idx.size() != grid_m * grid_m)
    throw MissingGrid("scene has " + std::to_string(idx.size()) + " grid points, expected " +
                      std::to_string(grid_m * grid_m));
  if (scene.w1.size() != scene.pts.size() || scene.w2.size() != scene.pts.size())
    throw InvalidArgument("scene values do not match its point set");
  return idx;
}

}  // namespace

LocalTimeEstimate estimate_local_time(const SampledScene& scene, std::size_t grid_m,
                                      double epsilon, double level) {
  if (!(epsilon > 0.0)) throw InvalidArgument("mollifier bandwidth must be positive");
  const auto idx = grid_indices(scene, grid_m);
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * epsilon);
  double sum = 0.0;
  for (std::size_t i : idx) {
    const double d = scene.w_diff(i) - level;
    sum += std::exp(-d * d / (2.0 * epsilon));
  }
  return {norm * sum / static_cast<double>(idx.size()), epsilon, grid_m, level};
}

std::vector<HistogramBin> occupation_histogram(const SampledScene& scene, std::size_t grid_m,
                                               double bin_width) {
  if (!(bin_width > 0.0)) throw InvalidArgument("bin width must be positive");
  const auto idx = grid_indices(scene, grid_m);
  std::map<long long, std::size_t> counts;
  for (std::size_t i : idx) ++counts[std::llround(std::floor(scene.w_diff(i) / bin_width + 0.5))];
  std::vector<HistogramBin> bins;
  bins.reserve(counts.size());
  const double total = static_cast<double>(idx.size());
  for (const auto& [k, c] : counts) {
    const double center = static_cast<double>(k) * bin_width;
    bins.push_back({center - 0.5 * bin_width, center + 0.5 * bin_width, static_cast<double>(c) / total});
  }
  return bins;
}

double bin_density(const std::vector<HistogramBin>& bins, double level) {
  for (const auto& b : bins)
    if (level >= b.lo && level < b.hi) return b.mass / (b.hi - b.lo);
  return 0.0;
}

void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins) {
  out << "level,mass\n";
  char buf[64];
  for (const auto& b : bins) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", b.center(), b.mass);
    out << buf;
  }
}

}  // namespace fracmax::ltime
