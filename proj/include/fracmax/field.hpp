#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "fracmax/rng.hpp"

namespace fracmax {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) noexcept { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) noexcept = default;
};

inline double norm(Point p) noexcept { return std::hypot(p.x, p.y); }
inline double distance(Point a, Point b) noexcept { return norm(b - a); }

/// Lexicographic order on (x, y).
inline bool lex_less(Point a, Point b) noexcept { return a.x < b.x || (a.x == b.x && a.y < b.y); }

/// Unit square C = (-1/2, 1/2]^2.
inline bool in_unit_square(Point p) noexcept {
  return p.x > -0.5 && p.x <= 0.5 && p.y > -0.5 && p.y <= 0.5;
}

/// Covariance parameters: variance scale sigma^2 and exponent alpha = 2H in (0, 1).
struct FieldParams {
  double sigma2 = 1.0;
  double alpha = 0.5;

  void validate() const;
  double sigma() const noexcept { return std::sqrt(sigma2); }
};

enum class PointRole : std::uint8_t { poisson, grid, probe };

/// Ordered set of pairwise-distinct planar points; index is identity.
class PointSet {
 public:
  static constexpr double min_separation = 1e-9;

  PointSet() = default;
  /// Throws DegenerateInput if two points are closer than min_separation.
  PointSet(std::vector<Point> points, std::vector<PointRole> roles);
  explicit PointSet(std::vector<Point> points, PointRole role = PointRole::probe);

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  Point operator[](std::size_t i) const noexcept { return points_[i]; }
  PointRole role(std::size_t i) const noexcept { return roles_[i]; }
  std::span<const Point> points() const noexcept { return points_; }
  std::span<const PointRole> roles() const noexcept { return roles_; }

  std::vector<std::size_t> indices_with(PointRole role) const;
  std::size_t count(PointRole role) const;

  /// Concatenation; indices of `tail` are shifted by size() of this set.
  PointSet concat(const PointSet& tail) const;

 private:
  std::vector<Point> points_;
  std::vector<PointRole> roles_;
};

/// Joint sample of two independent fields at a common point set.
struct SampledScene {
  FieldParams params;
  PointSet pts;
  std::vector<double> w1;
  std::vector<double> w2;

  /// W^(2\1) = W^(2) - W^(1).
  double w_diff(std::size_t i) const noexcept { return w2[i] - w1[i]; }
  double w_max(std::size_t i) const noexcept { return std::max(w1[i], w2[i]); }
};

/// (sigma^2 / 2)(|x|^alpha + |y|^alpha - |y - x|^alpha)
double covariance(const FieldParams& params, Point x, Point y);

/// (1/2) sigma^2 |x|^alpha
double semivariogram(const FieldParams& params, Point x);

/// Dense covariance matrix of the point set, without regularization.
Eigen::MatrixXd build_covariance(const FieldParams& params, const PointSet& pts);

/// Relative nugget added to the diagonal before factorization.
inline constexpr double kNuggetScale = 1e-12;

/// Exact centered Gaussian sampler over a fixed point set.
///
/// Assembles the covariance, adds a nugget of kNuggetScale * max-diagonal and
/// factors it in place. The factor is immutable, so draws may run
/// concurrently as long as each uses its own stream.
class GaussianSampler {
 public:
  GaussianSampler(const FieldParams& params, const PointSet& pts);

  std::size_t size() const noexcept { return static_cast<std::size_t>(factor_.rows()); }
  double nugget() const noexcept { return nugget_; }

  std::vector<double> draw(rng::Stream& stream) const;

 private:
  Eigen::MatrixXd factor_;
  double nugget_ = 0.0;
};

/// Two independent draws W^(1) and W^(2), each from its own stream.
SampledScene sample_pair(const FieldParams& params, const PointSet& pts, rng::Stream& first,
                         rng::Stream& second);
SampledScene sample_pair(const FieldParams& params, const PointSet& pts, rng::Stream& stream);

/// Correlation of W(x1) and W(x3); also the correlation of the difference field.
double kappa(Point x1, Point x3, double alpha);

struct ProofCorrelations {
  double eta = 0.0;     ///< corr(U_{x1,x2}, U_{x3,x4})
  double rho12 = 0.0;   ///< -corr(U_{x1,x2}, W(x1))
  double rho34 = 0.0;   ///< -corr(U_{x3,x4}, W(x3))
  double nu123 = 0.0;   ///< -corr(U_{x1,x2}, W(x3))
  double nu341 = 0.0;   ///< -corr(U_{x3,x4}, W(x1))
  double kappa13 = 0.0; ///< corr(W(x1), W(x3))
};

ProofCorrelations proof_correlations(Point x1, Point x2, Point x3, Point x4, double alpha);

}  // namespace fracmax
