#include "fracmax/field.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include <Eigen/Cholesky>

#include "fracmax/errors.hpp"

namespace fracmax {

void FieldParams::validate() const {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw InvalidArgument("sigma2 must be positive, got " + std::to_string(sigma2));
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidArgument("alpha must lie in (0, 1), got " + std::to_string(alpha));
}

namespace {

void check_separation(std::span<const Point> pts) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pts[a].x < pts[b].x; });
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Point p = pts[order[i]];
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const Point q = pts[order[j]];
      if (q.x - p.x >= PointSet::min_separation) break;
      if (distance(p, q) < PointSet::min_separation)
        throw DegenerateInput("points " + std::to_string(order[i]) + " and " +
                              std::to_string(order[j]) + " are closer than 1e-9");
    }
  }
}

}  // namespace

PointSet::PointSet(std::vector<Point> points, std::vector<PointRole> roles)
    : points_(std::move(points)), roles_(std::move(roles)) {
  if (points_.size() != roles_.size())
    throw InvalidArgument("point and role sequences differ in length");
  for (Point p : points_)
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InvalidArgument("non-finite point");
  check_separation(points_);
}

PointSet::PointSet(std::vector<Point> points, PointRole role)
    : PointSet(points, std::vector<PointRole>(points.size(), role)) {}

std::vector<std::size_t> PointSet::indices_with(PointRole role) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < roles_.size(); ++i)
    if (roles_[i] == role) out.push_back(i);
  return out;
}

std::size_t PointSet::count(PointRole role) const {
  return static_cast<std::size_t>(std::count(roles_.begin(), roles_.end(), role));
}

PointSet PointSet::concat(const PointSet& tail) const {
  std::vector<Point> pts(points_);
  std::vector<PointRole> roles(roles_);
  pts.insert(pts.end(), tail.points_.begin(), tail.points_.end());
  roles.insert(roles.end(), tail.roles_.begin(), tail.roles_.end());
  return PointSet(std::move(pts), std::move(roles));
}

double covariance(const FieldParams& params, Point x, Point y) {
  const double a = params.alpha;
  return 0.5 * params.sigma2 *
         (std::pow(norm(x), a) + std::pow(norm(y), a) - std::pow(distance(x, y), a));
}

double semivariogram(const FieldParams& params, Point x) {
  return 0.5 * params.sigma2 * std::pow(norm(x), params.alpha);
}

namespace {

// Fills the lower triangle (and diagonal) of `out`.
void assemble_lower(const FieldParams& params, const PointSet& pts, Eigen::MatrixXd& out) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  const double half_alpha = 0.5 * params.alpha;
  const double scale = 0.5 * params.sigma2;
  std::vector<double> radial(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point p = pts[i];
    radial[i] = std::pow(p.x * p.x + p.y * p.y, half_alpha);
  }
  out.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Point pj = pts[static_cast<std::size_t>(j)];
    const double rj = radial[static_cast<std::size_t>(j)];
    double* col = out.col(j).data();
    col[j] = params.sigma2 * rj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const Point pi = pts[static_cast<std::size_t>(i)];
      const double dx = pi.x - pj.x;
      const double dy = pi.y - pj.y;
      col[i] = scale * (radial[static_cast<std::size_t>(i)] + rj -
                        std::pow(dx * dx + dy * dy, half_alpha));
    }
  }
}

}  // namespace

Eigen::MatrixXd build_covariance(const FieldParams& params, const PointSet& pts) {
  params.validate();
  if (pts.empty()) throw InvalidArgument("covariance of an empty point set");
  Eigen::MatrixXd cov;
  assemble_lower(params, pts, cov);
  cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();
  return cov;
}

GaussianSampler::GaussianSampler(const FieldParams& params, const PointSet& pts) {
  params.validate();
  if (pts.empty()) throw InvalidArgument("covariance of an empty point set");
  assemble_lower(params, pts, factor_);
  const double max_diag = factor_.diagonal().maxCoeff();
  // All-origin input has a zero matrix; fall back to the field scale.
  nugget_ = kNuggetScale * (max_diag > 0.0 ? max_diag : params.sigma2);
  factor_.diagonal().array() += nugget_;
  Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>, Eigen::Lower> llt(factor_);
  if (llt.info() != Eigen::Success)
    throw FactorizationFailure("regularized covariance of " + std::to_string(pts.size()) +
                               " points is numerically indefinite (near-duplicate points?)");
  factor_.triangularView<Eigen::StrictlyUpper>().setZero();
}

std::vector<double> GaussianSampler::draw(rng::Stream& stream) const {
  Eigen::VectorXd z(factor_.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = stream.normal();
  Eigen::VectorXd w = factor_.triangularView<Eigen::Lower>() * z;
  return {w.data(), w.data() + w.size()};
}

SampledScene sample_pair(const FieldParams& params, const PointSet& pts, rng::Stream& first,
                         rng::Stream& second) {
  GaussianSampler sampler(params, pts);
  SampledScene scene{params, pts, sampler.draw(first), sampler.draw(second)};
  return scene;
}

SampledScene sample_pair(const FieldParams& params, const PointSet& pts, rng::Stream& stream) {
  return sample_pair(params, pts, stream, stream);
}

double kappa(Point x1, Point x3, double alpha) {
  const double n1 = norm(x1);
  const double n3 = norm(x3);
  if (n1 == 0.0 || n3 == 0.0) throw DegenerateInput("kappa needs nonzero points");
  return (std::pow(n1, alpha) + std::pow(n3, alpha) - std::pow(distance(x1, x3), alpha)) /
         (2.0 * std::pow(n1, 0.5 * alpha) * std::pow(n3, 0.5 * alpha));
}

ProofCorrelations proof_correlations(Point x1, Point x2, Point x3, Point x4, double alpha) {
  auto p = [alpha](double v) { return std::pow(v, alpha); };
  auto ph = [alpha](double v) { return std::pow(v, 0.5 * alpha); };
  const double n1 = norm(x1), n2 = norm(x2), n3 = norm(x3), n4 = norm(x4);
  const double d12 = distance(x1, x2), d34 = distance(x3, x4);
  if (n1 == 0.0 || n3 == 0.0 || d12 == 0.0 || d34 == 0.0)
    throw DegenerateInput("proof correlations need nonzero norms |x1|, |x3| and edge lengths");

  ProofCorrelations c;
  c.eta = 0.5 *
          ((p(distance(x1, x4)) - p(distance(x1, x3))) -
           (p(distance(x2, x4)) - p(distance(x2, x3)))) /
          (ph(d12) * ph(d34));
  c.rho12 = 0.5 * (-p(n2) + p(n1) + p(d12)) / (ph(d12) * ph(n1));
  c.rho34 = 0.5 * (-p(n4) + p(n3) + p(d34)) / (ph(d34) * ph(n3));
  c.nu123 = -0.5 * (p(n2) - p(distance(x3, x2)) - p(n1) + p(distance(x3, x1))) /
            (ph(d12) * ph(n3));
  c.nu341 = -0.5 * (p(n4) - p(distance(x1, x4)) - p(n3) + p(distance(x1, x3))) /
            (ph(d34) * ph(n1));
  c.kappa13 = kappa(x1, x3, alpha);
  return c;
}

}  // namespace fracmax
