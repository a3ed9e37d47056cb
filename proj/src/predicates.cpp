// Filtered predicates: a floating-point evaluation with a forward error bound,
// falling back to exact expansion arithmetic when the sign is uncertain.

#include "fracmax/predicates.hpp"

#include <cmath>
#include <vector>

namespace fracmax::predicates {

namespace {

constexpr double kEps = 0x1p-53;
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kInCircleBound = (10.0 + 96.0 * kEps) * kEps;

using Expansion = std::vector<double>;

struct Pair {
  double hi;
  double lo;
};

inline Pair two_sum(double a, double b) {
  const double x = a + b;
  const double bv = x - a;
  const double av = x - bv;
  return {x, (a - av) + (b - bv)};
}

inline Pair fast_two_sum(double a, double b) {
  const double x = a + b;
  return {x, b - (x - a)};
}

inline Pair two_product(double a, double b) {
  const double x = a * b;
  return {x, std::fma(a, b, -x)};
}

Expansion from_diff(double a, double b) {
  const Pair d = two_sum(a, -b);
  Expansion e;
  if (d.lo != 0.0) e.push_back(d.lo);
  e.push_back(d.hi);
  return e;
}

// Components are kept nonoverlapping and in increasing magnitude, zeros removed.
Expansion grow(const Expansion& e, double b) {
  Expansion h;
  h.reserve(e.size() + 1);
  double q = b;
  for (double ei : e) {
    const Pair s = two_sum(q, ei);
    if (s.lo != 0.0) h.push_back(s.lo);
    q = s.hi;
  }
  if (q != 0.0 || h.empty()) h.push_back(q);
  return h;
}

Expansion sum(const Expansion& e, const Expansion& f) {
  Expansion h = e;
  for (double fi : f) h = grow(h, fi);
  return h;
}

Expansion scale(const Expansion& e, double b) {
  Expansion h;
  h.reserve(2 * e.size());
  Pair p = two_product(e[0], b);
  double q = p.hi;
  if (p.lo != 0.0) h.push_back(p.lo);
  for (std::size_t i = 1; i < e.size(); ++i) {
    const Pair t = two_product(e[i], b);
    const Pair s = two_sum(q, t.lo);
    if (s.lo != 0.0) h.push_back(s.lo);
    const Pair f = fast_two_sum(t.hi, s.hi);
    if (f.lo != 0.0) h.push_back(f.lo);
    q = f.hi;
  }
  if (q != 0.0 || h.empty()) h.push_back(q);
  return h;
}

Expansion product(const Expansion& e, const Expansion& f) {
  Expansion acc{0.0};
  for (double fi : f) acc = sum(acc, scale(e, fi));
  return acc;
}

Expansion negate(Expansion e) {
  for (double& v : e) v = -v;
  return e;
}

int sign_of(const Expansion& e) {
  for (auto it = e.rbegin(); it != e.rend(); ++it)
    if (*it != 0.0) return *it > 0.0 ? 1 : -1;
  return 0;
}

int orient_exact(Point a, Point b, Point c) {
  const Expansion acx = from_diff(a.x, c.x), acy = from_diff(a.y, c.y);
  const Expansion bcx = from_diff(b.x, c.x), bcy = from_diff(b.y, c.y);
  return sign_of(sum(product(acx, bcy), negate(product(acy, bcx))));
}

int incircle_exact(Point a, Point b, Point c, Point d) {
  const Expansion adx = from_diff(a.x, d.x), ady = from_diff(a.y, d.y);
  const Expansion bdx = from_diff(b.x, d.x), bdy = from_diff(b.y, d.y);
  const Expansion cdx = from_diff(c.x, d.x), cdy = from_diff(c.y, d.y);
  auto cross = [](const Expansion& ux, const Expansion& uy, const Expansion& vx,
                  const Expansion& vy) {
    return sum(product(ux, vy), negate(product(uy, vx)));
  };
  auto lift = [](const Expansion& ux, const Expansion& uy) {
    return sum(product(ux, ux), product(uy, uy));
  };
  const Expansion det = sum(sum(product(lift(adx, ady), cross(bdx, bdy, cdx, cdy)),
                                product(lift(bdx, bdy), cross(cdx, cdy, adx, ady))),
                            product(lift(cdx, cdy), cross(adx, ady, bdx, bdy)));
  return sign_of(det);
}

}  // namespace

int orient2d(Point a, Point b, Point c) {
  const double left = (a.x - c.x) * (b.y - c.y);
  const double right = (a.y - c.y) * (b.x - c.x);
  const double det = left - right;
  const double bound = kOrientBound * (std::abs(left) + std::abs(right));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return orient_exact(a, b, c);
}

int incircle(Point a, Point b, Point c, Point d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                     clift * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                           (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                           (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  const double bound = kInCircleBound * permanent;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return incircle_exact(a, b, c, d);
}

}  // namespace fracmax::predicates
