#include "fracmax/geom.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <unordered_map>

#include "fracmax/errors.hpp"
#include "fracmax/predicates.hpp"

namespace fracmax::geom {

double WindowSpec::default_pad(double intensity, double pad_min, double pad_scale) {
  return std::max(pad_min, pad_scale / std::sqrt(intensity));
}

void WindowSpec::validate() const {
  if (!(intensity > 0.0) || !std::isfinite(intensity))
    throw InvalidArgument("intensity must be positive");
  if (!(pad >= 0.0) || !std::isfinite(pad)) throw InvalidArgument("pad must be nonnegative");
}

PointSet sample_poisson(const WindowSpec& spec, rng::Stream& stream) {
  spec.validate();
  std::poisson_distribution<long long> count_dist(spec.intensity * spec.area());
  const long long count = count_dist(stream.engine());
  if (count == 0) throw EmptyWindow("no Poisson point drawn");
  const double hi = 0.5 + spec.pad;
  const double side = spec.side();
  std::vector<Point> pts(static_cast<std::size_t>(count));
  for (Point& p : pts) {
    // uniform() is in [0, 1), so hi - side * u covers (lo, hi].
    p.x = hi - side * stream.uniform();
    p.y = hi - side * stream.uniform();
  }
  return PointSet(std::move(pts), PointRole::poisson);
}

namespace {

constexpr int kGhost = -1;

std::uint64_t hilbert_index(std::uint32_t x, std::uint32_t y, int order) {
  std::uint64_t d = 0;
  for (std::uint32_t s = 1u << (order - 1); s > 0; s >>= 1) {
    const std::uint32_t rx = (x & s) ? 1u : 0u;
    const std::uint32_t ry = (y & s) ? 1u : 0u;
    d += static_cast<std::uint64_t>(s) * s * ((3u * rx) ^ ry);
    if (ry == 0) {
      if (rx == 1) {
        x = s - 1 - (x & (s - 1)) + (x & ~(s - 1));
        y = s - 1 - (y & (s - 1)) + (y & ~(s - 1));
      }
      std::swap(x, y);
    }
  }
  return d;
}

std::vector<std::size_t> hilbert_order(std::span<const Point> pts) {
  double xmin = pts[0].x, xmax = pts[0].x, ymin = pts[0].y, ymax = pts[0].y;
  for (Point p : pts) {
    xmin = std::min(xmin, p.x), xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y), ymax = std::max(ymax, p.y);
  }
  constexpr int kOrder = 16;
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-300});
  const double cells = static_cast<double>((1u << kOrder) - 1);
  std::vector<std::uint64_t> key(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto gx = static_cast<std::uint32_t>((pts[i].x - xmin) / span * cells);
    const auto gy = static_cast<std::uint32_t>((pts[i].y - ymin) / span * cells);
    key[i] = hilbert_index(gx, gy, kOrder);
  }
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return key[a] != key[b] ? key[a] < key[b] : a < b;
  });
  return order;
}

struct Tri {
  std::array<int, 3> v{};   // counter-clockwise; kGhost stands for the point at infinity
  std::array<int, 3> nb{};  // nb[i] is across the edge opposite v[i]
  bool alive = true;

  bool ghost() const noexcept { return v[0] == kGhost || v[1] == kGhost || v[2] == kGhost; }
};

inline int next(int i) { return i == 2 ? 0 : i + 1; }
inline int prev(int i) { return i == 0 ? 2 : i - 1; }

class Builder {
 public:
  explicit Builder(std::span<const Point> pts) : pts_(pts) {}

  void run() {
    const std::vector<std::size_t> order = hilbert_order(pts_);
    const int a = static_cast<int>(order[0]);
    const int b = static_cast<int>(order[1]);
    std::size_t third = 2;
    while (third < order.size() &&
           predicates::orient2d(pt(a), pt(b), pt(static_cast<int>(order[third]))) == 0)
      ++third;
    if (third == order.size()) throw DegenerateInput("all points are collinear");
    const int c = static_cast<int>(order[third]);
    seed_triangle(a, b, c);
    for (std::size_t k = 2; k < order.size(); ++k) {
      if (k == third) continue;
      insert(static_cast<int>(order[k]));
    }
  }

  void export_to(DelaunayComplex& out) const {
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      const Tri& tri = tris_[t];
      if (!tri.alive || tri.ghost()) continue;
      out.triangles.push_back({static_cast<std::size_t>(tri.v[0]),
                               static_cast<std::size_t>(tri.v[1]),
                               static_cast<std::size_t>(tri.v[2])});
      for (int i = 0; i < 3; ++i) {
        const int u = tri.v[next(i)];
        const int w = tri.v[prev(i)];
        const bool hull = tris_[static_cast<std::size_t>(tri.nb[i])].ghost();
        if (hull || u < w)
          out.edges.push_back({static_cast<std::size_t>(std::min(u, w)),
                               static_cast<std::size_t>(std::max(u, w))});
      }
    }
  }

 private:
  Point pt(int i) const { return pts_[static_cast<std::size_t>(i)]; }

  int make(int a, int b, int c) {
    Tri t;
    t.v = {a, b, c};
    t.nb = {-1, -1, -1};
    if (!free_.empty()) {
      const int id = free_.back();
      free_.pop_back();
      tris_[static_cast<std::size_t>(id)] = t;
      return id;
    }
    tris_.push_back(t);
    return static_cast<int>(tris_.size() - 1);
  }

  Tri& tri(int id) { return tris_[static_cast<std::size_t>(id)]; }

  void seed_triangle(int a, int b, int c) {
    if (predicates::orient2d(pt(a), pt(b), pt(c)) < 0) std::swap(b, c);
    const int t = make(a, b, c);
    const int gab = make(b, a, kGhost);
    const int gbc = make(c, b, kGhost);
    const int gca = make(a, c, kGhost);
    tri(t).nb = {gbc, gca, gab};
    // Each ghost: across its finite edge is t; across (x, G) and (G, y) are ghosts.
    tri(gab).nb = {gca, gbc, t};  // (b, a, G): opp b = (a,G) -> gca, opp a = (G,b) -> gbc
    tri(gbc).nb = {gab, gca, t};  // (c, b, G): opp c = (b,G) -> gab, opp b = (G,c) -> gca
    tri(gca).nb = {gbc, gab, t};  // (a, c, G): opp a = (c,G) -> gbc, opp c = (G,a) -> gab
    last_ = t;
  }

  bool in_conflict(int id, Point p) const {
    const Tri& t = tris_[static_cast<std::size_t>(id)];
    for (int k = 0; k < 3; ++k) {
      if (t.v[k] != kGhost) continue;
      const Point u = pt(t.v[next(k)]);
      const Point w = pt(t.v[prev(k)]);
      const int o = predicates::orient2d(u, w, p);
      if (o > 0) return true;
      if (o < 0) return false;
      // On the hull line: conflict only strictly inside the segment.
      const double dot = (p.x - u.x) * (w.x - u.x) + (p.y - u.y) * (w.y - u.y);
      const double len2 = (w.x - u.x) * (w.x - u.x) + (w.y - u.y) * (w.y - u.y);
      return dot > 0.0 && dot < len2;
    }
    return predicates::incircle(pt(t.v[0]), pt(t.v[1]), pt(t.v[2]), p) > 0;
  }

  int locate(Point p) {
    int cur = last_;
    if (tri(cur).ghost()) {
      for (int k = 0; k < 3; ++k)
        if (tri(cur).v[k] == kGhost) cur = tri(cur).nb[k];
    }
    for (std::size_t steps = 0;; ++steps) {
      const Tri& t = tri(cur);
      bool moved = false;
      const int start = static_cast<int>(steps % 3);
      for (int j = 0; j < 3; ++j) {
        const int i = (start + j) % 3;
        if (predicates::orient2d(pt(t.v[next(i)]), pt(t.v[prev(i)]), p) < 0) {
          cur = t.nb[i];
          moved = true;
          break;
        }
      }
      if (!moved || tri(cur).ghost()) return cur;
    }
  }

  void insert(int pid) {
    const Point p = pt(pid);
    const int start = locate(p);

    ++stamp_;
    if (mark_.size() < tris_.size()) mark_.resize(tris_.size(), 0);
    cavity_.clear();
    boundary_.clear();
    cavity_.push_back(start);
    mark_[static_cast<std::size_t>(start)] = stamp_;
    for (std::size_t k = 0; k < cavity_.size(); ++k) {
      const int id = cavity_[k];
      for (int i = 0; i < 3; ++i) {
        const int nb = tri(id).nb[i];
        if (mark_[static_cast<std::size_t>(nb)] == stamp_) continue;
        if (in_conflict(nb, p)) {
          mark_[static_cast<std::size_t>(nb)] = stamp_;
          cavity_.push_back(nb);
        } else {
          boundary_.push_back({id, i});
        }
      }
    }

    starts_.clear();
    created_.clear();
    for (auto [id, i] : boundary_) {
      const int u = tri(id).v[next(i)];
      const int w = tri(id).v[prev(i)];
      const int outer = tri(id).nb[i];
      const int fresh = make(u, w, pid);
      tri(fresh).nb[2] = outer;
      Tri& o = tri(outer);
      for (int j = 0; j < 3; ++j)
        if (o.v[next(j)] == w && o.v[prev(j)] == u) o.nb[j] = fresh;
      starts_[u] = fresh;
      created_.push_back(fresh);
    }
    for (int id : created_) {
      Tri& t = tri(id);
      t.nb[0] = starts_.at(t.v[1]);
      // The triangle ending at v[0] is the one whose start precedes it on the cycle.
    }
    for (int id : created_) {
      const int after = tri(id).nb[0];
      tri(after).nb[1] = id;
    }
    for (int id : cavity_) {
      tri(id).alive = false;
      free_.push_back(id);
    }
    if (mark_.size() < tris_.size()) mark_.resize(tris_.size(), 0);
    last_ = created_.front();
  }

  std::span<const Point> pts_;
  std::vector<Tri> tris_;
  std::vector<int> free_;
  std::vector<std::uint64_t> mark_;
  std::uint64_t stamp_ = 0;
  std::vector<int> cavity_;
  std::vector<std::pair<int, int>> boundary_;
  std::unordered_map<int, int> starts_;
  std::vector<int> created_;
  int last_ = 0;
};

}  // namespace

DelaunayComplex triangulate(const PointSet& pts) {
  if (pts.size() < 3) throw DegenerateInput("triangulation needs at least 3 points");
  Builder builder(pts.points());
  builder.run();
  DelaunayComplex out;
  out.vertices = pts;
  builder.export_to(out);
  return out;
}

OrderedSelection select_ordered(const DelaunayComplex& complex) {
  const PointSet& v = complex.vertices;
  OrderedSelection sel;
  for (const EdgeIdx& e : complex.edges) {
    EdgeIdx o = e;
    if (lex_less(v[o[1]], v[o[0]])) std::swap(o[0], o[1]);
    if (in_unit_square(v[o[0]])) sel.e_n.push_back(o);
  }
  for (const TriIdx& t : complex.triangles) {
    TriIdx o = t;
    std::sort(o.begin(), o.end(),
              [&](std::size_t a, std::size_t b) { return lex_less(v[a], v[b]); });
    if (in_unit_square(v[o[0]])) sel.dt_n.push_back(o);
  }
  return sel;
}

std::size_t count_circumdisk_violations(const DelaunayComplex& complex) {
  const PointSet& v = complex.vertices;
  std::size_t violations = 0;
  for (const TriIdx& t : complex.triangles) {
    for (std::size_t q = 0; q < v.size(); ++q) {
      if (q == t[0] || q == t[1] || q == t[2]) continue;
      if (predicates::incircle(v[t[0]], v[t[1]], v[t[2]], v[q]) > 0) ++violations;
    }
  }
  return violations;
}

namespace {

TriIdx canonical(TriIdx t) {
  std::sort(t.begin(), t.end());
  return t;
}

}  // namespace

std::vector<TriIdx> brute_force_delaunay(const PointSet& pts) {
  const std::size_t n = pts.size();
  std::vector<TriIdx> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const int o = predicates::orient2d(pts[i], pts[j], pts[k]);
        if (o == 0) continue;
        const std::size_t a = i, b = o > 0 ? j : k, c = o > 0 ? k : j;
        bool empty = true;
        for (std::size_t q = 0; q < n && empty; ++q) {
          if (q == i || q == j || q == k) continue;
          if (predicates::incircle(pts[a], pts[b], pts[c], pts[q]) > 0) empty = false;
        }
        if (empty) out.push_back({i, j, k});
      }
  return out;
}

std::vector<TriIdx> canonical_triangles(const DelaunayComplex& complex) {
  std::vector<TriIdx> out;
  out.reserve(complex.triangles.size());
  for (const TriIdx& t : complex.triangles) out.push_back(canonical(t));
  std::sort(out.begin(), out.end());
  return out;
}

void write_complex(std::ostream& out, const DelaunayComplex& complex) {
  char line[128];
  for (Point p : complex.vertices.points()) {
    std::snprintf(line, sizeof line, "v %.17g %.17g\n", p.x, p.y);
    out << line;
  }
  for (const TriIdx& t : complex.triangles) out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

}  // namespace fracmax::geom
