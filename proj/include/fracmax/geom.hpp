#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "fracmax/field.hpp"
#include "fracmax/rng.hpp"

namespace fracmax::geom {

/// Poisson window: intensity N on the padded square (-1/2-pad, 1/2+pad]^2.
struct WindowSpec {
  double intensity = 1000.0;
  double pad = 0.05;

  /// pad = max(pad_min, pad_scale / sqrt(N)).
  static double default_pad(double intensity, double pad_min = 0.05, double pad_scale = 5.0);

  void validate() const;
  double side() const noexcept { return 1.0 + 2.0 * pad; }
  double area() const noexcept { return side() * side(); }
};

/// Homogeneous Poisson points on the padded window, tagged `poisson`.
/// Throws EmptyWindow when no point is drawn.
PointSet sample_poisson(const WindowSpec& spec, rng::Stream& stream);

using EdgeIdx = std::array<std::size_t, 2>;
using TriIdx = std::array<std::size_t, 3>;

/// Delaunay triangulation of the convex hull of `vertices`.
/// Triangles are counter-clockwise; edges are (min, max) index pairs.
struct DelaunayComplex {
  PointSet vertices;
  std::vector<EdgeIdx> edges;
  std::vector<TriIdx> triangles;
};

/// Incremental Delaunay construction with exact predicates. Points are
/// inserted along a Hilbert curve; cocircular ties keep the existing
/// triangle, so the result is a deterministic function of the input.
DelaunayComplex triangulate(const PointSet& pts);

/// Edges and triangles anchored at a lexicographically smallest vertex in C.
struct OrderedSelection {
  std::vector<EdgeIdx> e_n;   ///< (x1, x2), x1 lex-before x2, x1 in C
  std::vector<TriIdx> dt_n;   ///< (x1, x2, x3) lex-sorted, x1 in C
};

OrderedSelection select_ordered(const DelaunayComplex& complex);

/// Number of (triangle, vertex) pairs with the vertex strictly inside the
/// triangle's circumdisk. Zero for a Delaunay triangulation. O(T n).
std::size_t count_circumdisk_violations(const DelaunayComplex& complex);

/// All triangles (CCW, sorted by index) whose circumdisk holds no other point,
/// by enumerating every triple. O(n^4); for small verification instances.
std::vector<TriIdx> brute_force_delaunay(const PointSet& pts);

/// Triangles of the complex in the same canonical form as brute_force_delaunay.
std::vector<TriIdx> canonical_triangles(const DelaunayComplex& complex);

/// Text dump: `v x y` per vertex, then `t i j k` per triangle (%.17g).
void write_complex(std::ostream& out, const DelaunayComplex& complex);

}  // namespace fracmax::geom
