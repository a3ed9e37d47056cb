#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fracmax/errors.hpp"
#include "fracmax/geom.hpp"
#include "fracmax/predicates.hpp"

using namespace fracmax;

namespace {

PointSet random_points(std::uint64_t seed, int n) {
  auto s = rng::substream(seed, "geom-test");
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.push_back({s.uniform(), s.uniform()});
  return PointSet(std::move(pts));
}

}  // namespace

TEST_CASE("poisson window size and determinism") {
  const geom::WindowSpec spec{1000.0, 0.1};
  CHECK(spec.area() == doctest::Approx(1.44));
  auto a = rng::substream(1, "pp");
  auto b = rng::substream(1, "pp");
  const PointSet x = geom::sample_poisson(spec, a);
  const PointSet y = geom::sample_poisson(spec, b);
  REQUIRE(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == y[i]);
  for (Point p : x.points()) {
    CHECK(p.x > -0.6);
    CHECK(p.x <= 0.6);
    CHECK(p.y > -0.6);
    CHECK(p.y <= 0.6);
  }
  CHECK(x.count(PointRole::poisson) == x.size());
}

TEST_CASE("poisson counts have the right mean") {
  const geom::WindowSpec spec{500.0, 0.1};
  const int draws = 200;
  double total = 0.0;
  for (int k = 0; k < draws; ++k) {
    auto s = rng::substream(2, "pp-count", {static_cast<std::uint64_t>(k)});
    total += static_cast<double>(geom::sample_poisson(spec, s).size());
  }
  const double mean = total / draws;
  CHECK(std::abs(mean - 720.0) < 3.0 * std::sqrt(720.0 / draws));
}

TEST_CASE("window validation") {
  CHECK_THROWS_AS((geom::WindowSpec{-1.0, 0.1}.validate()), InvalidArgument);
  CHECK_THROWS_AS((geom::WindowSpec{10.0, -0.1}.validate()), InvalidArgument);
  CHECK(geom::WindowSpec::default_pad(100) == doctest::Approx(0.5));
  CHECK(geom::WindowSpec::default_pad(1e6) == doctest::Approx(0.05));
  auto s = rng::substream(3, "empty");
  CHECK_THROWS_AS(geom::sample_poisson({1e-9, 0.0}, s), EmptyWindow);
}

TEST_CASE("smallest triangulations") {
  const auto tri = geom::triangulate(PointSet(std::vector<Point>{{0, 0}, {1, 0}, {0, 1}}));
  CHECK(tri.triangles.size() == 1);
  CHECK(tri.edges.size() == 3);

  const PointSet square(std::vector<Point>{{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const auto sq = geom::triangulate(square);
  CHECK(sq.triangles.size() == 2);
  CHECK(sq.edges.size() == 5);
  CHECK(geom::count_circumdisk_violations(sq) == 0);
  const auto again = geom::triangulate(square);
  CHECK(geom::canonical_triangles(sq) == geom::canonical_triangles(again));

  CHECK_THROWS_AS(geom::triangulate(PointSet(std::vector<Point>{{0, 0}, {1, 0}})), DegenerateInput);
  CHECK_THROWS_AS(geom::triangulate(PointSet(std::vector<Point>{{0, 0}, {1, 1}, {2, 2}, {3, 3}})),
                  DegenerateInput);
}

TEST_CASE("triangles are counter-clockwise and edges match triangle sides") {
  const PointSet pts = random_points(4, 300);
  const auto dt = geom::triangulate(pts);
  std::set<geom::EdgeIdx> sides;
  for (const auto& t : dt.triangles) {
    CHECK(predicates::orient2d(pts[t[0]], pts[t[1]], pts[t[2]]) == 1);
    for (int i = 0; i < 3; ++i) sides.insert({std::min(t[i], t[(i + 1) % 3]), std::max(t[i], t[(i + 1) % 3])});
  }
  const std::set<geom::EdgeIdx> edges(dt.edges.begin(), dt.edges.end());
  CHECK(edges.size() == dt.edges.size());
  CHECK(edges == sides);
  // Euler on the convex hull triangulation, counting the outer face.
  CHECK(static_cast<long>(pts.size()) - static_cast<long>(dt.edges.size()) +
            static_cast<long>(dt.triangles.size()) + 1 ==
        2);
}

TEST_CASE("triangulation matches brute force on small sets") {
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    const PointSet pts = random_points(seed, 40 + static_cast<int>(seed) * 3);
    const auto dt = geom::triangulate(pts);
    CHECK(geom::canonical_triangles(dt) == geom::brute_force_delaunay(pts));
  }
}

TEST_CASE("empty circumdisks on larger and degenerate inputs") {
  CHECK(geom::count_circumdisk_violations(geom::triangulate(random_points(5, 500))) == 0);
  // A lattice is maximally cocircular; ties must still give a valid triangulation.
  std::vector<Point> lattice;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) lattice.push_back({0.1 * i, 0.1 * j});
  const auto dt = geom::triangulate(PointSet(lattice));
  CHECK(dt.triangles.size() == 162);
  CHECK(geom::count_circumdisk_violations(dt) == 0);
  std::vector<Point> reversed(lattice.rbegin(), lattice.rend());
  CHECK(geom::triangulate(PointSet(reversed)).triangles.size() == 162);
}

TEST_CASE("ordered selection on a hand-checked configuration") {
  // E = (-0.1, 0.6) and D = (0.6, 0) lie outside C.
  const PointSet pts(std::vector<Point>{{0, 0}, {0.2, 0.1}, {0.1, 0.3}, {0.6, 0.0}, {-0.1, 0.6}});
  const auto dt = geom::triangulate(pts);
  CHECK(dt.edges.size() == 9);
  CHECK(dt.triangles.size() == 5);
  const auto sel = geom::select_ordered(dt);
  std::set<geom::EdgeIdx> e(sel.e_n.begin(), sel.e_n.end());
  const std::set<geom::EdgeIdx> expected_e{{0, 1}, {0, 2}, {0, 3}, {2, 1}, {1, 3}, {2, 3}};
  CHECK(e == expected_e);
  std::set<geom::TriIdx> t(sel.dt_n.begin(), sel.dt_n.end());
  const std::set<geom::TriIdx> expected_t{{0, 2, 1}, {0, 1, 3}, {2, 1, 3}};
  CHECK(t == expected_t);
}

TEST_CASE("selection is empty when every vertex lies outside C") {
  const PointSet pts(std::vector<Point>{{0.6, 0.6}, {0.9, 0.6}, {0.7, 0.9}, {0.8, 0.8}});
  const auto sel = geom::select_ordered(geom::triangulate(pts));
  CHECK(sel.e_n.empty());
  CHECK(sel.dt_n.empty());
}

TEST_CASE("edge and triangle intensities") {
  const double n = 2000.0;
  const geom::WindowSpec spec{n, geom::WindowSpec::default_pad(n)};
  double e = 0.0, t = 0.0;
  const int reps = 5;
  for (int k = 0; k < reps; ++k) {
    auto s = rng::substream(6, "intensity", {static_cast<std::uint64_t>(k)});
    const auto sel = geom::select_ordered(geom::triangulate(geom::sample_poisson(spec, s)));
    e += static_cast<double>(sel.e_n.size()) / n;
    t += static_cast<double>(sel.dt_n.size()) / n;
  }
  CHECK(e / reps > 2.85);
  CHECK(e / reps < 3.15);
  CHECK(t / reps > 1.90);
  CHECK(t / reps < 2.10);
}

TEST_CASE("text dump format") {
  const auto dt = geom::triangulate(PointSet(std::vector<Point>{{0, 0}, {1, 0}, {0, 0.1}}));
  std::ostringstream out;
  geom::write_complex(out, dt);
  const std::string s = out.str();
  CHECK(s.find("v 0 0\n") == 0);
  CHECK(s.find("v 0 0.10000000000000001\n") != std::string::npos);
  CHECK(s.find("t ") != std::string::npos);
}
