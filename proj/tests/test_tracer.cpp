#include <doctest.h>

#include <cmath>
#include <random>

#include "conesurf/builtin.hpp"
#include "conesurf/tracer.hpp"

using namespace conesurf;

namespace {

SurfacePoint chartPoint(const Surface& s, const Vec2& p) {
  // locate a polygon-chart point in the triangulation (first polygon)
  for (int t = 0; t < (int)s.tris.size(); ++t) {
    const Tri& tr = s.tris[t];
    if (tr.poly != 0) continue;
    const double d1 = cross2(tr.v[1] - tr.v[0], p - tr.v[0]);
    const double d2 = cross2(tr.v[2] - tr.v[1], p - tr.v[1]);
    const double d3 = cross2(tr.v[0] - tr.v[2], p - tr.v[2]);
    if (d1 >= -1e-12 && d2 >= -1e-12 && d3 >= -1e-12) return SurfacePoint{t, p, -1};
  }
  throw Error(ErrorKind::Input, "point not on polygon 0");
}

}  // namespace

TEST_CASE("torus horizontal trace closes with word a^3") {
  Surface s = builtinSurface("square_torus");
  GeodesicPath g = traceRay(s, chartPoint(s, {0.5, 0.5}), Direction{0.0}, 3.0);
  CHECK(g.closed);
  CHECK(g.length == doctest::Approx(3.0).epsilon(1e-12));
  REQUIRE(g.word.letters.size() == 3);
  for (int l : g.word.letters) CHECK(l == 1);
  LocalGeodesicReport r = checkLocalGeodesic(s, g);
  CHECK(r.locallyGeodesic);
  CHECK(r.straightnessResidual < 1e-9);
}

TEST_CASE("torus lattice direction (2,1) returns to start at length sqrt(5)") {
  Surface s = builtinSurface("square_torus");
  const double L = std::sqrt(5.0);
  GeodesicPath g = traceRay(s, chartPoint(s, {0.5, 0.5}), Direction{std::atan2(1.0, 2.0)}, L);
  CHECK(g.closed);
  CHECK((g.end.pos - Vec2(0.5, 0.5)).norm() < 1e-9);
}

TEST_CASE("cross edge on the torus translates across the gluing") {
  Surface s = builtinSurface("square_torus");
  SurfacePoint p;
  bool found = false;
  for (int t = 0; t < (int)s.tris.size() && !found; ++t)
    for (int e = 0; e < 3; ++e) {
      const Tri& tr = s.tris[t];
      const Vec2 mid = 0.5 * (tr.v[e] + tr.v[(e + 1) % 3]);
      if (std::abs(mid.x() - 1.0) < 1e-12 && std::abs(mid.y() - 0.5) < 1e-12) {
        p = SurfacePoint{t, mid, -1};
        found = true;
      }
    }
  REQUIRE(found);
  auto [q, w] = crossEdge(s, p, Direction{0.0});
  CHECK(q.pos.x() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(q.pos.y() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(w.angle) < 1e-12);
}

TEST_CASE("transport consistency: crossing and crossing back is the identity") {
  std::mt19937_64 rng(71);
  for (const auto& name : builtinNames()) {
    Surface s = builtinSurface(name);
    std::uniform_real_distribution<double> u(0.15, 0.85);
    int done = 0;
    for (int attempt = 0; attempt < 400 && done < 40; ++attempt) {
      const int t = (int)(rng() % s.tris.size());
      const int e = (int)(rng() % 3);
      const Link& l = s.tris[t].link[e];
      if (l.tri < 0) continue;
      const Tri& tr = s.tris[t];
      const Vec2 a = tr.v[e], b = tr.v[(e + 1) % 3];
      const Vec2 p = a + u(rng) * (b - a);
      const Vec2 ev = (b - a).normalized();
      const Vec2 n(ev.y(), -ev.x()); // outward
      const double ang = std::atan2(n.y(), n.x()) + (u(rng) - 0.5);
      SurfacePoint sp{t, p, -1};
      Direction d{normalizeAngle(ang)};
      auto [q, w] = crossEdge(s, sp, d);
      Direction wback{normalizeAngle(w.angle + EIGEN_PI)};
      auto [q2, w2] = crossEdge(s, q, wback);
      CHECK((q2.pos - p).norm() < 1e-9);
      const double back = normalizeAngle(w2.angle - (d.angle + EIGEN_PI));
      CHECK(std::min(back, 2.0 * (double)EIGEN_PI - back) < 1e-9);
      ++done;
    }
    CHECK(done >= 20);
  }
}

TEST_CASE("length additivity when no cone point is hit") {
  Surface s = builtinSurface("octagon_genus2");
  const SurfacePoint p = chartPoint(s, {0.05, -0.02});
  const Direction v{0.37};
  const double L1 = 0.9, L2 = 1.1;
  GeodesicPath g1 = traceRay(s, p, v, L1);
  REQUIRE(g1.end.tri >= 0);
  Vec2 dir = (g1.events.rbegin()->p1 - g1.events.rbegin()->p0).normalized();
  GeodesicPath g2 = traceRay(s, g1.end, Direction::fromVec(dir), L2);
  GeodesicPath g = traceRay(s, p, v, L1 + L2);
  CHECK(g.length == doctest::Approx(L1 + L2).epsilon(1e-12));
  CHECK(g2.end.tri == g.end.tri);
  CHECK((g2.end.pos - g.end.pos).norm() < 1e-9);
}

TEST_CASE("aiming at the small cone point of mixed_torus terminates with a cone hit") {
  Surface s = builtinSurface("mixed_torus");
  const Vec2 start(1.0, 0.5);
  const SurfacePoint p = chartPoint(s, start);
  const Vec2 target(1.0, 0.0); // B, the pi cone
  GeodesicPath g = traceRay(s, p, Direction::fromVec(target - start), 5.0);
  REQUIRE(!g.events.empty());
  CHECK(g.events.back().kind == PathEvent::ConeHit);
  const int cls = g.events.back().coneClass;
  CHECK(s.classes[cls].angle == doctest::Approx(EIGEN_PI).epsilon(1e-9));
  CHECK(g.length == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("min clearance is infinite on the torus and positive on traces elsewhere") {
  Surface torus = builtinSurface("square_torus");
  GeodesicPath g = traceRay(torus, chartPoint(torus, {0.5, 0.5}), Direction{0.1}, 2.0);
  auto [d, wit] = minClearance(torus, g, true);
  CHECK(std::isinf(d));
  CHECK(wit == -1);

  Surface mixed = builtinSurface("mixed_torus");
  GeodesicPath h = traceRay(mixed, chartPoint(mixed, {0.6, 0.9}), Direction{0.2}, 1.0);
  auto [d2, wit2] = minClearance(mixed, h, true);
  CHECK(d2 > 0);
  CHECK(d2 < 10);
  CHECK(wit2 >= 0);
}

TEST_CASE("a bent polyline is not locally geodesic") {
  Surface s = builtinSurface("square_torus");
  GeodesicPath g;
  const int t = chartPoint(s, {0.5, 0.2}).tri;
  PathEvent a;
  a.kind = PathEvent::Seg;
  a.tri = t;
  a.p0 = {0.3, 0.1};
  a.p1 = {0.5, 0.2};
  PathEvent b = a;
  b.p0 = {0.5, 0.2};
  b.p1 = {0.7, 0.32}; // bent by ~0.1 rad
  g.events = {a, b};
  g.recomputeLength();
  LocalGeodesicReport r = checkLocalGeodesic(s, g);
  CHECK(!r.locallyGeodesic);
  CHECK(r.straightnessResidual > 1e-9);
}
