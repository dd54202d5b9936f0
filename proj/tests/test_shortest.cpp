#include <doctest.h>

#include <cmath>

#include "conesurf/builtin.hpp"
#include "conesurf/shortest.hpp"
#include "conesurf/tracer.hpp"

using namespace conesurf;

namespace {

SurfacePoint chartPoint(const Surface& s, const Vec2& p) {
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

int classWithAngle(const Surface& s, double angle) {
  for (const auto& c : s.classes)
    if (std::abs(c.angle - angle) < 1e-9) return c.id;
  return -1;
}

}  // namespace

TEST_CASE("torus word a^2 b has the unique lattice segment sqrt(5)") {
  Surface s = builtinSurface("square_torus");
  const SurfacePoint p = chartPoint(s, {0.5, 0.5});
  HomotopyWord w = parseWord(s, "a a b", false);
  auto reps = shortestSegment(s, p, p, w, 6.0);
  REQUIRE(!reps.empty());
  CHECK(reps.front().length == doctest::Approx(std::sqrt(5.0)).epsilon(1e-9));
  // unique up to the tie tolerance
  for (const auto& r : reps) CHECK(r.length == doctest::Approx(std::sqrt(5.0)).epsilon(1e-7));
  LocalGeodesicReport lg = checkLocalGeodesic(s, reps.front().path);
  CHECK(lg.locallyGeodesic);
}

TEST_CASE("trivial word in one triangle gives the straight chart segment") {
  Surface s = builtinSurface("square_torus");
  const SurfacePoint p = chartPoint(s, {0.3, 0.2});
  const SurfacePoint q = chartPoint(s, {0.6, 0.35});
  HomotopyWord w; // empty
  auto reps = shortestSegment(s, p, q, w, 3.0);
  REQUIRE(!reps.empty());
  CHECK(reps.front().length ==
        doctest::Approx((Vec2(0.6, 0.35) - Vec2(0.3, 0.2)).norm()).epsilon(1e-7));
}

TEST_CASE("sigma: two periods from a mid-arc point give two equal minimizers") {
  Surface s = builtinSurface("example_sigma");
  // p on the sigma arc between B=(0,1) and B1=(-0.5,0.5) in h1
  const SurfacePoint p = chartPoint(s, {-0.25, 0.75});
  HomotopyWord w = parseWord(s, "f d' f d'", false);
  auto reps = shortestSegment(s, p, p, w, 8.0);
  REQUIRE(reps.size() >= 2);
  const double L = 2 * std::sqrt(2.0);
  CHECK(reps[0].length == doctest::Approx(L).epsilon(1e-9));
  CHECK(reps[1].length == doctest::Approx(L).epsilon(1e-9));
  for (const auto& r : reps) {
    LocalGeodesicReport lg = checkLocalGeodesic(s, r.path);
    CHECK(lg.locallyGeodesic);
  }
}

TEST_CASE("sigma class representatives from the 3pi cone: 2^k members in the envelope") {
  Surface s = builtinSurface("example_sigma");
  const int bClass = classWithAngle(s, 3 * EIGEN_PI);
  REQUIRE(bClass >= 0);
  SurfacePoint base;
  base.coneClass = bClass;
  const double period = std::sqrt(2.0);
  const int k = 3;
  HomotopyWord wk = parseWord(s, "a c' a c' a c'", false);
  ExtremalPairResult r = classRepresentatives(s, base, base, wk, 4 * k * period);
  CHECK((int)r.members.size() == 8);
  for (const auto& m : r.members) {
    CHECK(m.length == doctest::Approx(k * period).epsilon(1e-9));
    for (const auto& pt : m.devel) CHECK(insidePolygon(r.envelope, pt, 1e-9));
  }
  // extremes are the all-one-type arc sequences: straight developments
  const auto& L = r.members.front();
  const auto& R = r.members.back();
  for (double t : L.turns) CHECK(std::abs(t) < 1e-9);
  for (double t : R.turns) CHECK(std::abs(t) < 1e-9);
  // xi points all land on the chord between the extreme endpoints
  const Vec2 yl = L.devel.back(), yr = R.devel.back();
  for (const auto& x : r.xi) {
    const double d = std::abs(cross2((yr - yl).normalized(), x - yl));
    CHECK(d < 1e-9);
  }
}

TEST_CASE("bifurcation scan: sigma bifurcates at every power, torus never") {
  Surface sigma = builtinSurface("example_sigma");
  const int bClass = classWithAngle(sigma, 3 * EIGEN_PI);
  SurfacePoint base;
  base.coneClass = bClass;
  auto entries = bifurcationScan(sigma, base, {parseWord(sigma, "a c'", true)}, 4,
                                 4 * 4 * std::sqrt(2.0));
  REQUIRE(entries.size() == 4);
  for (const auto& e : entries) {
    INFO(e.word, "^", e.power, " -> ", e.status);
    CHECK(e.status == "ok");
    CHECK(e.bifurcates);
    CHECK(e.count == (1 << e.power));
    CHECK(sigma.classes[e.divergenceClass].angle > 2 * EIGEN_PI + 1e-9);
  }

  Surface torus = builtinSurface("square_torus");
  auto te = bifurcationScan(torus, chartPoint(torus, {0.5, 0.5}),
                            {parseWord(torus, "a", true), parseWord(torus, "b", true)}, 3, 4.0);
  for (const auto& e : te) {
    if (e.status != "ok") continue;
    CHECK(!e.bifurcates);
  }
}
