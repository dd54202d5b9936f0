#include <doctest.h>

#include <cmath>
#include <set>

#include "conesurf/builtin.hpp"
#include "conesurf/tracer.hpp"
#include "conesurf/unfolding.hpp"

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

// independent oracle: Z^2 translates of the two base triangles meeting the disk
int torusLatticeCellCount(const Surface& s, const Vec2& c, double R) {
  auto dist = [&](Vec2 a, Vec2 b, Vec2 cc) {
    if (cross2(b - a, c - a) >= 0 && cross2(cc - b, c - b) >= 0 && cross2(a - cc, c - cc) >= 0)
      return 0.0;
    auto seg = [&](Vec2 u, Vec2 v) {
      Vec2 uv = v - u;
      double t = std::clamp((c - u).dot(uv) / uv.squaredNorm(), 0.0, 1.0);
      return (u + t * uv - c).norm();
    };
    return std::min({seg(a, b), seg(b, cc), seg(cc, a)});
  };
  int count = 0;
  for (int i = -6; i <= 6; ++i)
    for (int j = -6; j <= 6; ++j)
      for (const Tri& t : s.tris) {
        const Vec2 d(i, j);
        if (dist(t.v[0] + d, t.v[1] + d, t.v[2] + d) < R) ++count;
      }
  return count;
}

}  // namespace

TEST_CASE("torus disk cell count matches the lattice oracle") {
  Surface s = builtinSurface("square_torus");
  const Vec2 base(0.5, 0.5);
  for (double R : {0.6, 1.3, 2.5}) {
    UnfoldingTree tree = unfoldDisk(s, chartPoint(s, base), R);
    CHECK((int)tree.cells().size() == torusLatticeCellCount(s, base, R));
  }
}

TEST_CASE("radius below the inradius keeps a single cell") {
  Surface s = builtinSurface("square_torus");
  // centroid of the root triangle, tiny radius
  const Tri& t = s.tris[0];
  const Vec2 c = (t.v[0] + t.v[1] + t.v[2]) / 3.0;
  UnfoldingTree tree(s, SurfacePoint{0, c, -1}, 0.05);
  CHECK(tree.cells().size() == 1);
}

TEST_CASE("sigma unfolding contains distinct cells with the same source") {
  Surface s = builtinSurface("example_sigma");
  UnfoldingTree tree = unfoldDisk(s, chartPoint(s, {0.5, 1.2}), 1.5 * s.diameterEstimate);
  std::set<int> sources;
  bool dup = false;
  std::map<int, int> bySource;
  for (int c : tree.cells()) {
    if (++bySource[tree.complex().cell(c).tri] >= 2) dup = true;
  }
  CHECK(dup);
}

TEST_CASE("deck words are unique per cell and monotone under radius growth") {
  Surface s = builtinSurface("example_sigma");
  const SurfacePoint base = chartPoint(s, {0.5, 1.2});
  UnfoldingTree small = unfoldDisk(s, base, 4.0);
  UnfoldingTree big = unfoldDisk(s, base, 6.0);
  auto keys = [&](const UnfoldingTree& t) {
    std::set<std::pair<int, std::string>> k;
    for (int c : t.cells()) k.insert({t.complex().cell(c).tri, t.word(c).str(s)});
    return k;
  };
  auto ks = keys(small);
  auto kb = keys(big);
  CHECK(ks.size() == small.cells().size()); // no two cells share (source, word)
  CHECK(kb.size() == big.cells().size());
  for (const auto& k : ks) CHECK(kb.count(k));
}

TEST_CASE("fan angles around interior lifted vertices sum to the class angle") {
  // large cones probed on the raw complex (disk trees around an in-disk 6pi
  // cone wander and hit the resource cap by design)
  for (const char* name : {"octagon_genus2", "mixed_torus", "example_sigma"}) {
    Surface s = builtinSurface(name);
    LiftComplex cx(s, 0);
    for (int e = 0; e < 3; ++e) cx.ensureNeighbor(0, e);
    int checked = 0;
    std::set<int> seen;
    for (int c = 0; c < (int)cx.cellCount(); ++c) {
      for (int k = 0; k < 3; ++k) {
        cx.completeFan(cx.cell(c).lv[k]);
        const int lv = cx.liveVertex(cx.cell(c).lv[k]);
        if (!seen.insert(lv).second) continue;
        if (!cx.vertex(lv).closed) continue;
        double acc = 0;
        for (const auto& cc : cx.fanCorners(lv))
          acc += s.cornerAngle(Corner{cx.cell(cc.cell).tri, cc.k});
        CHECK(acc == doctest::Approx(s.classes[cx.vertex(lv).classId].angle).epsilon(1e-9));
        ++checked;
      }
      if (checked > 6) break;
    }
    CHECK(checked > 0);
  }
}

TEST_CASE("disk unfolding around an in-disk large cone hits the resource cap") {
  Surface s = builtinSurface("octagon_genus2");
  s.tol.maxCells = 20000;
  const Tri& t = s.tris[0];
  const Vec2 c = (t.v[0] + t.v[1] + t.v[2]) / 3.0;
  CHECK_THROWS_AS(UnfoldingTree(s, SurfacePoint{0, c, -1}, 1.0), Error);
}

TEST_CASE("developing a torus closed trace gives the lattice translation") {
  Surface s = builtinSurface("square_torus");
  GeodesicPath g = traceRay(s, chartPoint(s, {0.5, 0.5}), Direction{std::atan2(1.0, 2.0)},
                            std::sqrt(5.0));
  REQUIRE(g.closed);
  Development d = developPath(s, g);
  CHECK(d.endMotion.t.x() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(d.endMotion.t.y() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(d.endMotion.angle()) < 1e-9);
  // development isometry
  double devLen = 0;
  for (size_t i = 0; i + 1 < d.polyline.size(); ++i)
    devLen += (d.polyline[i + 1] - d.polyline[i]).norm();
  CHECK(devLen == doctest::Approx(g.length).epsilon(1e-9));
}

TEST_CASE("develop against a tree reports escapes") {
  Surface s = builtinSurface("square_torus");
  UnfoldingTree tree(s, chartPoint(s, {0.5, 0.5}), 0.8);
  GeodesicPath g = traceRay(s, chartPoint(s, {0.5, 0.5}), Direction{0.0}, 3.0);
  CHECK_THROWS_AS(developPathInTree(tree, g), Error);
}

TEST_CASE("tree dump is valid JSON with cells and words") {
  Surface s = builtinSurface("square_torus");
  UnfoldingTree tree(s, chartPoint(s, {0.5, 0.5}), 1.2);
  const std::string j = tree.dumpJson();
  CHECK(j.find("\"cells\"") != std::string::npos);
  CHECK(j.find("\"word\"") != std::string::npos);
}
