#include <doctest.h>

#include <cmath>

#include "conesurf/builtin.hpp"

using namespace conesurf;

TEST_CASE("square torus validates with a single regular vertex class") {
  Surface s = builtinSurface("square_torus");
  ValidationReport r = validateSurface(s);
  CHECK(r.ok);
  CHECK(r.eulerCharacteristic == 0);
  CHECK(r.genus == 1);
  CHECK(r.boundaryComponents == 0);
  CHECK(r.gaussBonnetResidual < 1e-9);
  CHECK(r.coneAngles.empty());
  REQUIRE(s.classes.size() == 1);
  CHECK(s.classes[0].kind == ConeKind::Regular);
  CHECK(s.classes[0].angle == doctest::Approx(2 * EIGEN_PI).epsilon(1e-12));
}

TEST_CASE("octagon glues to a genus-2 surface with one 6pi cone") {
  Surface s = builtinSurface("octagon_genus2");
  ValidationReport r = validateSurface(s);
  CHECK(r.ok);
  CHECK(r.eulerCharacteristic == -2);
  CHECK(r.genus == 2);
  REQUIRE(s.classes.size() == 1);
  // oracle: eight interior angles of 3pi/4 sum to 6pi
  CHECK(s.classes[0].angle == doctest::Approx(8 * (3 * EIGEN_PI / 4)).epsilon(1e-12));
  CHECK(s.classes[0].kind == ConeKind::Large);
}

TEST_CASE("mixed torus carries cone angles pi and 3pi") {
  Surface s = builtinSurface("mixed_torus");
  ValidationReport r = validateSurface(s);
  CHECK(r.ok);
  CHECK(r.eulerCharacteristic == 0);
  CHECK(r.genus == 1);
  CHECK(r.boundaryComponents == 0);
  REQUIRE(r.coneAngles.size() == 2);
  CHECK(r.coneAngles[0].first == doctest::Approx(EIGEN_PI).epsilon(1e-9));
  CHECK(r.coneAngles[0].second == ConeKind::Small);
  CHECK(r.coneAngles[1].first == doctest::Approx(3 * EIGEN_PI).epsilon(1e-9));
  CHECK(r.coneAngles[1].second == ConeKind::Large);
}

TEST_CASE("example sigma is a bordered cylinder with angles pi and 3pi") {
  Surface s = builtinSurface("example_sigma");
  ValidationReport r = validateSurface(s);
  CHECK(r.ok);
  CHECK(r.eulerCharacteristic == 0);
  CHECK(r.genus == 0);
  CHECK(r.boundaryComponents == 2);
  REQUIRE(r.coneAngles.size() == 2);
  CHECK(r.coneAngles[0].first == doctest::Approx(EIGEN_PI).epsilon(1e-9));
  CHECK(r.coneAngles[1].first == doctest::Approx(3 * EIGEN_PI).epsilon(1e-9));
}

TEST_CASE("length-mismatched gluing is a geometry error") {
  const char* doc = R"({
    "polygons": [
      {"id": "a", "vertices": [[0,0],[1,0],[1,1],[0,1]]},
      {"id": "b", "vertices": [[2,0],[3.01,0],[3.01,1],[2,1]]}
    ],
    "gluings": [{"a": ["a", 0], "b": ["b", 2]}]
  })";
  CHECK_THROWS_AS(parseSurface(doc), Error);
}

TEST_CASE("serialization round-trips cone angles") {
  for (const auto& name : builtinNames()) {
    Surface s = builtinSurface(name);
    Surface t = parseSurface(serializeSurface(s));
    REQUIRE(t.classes.size() == s.classes.size());
    // identical vertex coordinates give bit-identical angles up to class order
    std::vector<double> a, b;
    for (auto& c : s.classes) a.push_back(c.angle);
    for (auto& c : t.classes) b.push_back(c.angle);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
  }
}

TEST_CASE("triangulation preserves total area") {
  Surface s = builtinSurface("example_sigma");
  double polyArea = 0;
  for (const auto& p : s.polygons) {
    double acc = 0;
    for (size_t i = 0; i < p.vertices.size(); ++i) {
      const Vec2& u = p.vertices[i];
      const Vec2& v = p.vertices[(i + 1) % p.vertices.size()];
      acc += u.x() * v.y() - v.x() * u.y();
    }
    polyArea += 0.5 * acc;
  }
  CHECK(std::abs(s.area - polyArea) < 1e-9 * std::abs(polyArea));
}

TEST_CASE("gluing motions map side b endpoints onto side a endpoints swapped") {
  for (const auto& name : builtinNames()) {
    Surface s = builtinSurface(name);
    for (const auto& g : s.gluings) {
      const auto& va = s.polygons[g.a.poly].vertices;
      const auto& vb = s.polygons[g.b.poly].vertices;
      const int na = (int)va.size(), nb = (int)vb.size();
      CHECK((g.motion(vb[g.b.edge]) - va[(g.a.edge + 1) % na]).norm() < 1e-9);
      CHECK((g.motion(vb[(g.b.edge + 1) % nb]) - va[g.a.edge]).norm() < 1e-9);
    }
  }
}
