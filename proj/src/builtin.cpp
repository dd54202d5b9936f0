#include "conesurf/builtin.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace conesurf {

using nlohmann::ordered_json;

namespace {

Surface fromJson(const ordered_json& j, const Tolerances& tol) {
  return parseSurface(j.dump(), tol);
}

// Unit square, left~right and top~bottom. One regular vertex class of angle 2*pi.
ordered_json squareTorus() {
  ordered_json j;
  j["name"] = "square_torus";
  j["polygons"] = {{{"id", "sq"}, {"vertices", {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}}}};
  // a: right ~ left (crossing right = letter a), b: top ~ bottom
  j["gluings"] = {{{"a", {"sq", 1}}, {"b", {"sq", 3}}}, {{"a", {"sq", 2}}, {"b", {"sq", 0}}}};
  return j;
}

// Regular octagon of side 1, opposite sides glued by translation; one cone of 6*pi.
ordered_json octagonGenus2() {
  const double R = 0.5 / std::sin(EIGEN_PI / 8.0);
  ordered_json verts = ordered_json::array();
  for (int k = 0; k < 8; ++k) {
    const double a = (2 * k + 1) * EIGEN_PI / 8.0;
    verts.push_back({R * std::cos(a), R * std::sin(a)});
  }
  ordered_json j;
  j["name"] = "octagon_genus2";
  j["polygons"] = {{{"id", "oct"}, {"vertices", verts}}};
  j["gluings"] = ordered_json::array();
  for (int k = 0; k < 4; ++k)
    j["gluings"].push_back({{"a", {"oct", k}}, {"b", {"oct", k + 4}}});
  return j;
}

// Closed genus-1 surface with cone angles {pi, 3pi}: one hexagon with a fold at
// the flat vertex B and two side pairings. Exact rational coordinates keep the
// paired side lengths identical.
ordered_json mixedTorus() {
  ordered_json j;
  j["name"] = "mixed_torus";
  j["polygons"] = {{{"id", "hex"},
                    {"vertices",
                     {{0.0, 0.0},            // A
                      {1.0, 0.0},            // B (flat; fold point, angle pi)
                      {2.0, 0.0},            // C
                      {2.5, 1.0},            // D
                      {61.0 / 58.0, 69.0 / 29.0}, // E
                      {0.0, 2.0}}}}};        // F
  // a: AB ~ BC (fold, rotation by pi about B); b: CD ~ EF; c: DE ~ FA
  j["gluings"] = {{{"a", {"hex", 0}}, {"b", {"hex", 1}}},
                  {{"a", {"hex", 2}}, {"b", {"hex", 4}}},
                  {{"a", {"hex", 3}}, {"b", {"hex", 5}}}};
  return j;
}

// The bordered cylinder with cone angles {pi, 3pi}: two mirror-image hexagons
// with marked points B1, B2 on the slanted sides, glued along everything except
// the CE and ZD sides (which become the two geodesic boundary circles).
// The marked points sit so that B->B1 continues straight across the gluing,
// making both B-B1-B' and B-B2-B' closed geodesics of length sqrt(2).
ordered_json exampleSigma() {
  const double c = 2.0, u = 0.5;
  ordered_json j;
  j["name"] = "example_sigma";
  j["polygons"] = ordered_json::array();
  // H1: A B2 C E B Z D B1 (CCW)
  j["polygons"].push_back(
      {{"id", "h1"},
       {"vertices",
        {{0.0, 0.0}, {u, u}, {c, c}, {c - u, c + u}, {0.0, 2 * u}, {u - c, c + u}, {-c, c}, {-u, u}}}});
  // H2: mirror image listed CCW: A B1' D' Z' B' E' C' B2'
  j["polygons"].push_back(
      {{"id", "h2"},
       {"vertices",
        {{0.0, 0.0}, {-u, -u}, {-c, -c}, {u - c, -c - u}, {0.0, -2 * u}, {c - u, -c - u}, {c, -c}, {u, -u}}}});
  j["gluings"] = ordered_json::array();
  // a: A-B2 ~ B2'-A      (h1 e0 ~ h2 e7)
  j["gluings"].push_back({{"a", {"h1", 0}}, {"b", {"h2", 7}}});
  // b: B2-C ~ C'-B2'     (h1 e1 ~ h2 e6)
  j["gluings"].push_back({{"a", {"h1", 1}}, {"b", {"h2", 6}}});
  // c: E-B ~ B'-E'       (h1 e3 ~ h2 e4)
  j["gluings"].push_back({{"a", {"h1", 3}}, {"b", {"h2", 4}}});
  // d: B-Z ~ Z'-B'       (h1 e4 ~ h2 e3)
  j["gluings"].push_back({{"a", {"h1", 4}}, {"b", {"h2", 3}}});
  // e: D-B1 ~ B1'-D'     (h1 e6 ~ h2 e1)
  j["gluings"].push_back({{"a", {"h1", 6}}, {"b", {"h2", 1}}});
  // f: B1-A ~ A-B1'      (h1 e7 ~ h2 e0)
  j["gluings"].push_back({{"a", {"h1", 7}}, {"b", {"h2", 0}}});
  return j;
}

}  // namespace

std::vector<std::string> builtinNames() {
  return {"square_torus", "octagon_genus2", "mixed_torus", "example_sigma"};
}

Surface builtinSurface(const std::string& name, const Tolerances& tol) {
  if (name == "square_torus") return fromJson(squareTorus(), tol);
  if (name == "octagon_genus2") return fromJson(octagonGenus2(), tol);
  if (name == "mixed_torus") return fromJson(mixedTorus(), tol);
  if (name == "example_sigma") return fromJson(exampleSigma(), tol);
  throw Error(ErrorKind::Input, "unknown builtin surface '" + name + "'");
}

}  // namespace conesurf
