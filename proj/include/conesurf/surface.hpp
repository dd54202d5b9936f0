#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "conesurf/motion.hpp"

namespace conesurf {

enum class ErrorKind { Schema, Geometry, Topology, Input, Resource, Unreachable, Infeasible, Internal };

struct Error : std::runtime_error {
  ErrorKind kind;
  Error(ErrorKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

struct Tolerances {
  double epsLen = 1e-9;      // gluing length mismatch
  double epsInc = 1e-9;      // incidence / grazing
  double epsAng = 1e-9;      // angle comparisons (radians)
  double epsTieRel = 1e-7;   // equal-length ties, relative
  double epsStopRel = 1e-10; // shortening stop, relative
  std::size_t maxCells = 1000000;
  std::size_t maxIterations = 100000;
  std::size_t branchCap = 16384; // representatives per class
};

struct Polygon {
  std::string id;
  std::vector<Vec2> vertices; // cyclic, CCW, simple
};

struct EdgeRef {
  int poly = -1;
  int edge = -1;
  bool operator==(const EdgeRef& o) const { return poly == o.poly && edge == o.edge; }
};

struct Gluing {
  EdgeRef a, b;
  RigidMotion motion; // maps b's chart onto a's chart, edges coincide with opposite orientations
  std::string name;   // CLI letter
};

enum class ConeKind { Small, Regular, Large };

// Triangle-level corner handle.
struct Corner {
  int tri = -1;
  int k = -1; // 0..2
  bool operator==(const Corner& o) const { return tri == o.tri && k == o.k; }
};

struct VertexClass {
  int id = -1;
  std::vector<std::pair<int, int>> members; // (polygon, vertex index)
  double angle = 0;
  bool boundary = false;
  ConeKind kind = ConeKind::Regular;
  // Corner cycle (interior: cyclic; boundary: chain), CCW order, with the
  // accumulated angular offset of each corner's out-ray from the cycle start.
  std::vector<Corner> cycle;
  std::vector<double> offsets;
};

struct Link {
  int tri = -1;   // -1: boundary
  int edge = -1;  // reciprocal edge on neighbor
  RigidMotion motion; // neighbor chart -> this chart
  int letter = 0; // 0: interior diagonal; +(g+1): gluing g crossed from side a; -(g+1): from side b
};

struct Tri {
  int poly = -1;
  std::array<Vec2, 3> v;      // chart coordinates (polygon chart)
  std::array<int, 3> pvertex; // polygon vertex indices
  std::array<Link, 3> link;   // edge k runs v[k] -> v[k+1]
  std::array<int, 3> vclass;  // vertex class ids
};

struct SurfacePoint {
  int tri = -1; // -1 when referring to a cone class
  Vec2 pos{0, 0};
  int coneClass = -1;
};

struct ValidationReport {
  bool ok = true;
  double gaussBonnetResidual = 0;
  std::vector<double> gluingLengthResiduals;
  int eulerCharacteristic = 0;
  int genus = 0;
  int boundaryComponents = 0;
  std::vector<std::pair<double, ConeKind>> coneAngles; // non-regular classes
  double totalArea = 0;
  std::vector<std::string> failures;
};

class Surface {
public:
  std::string name;
  std::vector<Polygon> polygons;
  std::vector<Gluing> gluings;
  std::vector<Tri> tris;
  std::vector<VertexClass> classes;
  int eulerCharacteristic = 0;
  int genus = 0;
  int boundaryComponents = 0;
  double area = 0;
  double diameterEstimate = 0;
  Tolerances tol;

  int classOf(const Corner& c) const { return tris[c.tri].vclass[c.k]; }
  int cycleIndexOf(const Corner& c) const;
  double cornerAngle(const Corner& c) const;
  // Canonical class coordinate in [0, angle) of a chart direction d emanating
  // from the corner's vertex inside that corner's wedge.
  double canonicalAngle(const Corner& c, const Vec2& d) const;

  // Owning (triangle, edge) of a polygon boundary edge.
  std::pair<int, int> triEdgeOfPolygonEdge(const EdgeRef& e) const;
  // Polygon edge represented by a triangle edge, if any.
  std::optional<EdgeRef> polygonEdgeOfTriEdge(int tri, int edge) const;

  // Edge indices to cross (diagonal links) walking from triangle `fromTri` to
  // `toTri` within one polygon.
  std::vector<int> diagonalPath(int fromTri, int toTri) const;

  const Gluing* gluingByName(const std::string& n) const;

  void finalize(); // triangulate, derive links/classes/topology; throws on invalid input

private:
  std::map<std::pair<int, int>, std::pair<int, int>> polyEdgeOwner_;
  std::map<std::pair<int, int>, int> cycleIndex_; // (tri, k) -> index in class cycle
};

Surface parseSurface(const std::string& jsonText, const Tolerances& tol = {});
std::string serializeSurface(const Surface& s);
ValidationReport validateSurface(const Surface& s);

std::string kindName(ConeKind k);

}  // namespace conesurf
