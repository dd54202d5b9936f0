#pragma once

#include <string>
#include <vector>

#include "conesurf/surface.hpp"

namespace conesurf {

// Direction as a chart angle in [0, 2*pi), relative to a named triangle's chart.
struct Direction {
  double angle = 0;
  Vec2 vec() const { return dirOfAngle(angle); }
  static Direction fromVec(const Vec2& v) { return Direction{normalizeAngle(std::atan2(v.y(), v.x()))}; }
};

// Reduced sequence of oriented gluing crossings. Letter +(g+1): gluing g crossed
// from side a; -(g+1): crossed from side b.
struct HomotopyWord {
  std::vector<int> letters;
  bool cyclic = false;

  void reduce();
  bool reduced() const;
  HomotopyWord inverse() const;
  std::string str(const Surface& s) const;
};

HomotopyWord parseWord(const Surface& s, const std::string& text, bool cyclic);
HomotopyWord wordPower(const HomotopyWord& w, int k);

struct ConePassage {
  int coneClass = -1;
  double leftAngle = 0;  // side swept CCW from the outgoing ray to the reversed incoming ray
  double rightAngle = 0; // class angle minus leftAngle
  std::vector<std::pair<int, int>> chain; // (tri, edge) crossings realizing the development side
  double turn = 0;       // planar turn of the development at this passage (signed, CCW positive)
};

struct PathEvent {
  enum Kind { Seg, Cross, Pass, ConeHit, BoundaryHit } kind;
  // Seg
  int tri = -1;
  Vec2 p0{0, 0}, p1{0, 0};
  // Cross
  int letter = 0; // 0 = interior diagonal
  int crossTri = -1, crossEdge = -1;
  // Pass / ConeHit
  ConePassage pass;
  int coneClass = -1;
  // BoundaryHit
  int bTri = -1, bEdge = -1;
};

struct GeodesicPath {
  std::vector<PathEvent> events;
  bool closed = false;
  double length = 0;
  HomotopyWord word;
  SurfacePoint start, end;

  void recomputeLength();
};

struct LocalGeodesicReport {
  double straightnessResidual = 0;
  double worstPassageMargin = 0; // min over passages of min(left,right) - pi; +inf if none
  bool locallyGeodesic = false;
};

std::string serializePath(const Surface& s, const GeodesicPath& p);

}  // namespace conesurf
