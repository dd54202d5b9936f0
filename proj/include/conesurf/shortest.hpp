#pragma once

#include "conesurf/unfolding.hpp"
#include "conesurf/visibility.hpp"

namespace conesurf {

struct Representative {
  GeodesicPath path;
  std::vector<CellSeg> trace; // complex-level trace (intersection checks)
  std::vector<Vec2> devel;    // own development, root frame
  double length = 0;
  std::vector<double> turns;  // planar turn per passage
  double depCanon = -1;       // departure class coordinate (vertex bases)
  struct PassMark {
    int lv = -1;               // live lifted-vertex id of the passage
    int inSeg = -1, outSeg = -1; // trace indices adjacent to the vertex
  };
  std::vector<PassMark> passMarks;
};

// All global minimizers from p to the lift of q under word w, within epsTie.
std::vector<Representative> shortestSegment(const Surface& s, const SurfacePoint& p,
                                            const SurfacePoint& q, const HomotopyWord& w,
                                            double rCap);

struct ExtremalPairResult {
  std::vector<Representative> members; // ordered leftmost..rightmost
  std::vector<Vec2> xi;                // developed endpoints per member
  std::vector<Vec2> envelope;          // closed polygon: left dev + chord + reversed right dev
  bool capped = false;
  double minLength = 0, maxLength = 0;
};

// Enumerate locally geodesic representatives to the w-lift of q whose own
// developments stay inside D(p, N); extremal members bound the envelope.
ExtremalPairResult classRepresentatives(const Surface& s, const SurfacePoint& p,
                                        const SurfacePoint& q, const HomotopyWord& w, double N);

struct BifurcationEntry {
  std::string word;
  int power = 0;
  int count = 0;
  double minLength = 0, maxLength = 0;
  bool bifurcates = false;        // >= 2 members of equal length
  int divergenceClass = -1;       // vertex class where the first two members split
  double divergenceAngle = 0;
  double turnLeft = 0, turnRight = 0;
  bool suffixShared = false;      // finite analogue of sub-ray sharing
  std::string status;             // "ok" or error text
};

std::vector<BifurcationEntry> bifurcationScan(const Surface& s, const SurfacePoint& p,
                                              const std::vector<HomotopyWord>& family, int kMax,
                                              double N);

// Pointwise envelope containment (signed distance to the polygon boundary).
bool insidePolygon(const std::vector<Vec2>& poly, const Vec2& p, double eps);

// All closed geodesics within epsTie of the given vertex-anchored minimizer's
// length, enumerated over the visibility graph with the closure angles
// checked at the anchor. Returns {minimizer} when it has no cone passages.
std::vector<Representative> closedTies(const Surface& s, const GeodesicPath& minimizer);

}  // namespace conesurf
