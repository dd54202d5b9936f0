#pragma once

#include "conesurf/geodesic.hpp"

namespace conesurf {

struct ClosedGeodesicResult {
  std::vector<GeodesicPath> minimizers; // equal length within epsTie, leftmost first
  double length = 0;
  int iterations = 0;
  std::vector<double> lengthHistory; // non-increasing across shortening passes
};

// Length-minimizing closed geodesic(s) in the free homotopy class of w, by
// iterative strip shortening (funnel passes + cone pivots).
ClosedGeodesicResult closedGeodesic(const Surface& s, const HomotopyWord& w);

double geodesicLength(const GeodesicPath& p);

// Shortening that must not cross the barrier path transversally.
GeodesicPath constrainedShorten(const Surface& s, const HomotopyWord& w,
                                const GeodesicPath& barrier);

struct DensityRecord {
  int n = 0;
  std::string word;
  double length = 0;
  double supDistance = 0;
  std::string status; // "ok" or error text
};

// For each family member, the closed geodesic and the sup distance of its
// best-matching lift to the axis geodesic's lift over the window [-T, T].
std::vector<DensityRecord> densitySequence(const Surface& s, const HomotopyWord& axis,
                                           const std::vector<HomotopyWord>& family, double windowT);

// Transversal crossing test between two surface paths (chart segments compared
// in shared triangles, including transport into link-adjacent charts).
bool pathsCrossTransversally(const Surface& s, const GeodesicPath& a, const GeodesicPath& b);

}  // namespace conesurf
