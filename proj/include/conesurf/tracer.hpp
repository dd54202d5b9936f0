#pragma once

#include "conesurf/geodesic.hpp"

namespace conesurf {

// Transport a point on a glued edge, with an outward direction, into the
// adjacent triangle. Throws on boundary edges.
std::pair<SurfacePoint, Direction> crossEdge(const Surface& s, const SurfacePoint& p, Direction v);

// Straight-line trace of total length min(L, until a vertex or boundary hit).
GeodesicPath traceRay(const Surface& s, const SurfacePoint& p, Direction v, double L);

LocalGeodesicReport checkLocalGeodesic(const Surface& s, const GeodesicPath& path);

// Minimum chart distance from the path's segments to cone-point copies of the
// traversed triangles and their link-adjacent triangles. Returns distance and
// witness class id (-1 and +inf when no candidate cone point exists).
std::pair<double, int> minClearance(const Surface& s, const GeodesicPath& path, bool smallOnly);

}  // namespace conesurf
