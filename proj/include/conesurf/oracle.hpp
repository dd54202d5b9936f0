#pragma once

#include "conesurf/geodesic.hpp"

namespace conesurf {

// Brute-force reference lengths on an epsilon-net graph of the unfolded
// region (net spacing = diam/500, within-cell straight links, taut-string
// refinement). Independent of the visibility-graph and shortening paths.
double oracleShortestLength(const Surface& s, const SurfacePoint& p, const SurfacePoint& q,
                            const HomotopyWord& w, double rCap);

double oracleClosedLength(const Surface& s, const HomotopyWord& w);

}  // namespace conesurf
