#pragma once

#include "conesurf/unfolding.hpp"

namespace conesurf {

// Deterministic SVG: official cells as outlined triangles, cone-point copies
// marked (small vs large), developed polylines on top, disk boundary circle.
std::string renderSvg(const UnfoldingTree& tree, const std::vector<std::vector<Vec2>>& paths);

}  // namespace conesurf
