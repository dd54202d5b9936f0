#pragma once

#include "conesurf/surface.hpp"

namespace conesurf {

// square_torus, octagon_genus2, mixed_torus, example_sigma
Surface builtinSurface(const std::string& name, const Tolerances& tol = {});
std::vector<std::string> builtinNames();

}  // namespace conesurf
