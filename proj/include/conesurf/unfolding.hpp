#pragma once

#include <memory>

#include "conesurf/lift.hpp"

namespace conesurf {

// Finite-radius development of the universal cover around a base point.
// Cells are placed along their BFS tree paths; the official cell list holds
// exactly the lifts whose placed triangle meets the open disk D(base, R).
class UnfoldingTree {
public:
  UnfoldingTree(const Surface& s, const SurfacePoint& base, double radius);

  const Surface& surface() const { return complex_->surface(); }
  LiftComplex& complex() { return *complex_; }
  const LiftComplex& complex() const { return *complex_; }
  const SurfacePoint& base() const { return base_; }
  double radius() const { return radius_; }
  const std::vector<int>& cells() const { return official_; }
  bool isOfficial(int cell) const;
  // shortlex-canonical crossing word of a cell (independent of build order)
  HomotopyWord word(int cell) const;

  std::string dumpJson() const;

private:
  void computeWords();

  std::shared_ptr<LiftComplex> complex_;
  SurfacePoint base_;
  double radius_ = 0;
  std::vector<int> official_;
  std::map<int, std::vector<int>> words_;
};

UnfoldingTree unfoldDisk(const Surface& s, const SurfacePoint& base, double R);

// Develop a surface path into the plane along its own strip, starting from the
// chart of its first segment (frame = that chart). Returns the polyline and the
// accumulated end motion.
struct Development {
  std::vector<Vec2> polyline;
  RigidMotion endMotion;
};
Development developPath(const Surface& s, const GeodesicPath& path);

// Same, but checked against an unfolding: walks the path through the explored
// cells and throws an escape error naming the first missing cell.
Development developPathInTree(const UnfoldingTree& tree, const GeodesicPath& path);

}  // namespace conesurf
