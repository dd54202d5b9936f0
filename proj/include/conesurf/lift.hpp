#pragma once

#include <map>

#include "conesurf/geodesic.hpp"

namespace conesurf {

struct CellCorner {
  int cell = -1;
  int k = -1;
  bool operator==(const CellCorner& o) const { return cell == o.cell && k == o.k; }
};

struct LiftCell {
  int tri = -1;
  int parent = -1;
  int parentEdge = -1;      // edge of the parent crossed to create this cell
  int letterFromParent = 0;
  RigidMotion plane;        // chart -> plane along the creation path (root = identity)
  std::array<int, 3> nbr{-1, -1, -1}; // -1 unknown, -2 boundary, else cell id (may be stale)
  std::array<int, 3> lv{-1, -1, -1};  // lifted vertex ids per corner (may be stale)
  bool merged = false;
  int mergedInto = -1;
};

// Corner fan of one vertex lift, indexed by the position of each corner in the
// surface class's canonical corner cycle. Around a lift the cycle appears
// exactly once, so a position clash proves that two cells are the same lift
// and triggers a fold.
struct LiftedVertex {
  int classId = -1;
  std::map<int, CellCorner> byIdx;
  bool closed = false;
  bool merged = false;
  int mergedInto = -1;
};

// Lazily grown restriction of the universal cover: triangle lifts with
// combinatorial adjacency. Lifts reached along different routes are identified
// by folding when their corner fans collide; geometric placements follow each
// cell's creation path and are NOT globally consistent (the cover has cone
// points).
class LiftComplex {
public:
  LiftComplex(const Surface& s, int rootTri);

  const Surface& surface() const { return *s_; }
  int root() const { return liveCell(0); }
  const LiftCell& cell(int c) const { return cells_[liveCell(c)]; }
  int liveCell(int c) const;
  std::size_t cellCount() const { return cells_.size(); }
  int liveVertex(int v) const;
  const LiftedVertex& vertex(int v) const { return lvs_[liveVertex(v)]; }
  // CCW-ordered corner fan (live cell ids).
  std::vector<CellCorner> fanCorners(int lv) const;

  // Neighbor across an edge; creates the cell if needed. Returns -2 on
  // surface boundary. Throws Resource past tol.maxCells.
  int ensureNeighbor(int cell, int edge);
  int neighbor(int cell, int edge) const;

  // Materialize the full corner fan around a lifted vertex.
  void completeFan(int lvId);

  // Reduced gluing-letter word along the creation path from the root.
  HomotopyWord cellWord(int cell) const;

  // Follow a crossing word from `fromCell` (polygon-level corridor through
  // diagonal links). Throws Input if the word is not composable from there.
  int navigateWord(int fromCell, const std::vector<int>& letters);

  double canonicalAngle(const CellCorner& c, const Vec2& d) const {
    return s_->canonicalAngle(Corner{cells_[liveCell(c.cell)].tri, c.k}, d);
  }

private:
  int createRaw(int cellId, int edge);
  int lvOfCorner(int cellId, int k) const;
  void setCorner(int lvId, int cellId, int k); // registers; folds on clashes
  void mergeVertex(int x, int y);
  void foldCells(int a, int b);
  void closeIfComplete(int lvId);
  int cycleIdx(int cellId, int k) const {
    return s_->cycleIndexOf(Corner{cells_[cellId].tri, k});
  }

  const Surface* s_;
  std::vector<LiftCell> cells_;
  std::vector<LiftedVertex> lvs_;
  std::vector<int> foldQueueA_, foldQueueB_;
  bool folding_ = false;
};

}  // namespace conesurf
