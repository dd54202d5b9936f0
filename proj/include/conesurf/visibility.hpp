#pragma once

#include <deque>
#include <map>

#include "conesurf/lift.hpp"

namespace conesurf {

struct CellSeg {
  int cell = -1;
  Vec2 a{0, 0}, b{0, 0}; // chart coords of the cell's triangle
};

struct ComplexWalk {
  enum Outcome { Completed, VertexHit, Boundary, Escaped } outcome = Completed;
  std::vector<CellSeg> segs;
  std::vector<std::pair<int, int>> crossings; // (cell exited, edge), path order
  int endCell = -1;
  Vec2 endPos{0, 0};
  Vec2 endDir{0, 0};
  CellCorner hitCorner;
};

// Straight walk over the lift complex in the walk's own development.
ComplexWalk walkStraight(LiftComplex& cx, int cell, const Vec2& pos, const Vec2& dir, double L,
                         bool lazyGrow);

struct VisNode {
  bool isVertex = false;
  int lv = -1; // live lifted-vertex id
  int cell = -1;
  Vec2 pos{0, 0};
};

// A straight geodesic segment between two nodes, nowhere grazing a vertex.
struct VisArc {
  int from = -1, to = -1;
  double len = 0;
  // canonical class coordinates for passage-angle checks (vertex ends only)
  double depCanon = -1, arrCanon = -1;
  CellCorner depCorner, arrCorner;
  int depCell = -1;
  Vec2 depDir{0, 0}; // chart direction in depCell
  int arrCell = -1;
  Vec2 arrDir{0, 0}; // chart direction of travel INTO the destination, in arrCell
};

// Visibility arcs discovered by angular wedge propagation from each node.
// Nodes are abstract: lifted vertices (any cone kind) plus registered points.
class VisibilityGraph {
public:
  VisibilityGraph(LiftComplex& cx, double rCap);

  int addPointNode(int cell, const Vec2& pos);
  int vertexNode(int lv); // creates on demand
  // folds in the complex can alias vertex nodes; resolve before comparing
  int resolveNode(int id);
  const VisNode& node(int id) const { return nodes_[id]; }
  int nodeCount() const { return (int)nodes_.size(); }
  const std::vector<VisArc>& arcsFrom(int id);
  double classAngle(int nodeId) const;
  LiftComplex& complex() { return *cx_; }

  // Reconstruct the per-cell trace of an arc (for path assembly and
  // intersection checks).
  std::vector<CellSeg> arcTrace(const VisArc& a, std::vector<std::pair<int, int>>* crossings) const;

private:
  void sweepFrom(int id);

  LiftComplex* cx_;
  double rCap_;
  std::deque<VisNode> nodes_;
  std::deque<std::vector<VisArc>> arcs_;
  std::deque<char> swept_;
  std::map<int, int> vertexNode_;
  std::vector<int> pointNodes_;
};

}  // namespace conesurf
