#include "conesurf/visibility.hpp"

#include <cmath>
#include <limits>
#include <set>

namespace conesurf {

namespace {

struct Exit {
  enum Kind { EdgeExit, VertexHit, NoExit } kind = NoExit;
  int edge = -1;
  double t = 0;
  Vec2 point{0, 0};
  int corner = -1;
};

Exit triExitCore(const Surface& s, const Tri& tri, const Vec2& p, const Vec2& d, double tMin) {
  const double epsV = s.tol.epsInc;
  Exit best;
  double bestT = std::numeric_limits<double>::infinity();
  for (int e = 0; e < 3; ++e) {
    const Vec2 a = tri.v[e], b = tri.v[(e + 1) % 3];
    const Vec2 ev = b - a;
    const double denom = cross2(d, ev);
    if (std::abs(denom) < 1e-15) continue;
    const Vec2 n(ev.y(), -ev.x());
    if (d.dot(n) <= 0) continue;
    const double t = cross2(a - p, ev) / denom;
    if (t < tMin) continue;
    const Vec2 q = p + t * d;
    const double sp = (q - a).dot(ev) / ev.squaredNorm();
    if (sp < -1e-9 || sp > 1 + 1e-9) continue;
    if (t < bestT) {
      bestT = t;
      best.kind = Exit::EdgeExit;
      best.edge = e;
      best.t = t;
      best.point = q;
    }
  }
  if (best.kind == Exit::NoExit) return best;
  if (best.t < 0) best.t = 0;
  for (int k = 0; k < 3; ++k) {
    const Vec2 c = tri.v[k];
    const double tp = std::clamp((c - p).dot(d), 0.0, best.t);
    if (tp <= 1e-12) continue;
    if ((p + tp * d - c).norm() <= epsV) {
      best.kind = Exit::VertexHit;
      best.corner = k;
      best.t = tp;
      best.point = p + tp * d;
      return best;
    }
  }
  return best;
}

Exit triExit(const Surface& s, const Tri& tri, const Vec2& p, const Vec2& d) {
  Exit e = triExitCore(s, tri, p, d, 1e-12);
  if (e.kind == Exit::NoExit) e = triExitCore(s, tri, p, d, -1e-9);
  return e;
}

}  // namespace

ComplexWalk walkStraight(LiftComplex& cx, int cell, const Vec2& pos, const Vec2& dir, double L,
                         bool lazyGrow) {
  const Surface& s = cx.surface();
  ComplexWalk w;
  int cur = cell;
  Vec2 p = pos;
  Vec2 d = dir.normalized();
  double remaining = L;
  for (std::size_t it = 0; it < s.tol.maxIterations; ++it) {
    const Tri& tri = s.tris[cx.cell(cur).tri];
    Exit ex = triExit(s, tri, p, d);
    if (ex.kind == Exit::NoExit) {
      w.outcome = ComplexWalk::Escaped;
      w.endCell = cur;
      w.endPos = p;
      w.endDir = d;
      return w;
    }
    if (ex.t >= remaining - 1e-12) {
      w.segs.push_back({cur, p, p + remaining * d});
      w.outcome = ComplexWalk::Completed;
      w.endCell = cur;
      w.endPos = p + remaining * d;
      w.endDir = d;
      return w;
    }
    w.segs.push_back({cur, p, ex.point});
    remaining -= ex.t;
    if (ex.kind == Exit::VertexHit) {
      w.outcome = ComplexWalk::VertexHit;
      w.hitCorner = {cur, ex.corner};
      w.endCell = cur;
      w.endPos = ex.point;
      w.endDir = d;
      return w;
    }
    const int n = lazyGrow ? cx.ensureNeighbor(cur, ex.edge) : cx.neighbor(cur, ex.edge);
    if (n < 0) {
      w.outcome = n == -2 ? ComplexWalk::Boundary : ComplexWalk::Escaped;
      w.crossings.push_back({cur, ex.edge});
      w.endCell = cur;
      w.endPos = ex.point;
      w.endDir = d;
      return w;
    }
    w.crossings.push_back({cur, ex.edge});
    const Link& l = s.tris[cx.cell(cur).tri].link[ex.edge];
    const RigidMotion inv = l.motion.inverse();
    p = inv(ex.point);
    d = inv.applyDir(d);
    cur = n;
  }
  throw Error(ErrorKind::Resource, "straight walk did not terminate");
}

VisibilityGraph::VisibilityGraph(LiftComplex& cx, double rCap) : cx_(&cx), rCap_(rCap) {}

int VisibilityGraph::addPointNode(int cell, const Vec2& pos) {
  VisNode n;
  n.isVertex = false;
  n.cell = cell;
  n.pos = pos;
  nodes_.push_back(n);
  arcs_.emplace_back();
  swept_.push_back(0);
  pointNodes_.push_back((int)nodes_.size() - 1);
  return (int)nodes_.size() - 1;
}

int VisibilityGraph::resolveNode(int id) {
  VisNode& n = nodes_[id];
  if (!n.isVertex) return id;
  const int live = cx_->liveVertex(n.lv);
  if (live == n.lv) return id;
  n.lv = live;
  auto it = vertexNode_.find(live);
  if (it == vertexNode_.end()) {
    vertexNode_[live] = id;
    return id;
  }
  return it->second;
}

int VisibilityGraph::vertexNode(int lv) {
  const int live = cx_->liveVertex(lv);
  auto it = vertexNode_.find(live);
  if (it != vertexNode_.end()) return it->second;
  VisNode n;
  n.isVertex = true;
  n.lv = live;
  nodes_.push_back(n);
  arcs_.emplace_back();
  swept_.push_back(0);
  vertexNode_[live] = (int)nodes_.size() - 1;
  return (int)nodes_.size() - 1;
}

double VisibilityGraph::classAngle(int nodeId) const {
  const VisNode& n = nodes_[nodeId];
  if (!n.isVertex) return -1;
  return cx_->surface().classes[cx_->vertex(n.lv).classId].angle;
}

const std::vector<VisArc>& VisibilityGraph::arcsFrom(int id) {
  if (!swept_[id]) {
    sweepFrom(id);
    swept_[id] = 1;
  }
  return arcs_[id];
}

namespace {

struct Wedge {
  int cell = -1;
  int entryEdge = -1;
  RigidMotion M; // cell chart -> frame (apex at origin)
  Vec2 lo{0, 0}, hi{0, 0};
};

bool within(const Vec2& lo, const Vec2& hi, const Vec2& d) {
  return cross2(lo, d) > 0 && cross2(d, hi) > 0;
}

bool clip(Vec2& lo, Vec2& hi, const Vec2& lo2, const Vec2& hi2) {
  if (cross2(lo, lo2) > 0) lo = lo2;
  if (cross2(hi2, hi) > 0) hi = hi2;
  return cross2(lo, hi) > 1e-14;
}

Vec2 rot(const Vec2& v, double a) { return Eigen::Rotation2Dd(a) * v; }

}  // namespace

void VisibilityGraph::sweepFrom(int id) {
  const Surface& s = cx_->surface();
  const VisNode& src = nodes_[id];
  const double epsInc = s.tol.epsInc;

  std::set<std::tuple<int, long long, long long>> dedup;
  auto record = [&](VisArc a) {
    a.from = id;
    if (a.len <= epsInc) return;
    const long long ql = (long long)std::llround(a.len * 1e9);
    const long long qa = (long long)std::llround(std::atan2(a.depDir.y(), a.depDir.x()) * 1e9);
    if (!dedup.insert({a.to, ql, qa}).second) return;
    arcs_[id].push_back(a);
  };

  // Arc endpoint bookkeeping at a far vertex.
  auto vertexArc = [&](const Wedge& w, int farCorner, const Vec2& wfar, const CellCorner& depC,
                       int depCell) {
    VisArc a;
    a.to = vertexNode(cx_->cell(w.cell).lv[farCorner]);
    a.len = wfar.norm();
    const Vec2 fdir = wfar / a.len;
    a.depCell = depCell;
    a.depDir = fdir; // frame == source chart orientation for all sweeps below
    a.depCorner = depC;
    if (src.isVertex) a.depCanon = cx_->canonicalAngle(depC, a.depDir);
    a.arrCell = w.cell;
    a.arrDir = w.M.rot.inverse() * fdir;
    a.arrCorner = {w.cell, farCorner};
    a.arrCanon = cx_->canonicalAngle(a.arrCorner, -a.arrDir);
    record(a);
  };
  auto pointArc = [&](const Wedge& w, int toNode, const Vec2& tp, const CellCorner& depC,
                      int depCell) {
    VisArc a;
    a.to = toNode;
    a.len = tp.norm();
    const Vec2 fdir = tp / a.len;
    a.depCell = depCell;
    a.depDir = fdir;
    a.depCorner = depC;
    if (src.isVertex) a.depCanon = cx_->canonicalAngle(depC, a.depDir);
    a.arrCell = w.cell;
    a.arrDir = w.M.rot.inverse() * fdir;
    record(a);
  };

  std::vector<Wedge> stack;
  std::size_t steps = 0;

  auto propagate = [&](const CellCorner& depC, int depCell) {
    while (!stack.empty()) {
      if (++steps > 500000) throw Error(ErrorKind::Resource, "visibility sweep exceeded step cap");
      Wedge w = stack.back();
      stack.pop_back();
      const LiftCell& lc = cx_->cell(w.cell);
      const Tri& tri = s.tris[lc.tri];
      const int e = w.entryEdge;
      const int f = (e + 2) % 3;
      const Vec2 we = w.M(tri.v[e]);
      const Vec2 we1 = w.M(tri.v[(e + 1) % 3]);
      const Vec2 wf = w.M(tri.v[f]);
      const double dist = wf.norm();
      // point targets inside this cell
      for (int pn : pointNodes_) {
        if (pn == id || cx_->liveCell(nodes_[pn].cell) != cx_->liveCell(w.cell)) continue;
        const Vec2 tp = w.M(nodes_[pn].pos);
        if (tp.norm() <= rCap_ && within(w.lo, w.hi, tp.normalized()))
          pointArc(w, pn, tp, depC, depCell);
      }
      const Vec2 fdir = wf.normalized();
      const bool fin = within(w.lo, w.hi, fdir);
      if (fin && dist <= rCap_) vertexArc(w, f, wf, depC, depCell);
      // sub-wedges past the far vertex
      const double shave = std::min(0.1, epsInc / std::max(dist, epsInc));
      struct Sub {
        Vec2 lo, hi;
        int exitEdge;
      };
      Sub subs[2] = {{we1.normalized(), fin ? rot(fdir, -shave) : fdir, (e + 1) % 3},
                     {fin ? rot(fdir, shave) : fdir, we.normalized(), (e + 2) % 3}};
      for (const auto& sub : subs) {
        Vec2 lo = w.lo, hi = w.hi;
        if (!clip(lo, hi, sub.lo, sub.hi)) continue;
        // prune by distance to the exit edge
        const Vec2 ea = w.M(tri.v[sub.exitEdge]);
        const Vec2 eb = w.M(tri.v[(sub.exitEdge + 1) % 3]);
        const Vec2 ab = eb - ea;
        const double tseg = std::clamp(-ea.dot(ab) / ab.squaredNorm(), 0.0, 1.0);
        if ((ea + tseg * ab).norm() > rCap_) continue;
        const int n = cx_->ensureNeighbor(w.cell, sub.exitEdge);
        if (n < 0) continue;
        const Link& l = s.tris[lc.tri].link[sub.exitEdge];
        Wedge nw;
        nw.cell = n;
        nw.entryEdge = l.edge;
        nw.M = w.M * l.motion;
        nw.lo = lo;
        nw.hi = hi;
        stack.push_back(nw);
      }
    }
  };

  if (!src.isVertex) {
    const int cell = src.cell;
    const Tri& tri = s.tris[cx_->cell(cell).tri];
    // direct arcs to the cell's corners
    for (int k = 0; k < 3; ++k) {
      const Vec2 d = tri.v[k] - src.pos;
      const double len = d.norm();
      if (len > rCap_ || len <= epsInc) continue;
      VisArc a;
      a.to = vertexNode(cx_->cell(cell).lv[k]);
      a.len = len;
      a.depCell = cell;
      a.depDir = d / len;
      a.arrCell = cell;
      a.arrDir = a.depDir;
      a.arrCorner = {cell, k};
      a.arrCanon = cx_->canonicalAngle(a.arrCorner, -a.arrDir);
      record(a);
    }
    // direct arcs to point nodes in the same cell
    for (int pn : pointNodes_) {
      if (pn == id || cx_->liveCell(nodes_[pn].cell) != cx_->liveCell(cell)) continue;
      const Vec2 d = nodes_[pn].pos - src.pos;
      if (d.norm() > rCap_ || d.norm() <= epsInc) continue;
      VisArc a;
      a.to = pn;
      a.len = d.norm();
      a.depCell = cell;
      a.depDir = d.normalized();
      a.arrCell = cell;
      a.arrDir = a.depDir;
      record(a);
    }
    // wedges through the three edges
    const RigidMotion M0{Eigen::Rotation2Dd(0.0), -src.pos};
    for (int e = 0; e < 3; ++e) {
      const Vec2 a = tri.v[e] - src.pos;
      const Vec2 b = tri.v[(e + 1) % 3] - src.pos;
      Vec2 lo = rot(a.normalized(), std::min(0.1, epsInc / std::max(a.norm(), epsInc)));
      Vec2 hi = rot(b.normalized(), -std::min(0.1, epsInc / std::max(b.norm(), epsInc)));
      if (cross2(lo, hi) <= 1e-14) continue;
      const int n = cx_->ensureNeighbor(cell, e);
      if (n < 0) continue;
      const Link& l = s.tris[cx_->cell(cell).tri].link[e];
      Wedge w;
      w.cell = n;
      w.entryEdge = l.edge;
      w.M = M0 * l.motion;
      w.lo = lo;
      w.hi = hi;
      stack.push_back(w);
      propagate(CellCorner{}, cell);
    }
  } else {
    cx_->completeFan(src.lv);
    const std::vector<CellCorner> corners = cx_->fanCorners(src.lv);
    const bool closedFan = cx_->vertex(src.lv).closed;
    const int m = (int)corners.size();
    for (int i = 0; i < m; ++i) {
      const CellCorner c = corners[i];
      const Tri& tri = s.tris[cx_->cell(c.cell).tri];
      const Vec2 apex = tri.v[c.k];
      // edge arc along the corner's out-edge
      {
        const Vec2 d = tri.v[(c.k + 1) % 3] - apex;
        if (d.norm() <= rCap_) {
          VisArc a;
          a.to = vertexNode(cx_->cell(c.cell).lv[(c.k + 1) % 3]);
          a.len = d.norm();
          a.depCell = c.cell;
          a.depDir = d.normalized();
          a.depCorner = c;
          a.depCanon = cx_->canonicalAngle(c, a.depDir);
          a.arrCell = c.cell;
          a.arrDir = a.depDir;
          a.arrCorner = {c.cell, (c.k + 1) % 3};
          a.arrCanon = cx_->canonicalAngle(a.arrCorner, -a.arrDir);
          record(a);
        }
      }
      if (!closedFan && i == m - 1) {
        // chain end: also the in-edge
        const Vec2 d = tri.v[(c.k + 2) % 3] - apex;
        if (d.norm() <= rCap_) {
          VisArc a;
          a.to = vertexNode(cx_->cell(c.cell).lv[(c.k + 2) % 3]);
          a.len = d.norm();
          a.depCell = c.cell;
          a.depDir = d.normalized();
          a.depCorner = c;
          a.depCanon = cx_->canonicalAngle(c, a.depDir);
          a.arrCell = c.cell;
          a.arrDir = a.depDir;
          a.arrCorner = {c.cell, (c.k + 2) % 3};
          a.arrCanon = cx_->canonicalAngle(a.arrCorner, -a.arrDir);
          record(a);
        }
      }
      // point targets inside the corner cell itself
      for (int pn : pointNodes_) {
        if (pn == id || cx_->liveCell(nodes_[pn].cell) != cx_->liveCell(c.cell)) continue;
        const Vec2 d = nodes_[pn].pos - apex;
        const double len = d.norm();
        if (len > rCap_ || len <= epsInc) continue;
        VisArc a;
        a.to = pn;
        a.len = len;
        a.depCell = c.cell;
        a.depDir = d / len;
        a.depCorner = c;
        a.depCanon = cx_->canonicalAngle(c, a.depDir);
        a.arrCell = c.cell;
        a.arrDir = a.depDir;
        record(a);
      }
      // interior wedge of this corner, exiting through the opposite edge
      const Vec2 a = tri.v[(c.k + 1) % 3] - apex;
      const Vec2 b = tri.v[(c.k + 2) % 3] - apex;
      Vec2 lo = rot(a.normalized(), std::min(0.1, epsInc / std::max(a.norm(), epsInc)));
      Vec2 hi = rot(b.normalized(), -std::min(0.1, epsInc / std::max(b.norm(), epsInc)));
      if (cross2(lo, hi) <= 1e-14) continue;
      const int exitEdge = (c.k + 1) % 3;
      const int n = cx_->ensureNeighbor(c.cell, exitEdge);
      if (n < 0) continue;
      const Link& l = s.tris[cx_->cell(c.cell).tri].link[exitEdge];
      const RigidMotion M0{Eigen::Rotation2Dd(0.0), -apex};
      Wedge w;
      w.cell = n;
      w.entryEdge = l.edge;
      w.M = M0 * l.motion;
      w.lo = lo;
      w.hi = hi;
      stack.push_back(w);
      propagate(c, c.cell);
    }
  }
}

std::vector<CellSeg> VisibilityGraph::arcTrace(const VisArc& a,
                                               std::vector<std::pair<int, int>>* crossings) const {
  // Re-walk the straight segment in its own development.
  Vec2 start;
  if (nodes_[a.from].isVertex) {
    const Tri& tri = cx_->surface().tris[cx_->cell(a.depCorner.cell).tri];
    start = tri.v[a.depCorner.k];
  } else {
    start = nodes_[a.from].pos;
  }
  ComplexWalk w = walkStraight(*cx_, a.depCell, start, a.depDir, a.len, true);
  if (crossings) *crossings = w.crossings;
  return w.segs;
}

}  // namespace conesurf
