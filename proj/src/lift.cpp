#include "conesurf/lift.hpp"

#include <vector>

namespace conesurf {

LiftComplex::LiftComplex(const Surface& s, int rootTri) : s_(&s) {
  if (rootTri < 0 || rootTri >= (int)s.tris.size()) throw Error(ErrorKind::Input, "bad root triangle");
  LiftCell c;
  c.tri = rootTri;
  c.plane = RigidMotion::identity();
  cells_.push_back(c);
  for (int k = 0; k < 3; ++k) {
    LiftedVertex v;
    v.classId = s.tris[rootTri].vclass[k];
    const int id = (int)lvs_.size();
    lvs_.push_back(v);
    setCorner(id, 0, k);
    closeIfComplete(id);
  }
}

int LiftComplex::liveCell(int c) const {
  while (cells_[c].merged) c = cells_[c].mergedInto;
  return c;
}

int LiftComplex::liveVertex(int v) const {
  while (lvs_[v].merged) v = lvs_[v].mergedInto;
  return v;
}

int LiftComplex::lvOfCorner(int cellId, int k) const {
  return liveVertex(cells_[liveCell(cellId)].lv[k]);
}

int LiftComplex::neighbor(int cell, int edge) const {
  const int n = cells_[liveCell(cell)].nbr[edge];
  return n >= 0 ? liveCell(n) : n;
}

// Register a corner instance with a vertex lift. A clash at an occupied cycle
// position identifies two cells as the same lift and folds them.
void LiftComplex::setCorner(int lvId, int cellId, int k) {
  lvId = liveVertex(lvId);
  cellId = liveCell(cellId);
  cells_[cellId].lv[k] = lvId;
  LiftedVertex& V = lvs_[lvId];
  const int idx = cycleIdx(cellId, k);
  auto it = V.byIdx.find(idx);
  if (it == V.byIdx.end()) {
    V.byIdx[idx] = {cellId, k};
    return;
  }
  const int other = liveCell(it->second.cell);
  if (other == cellId) return;
  foldQueueA_.push_back(other);
  foldQueueB_.push_back(cellId);
  if (!folding_) {
    folding_ = true;
    while (!foldQueueA_.empty()) {
      const int a = foldQueueA_.back();
      const int b = foldQueueB_.back();
      foldQueueA_.pop_back();
      foldQueueB_.pop_back();
      foldCells(a, b);
    }
    folding_ = false;
  }
}

void LiftComplex::foldCells(int a, int b) {
  a = liveCell(a);
  b = liveCell(b);
  if (a == b) return;
  if (cells_[a].tri != cells_[b].tri)
    throw Error(ErrorKind::Internal, "fold of cells with different sources");
  cells_[b].merged = true;
  cells_[b].mergedInto = a;
  for (int e = 0; e < 3; ++e) {
    int na = cells_[a].nbr[e];
    int nb = cells_[b].nbr[e];
    if (na >= 0) na = liveCell(na);
    if (nb >= 0) nb = liveCell(nb);
    if (na >= 0 && nb >= 0 && na != nb) {
      foldQueueA_.push_back(na);
      foldQueueB_.push_back(nb);
    }
    if (na == -1) cells_[a].nbr[e] = nb;
    else if (na == -2 && nb >= 0)
      throw Error(ErrorKind::Internal, "fold conflicts with a boundary edge");
  }
  for (int k = 0; k < 3; ++k) {
    const int la = liveVertex(cells_[a].lv[k]);
    const int lb = liveVertex(cells_[b].lv[k]);
    if (la != lb) mergeVertex(la, lb);
  }
}

void LiftComplex::mergeVertex(int x, int y) {
  x = liveVertex(x);
  y = liveVertex(y);
  if (x == y) return;
  LiftedVertex& X = lvs_[x];
  LiftedVertex& Y = lvs_[y];
  if (X.classId != Y.classId)
    throw Error(ErrorKind::Internal, "merge of vertex lifts with different classes");
  Y.merged = true;
  Y.mergedInto = x;
  const auto entries = Y.byIdx;
  Y.byIdx.clear();
  for (const auto& [idx, corner] : entries) setCorner(x, corner.cell, corner.k);
  closeIfComplete(x);
}

// When the fan covers the whole corner cycle, sew up any missing adjacency
// links between cyclically consecutive corners and merge the far-end vertex
// lifts across each newly sewn edge.
void LiftComplex::closeIfComplete(int lvId) {
  lvId = liveVertex(lvId);
  LiftedVertex& V = lvs_[lvId];
  if (V.closed) return;
  const VertexClass& vc = s_->classes[V.classId];
  if (vc.boundary) return;
  const int m = (int)vc.cycle.size();
  if ((int)V.byIdx.size() < m) return;
  V.closed = true;
  for (int i = 0; i < m; ++i) {
    const CellCorner ca0 = V.byIdx.at(i);
    const CellCorner cb0 = V.byIdx.at((i + 1) % m);
    const int ca = liveCell(ca0.cell);
    const int cb = liveCell(cb0.cell);
    const int ea = (ca0.k + 2) % 3; // in-edge of corner i
    const int eb = cb0.k;           // out-edge of corner i+1
    int na = cells_[ca].nbr[ea];
    int nb = cells_[cb].nbr[eb];
    if (na >= 0) na = liveCell(na);
    if (nb >= 0) nb = liveCell(nb);
    if (na == -2 || nb == -2) throw Error(ErrorKind::Internal, "interior fan sewn at a boundary");
    if (na >= 0 && na != cb) {
      foldQueueA_.push_back(na);
      foldQueueB_.push_back(cb);
      continue;
    }
    if (nb >= 0 && nb != ca) {
      foldQueueA_.push_back(nb);
      foldQueueB_.push_back(ca);
      continue;
    }
    if (na == -1 && nb == -1) {
      const Link& sl = s_->tris[cells_[ca].tri].link[ea];
      if (sl.tri != cells_[cb].tri || sl.edge != eb)
        throw Error(ErrorKind::Internal, "fan sewing edges are not reciprocal");
      cells_[ca].nbr[ea] = cb;
      cells_[cb].nbr[eb] = ca;
      // far ends of the sewn edge belong to one vertex lift
      const int fa = lvOfCorner(ca, ea);
      const int fb = lvOfCorner(cb, (eb + 1) % 3);
      if (fa != fb) mergeVertex(fa, fb);
    }
  }
  if (!folding_ && !foldQueueA_.empty()) {
    folding_ = true;
    while (!foldQueueA_.empty()) {
      const int a = foldQueueA_.back();
      const int b = foldQueueB_.back();
      foldQueueA_.pop_back();
      foldQueueB_.pop_back();
      foldCells(a, b);
    }
    folding_ = false;
  }
}

int LiftComplex::createRaw(int cellId, int edge) {
  cellId = liveCell(cellId);
  if (cells_.size() >= s_->tol.maxCells)
    throw Error(ErrorKind::Resource, "cell cap exceeded (" + std::to_string(s_->tol.maxCells) + ")");
  const Link& sl = s_->tris[cells_[cellId].tri].link[edge];
  if (sl.tri < 0) {
    cells_[cellId].nbr[edge] = -2;
    return -2;
  }
  LiftCell c;
  c.tri = sl.tri;
  c.parent = cellId;
  c.parentEdge = edge;
  c.letterFromParent = sl.letter;
  c.plane = cells_[cellId].plane * sl.motion;
  const int id = (int)cells_.size();
  cells_.push_back(c);
  cells_[cellId].nbr[edge] = id;
  cells_[id].nbr[sl.edge] = cellId;
  // shared-edge corners join the parent's vertex lifts
  setCorner(lvOfCorner(cellId, edge), id, (sl.edge + 1) % 3);
  setCorner(lvOfCorner(cellId, (edge + 1) % 3), id, sl.edge);
  // far corner gets (provisionally) a fresh vertex lift
  {
    const int far = (sl.edge + 2) % 3;
    LiftedVertex v;
    v.classId = s_->tris[sl.tri].vclass[far];
    const int vid = (int)lvs_.size();
    lvs_.push_back(v);
    setCorner(vid, id, far);
    closeIfComplete(vid);
  }
  closeIfComplete(lvOfCorner(cellId, edge));
  closeIfComplete(lvOfCorner(cellId, (edge + 1) % 3));
  return liveCell(id);
}

void LiftComplex::completeFan(int lvId) {
  for (std::size_t guard = 0; guard < s_->tol.maxIterations; ++guard) {
    lvId = liveVertex(lvId);
    const LiftedVertex& V = lvs_[lvId];
    if (V.closed) return;
    const VertexClass& vc = s_->classes[V.classId];
    const int m = (int)vc.cycle.size();
    // find an end with a missing neighbor and expand it
    bool expanded = false;
    const auto snapshot = V.byIdx;
    for (const auto& [idx, corner0] : snapshot) {
      const int cl = liveCell(corner0.cell);
      const int k = corner0.k;
      const bool hasPrev = V.byIdx.count((idx - 1 + m) % m) || (vc.boundary && idx == 0);
      const bool hasNext = V.byIdx.count((idx + 1) % m) || (vc.boundary && idx == m - 1);
      if (!hasPrev) {
        // CW end: expand the corner's out-edge
        if (s_->tris[cells_[cl].tri].link[k].tri >= 0 && cells_[cl].nbr[k] == -1) {
          createRaw(cl, k);
          expanded = true;
          break;
        }
        if (cells_[cl].nbr[k] >= 0) {
          // link exists but fan entry missing: register the neighbor's corner
          const int n = liveCell(cells_[cl].nbr[k]);
          const Link& sl = s_->tris[cells_[cl].tri].link[k];
          setCorner(lvId, n, (sl.edge + 1) % 3);
          closeIfComplete(lvId);
          expanded = true;
          break;
        }
      }
      if (!hasNext) {
        const int ein = (k + 2) % 3;
        if (s_->tris[cells_[cl].tri].link[ein].tri >= 0 && cells_[cl].nbr[ein] == -1) {
          createRaw(cl, ein);
          expanded = true;
          break;
        }
        if (cells_[cl].nbr[ein] >= 0) {
          const int n = liveCell(cells_[cl].nbr[ein]);
          const Link& sl = s_->tris[cells_[cl].tri].link[ein];
          setCorner(lvId, n, sl.edge);
          closeIfComplete(lvId);
          expanded = true;
          break;
        }
      }
    }
    if (!expanded) return; // boundary chain complete (or nothing to do)
  }
  throw Error(ErrorKind::Resource, "fan completion did not terminate");
}

std::vector<CellCorner> LiftComplex::fanCorners(int lv) const {
  lv = liveVertex(lv);
  const LiftedVertex& V = lvs_[lv];
  const VertexClass& vc = s_->classes[V.classId];
  const int m = (int)vc.cycle.size();
  // start at the CW-most present index
  int start = -1;
  if ((int)V.byIdx.size() == m) {
    start = 0;
  } else {
    for (const auto& [idx, c] : V.byIdx) {
      if (!V.byIdx.count((idx - 1 + m) % m)) {
        start = idx;
        break;
      }
    }
    if (start < 0) start = V.byIdx.begin()->first;
  }
  std::vector<CellCorner> out;
  for (int q = 0; q < m; ++q) {
    const int idx = (start + q) % m;
    auto it = V.byIdx.find(idx);
    if (it == V.byIdx.end()) break;
    out.push_back({liveCell(it->second.cell), it->second.k});
  }
  return out;
}

int LiftComplex::ensureNeighbor(int cell, int edge) {
  cell = liveCell(cell);
  int n = cells_[cell].nbr[edge];
  if (n != -1) return n >= 0 ? liveCell(n) : n;
  // complete both endpoint fans first: a fan closure materializes an already
  // existing abstract neighbor instead of minting a duplicate
  completeFan(lvOfCorner(cell, edge));
  cell = liveCell(cell);
  n = cells_[cell].nbr[edge];
  if (n != -1) return n >= 0 ? liveCell(n) : n;
  completeFan(lvOfCorner(cell, (edge + 1) % 3));
  cell = liveCell(cell);
  n = cells_[cell].nbr[edge];
  if (n != -1) return n >= 0 ? liveCell(n) : n;
  return createRaw(cell, edge);
}

HomotopyWord LiftComplex::cellWord(int cell) const {
  HomotopyWord w;
  std::vector<int> rev;
  for (int c = liveCell(cell); cells_[c].parent >= 0; c = cells_[c].parent)
    if (cells_[c].letterFromParent != 0) rev.push_back(cells_[c].letterFromParent);
  w.letters.assign(rev.rbegin(), rev.rend());
  w.reduce();
  return w;
}

int LiftComplex::navigateWord(int fromCell, const std::vector<int>& letters) {
  int cur = liveCell(fromCell);
  for (int l : letters) {
    const int gi = std::abs(l) - 1;
    if (gi < 0 || gi >= (int)s_->gluings.size()) throw Error(ErrorKind::Input, "bad letter in word");
    const Gluing& g = s_->gluings[gi];
    const EdgeRef side = l > 0 ? g.a : g.b;
    if (s_->tris[cells_[cur].tri].poly != side.poly)
      throw Error(ErrorKind::Input, "word is not composable from the current polygon");
    auto [ti, te] = s_->triEdgeOfPolygonEdge(side);
    for (int e : s_->diagonalPath(cells_[cur].tri, ti)) {
      cur = ensureNeighbor(cur, e);
      if (cur < 0) throw Error(ErrorKind::Internal, "diagonal crossing hit boundary");
    }
    cur = ensureNeighbor(cur, te);
    if (cur < 0) throw Error(ErrorKind::Internal, "gluing crossing hit boundary");
  }
  return cur;
}

}  // namespace conesurf
