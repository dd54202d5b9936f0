#include "conesurf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include "conesurf/lift.hpp"

#include <cstdlib>
#include <iostream>

namespace conesurf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Epsilon-net graph over the lift complex, grown lazily as Dijkstra advances.
class NetGraph {
public:
  NetGraph(LiftComplex& cx, double eps) : cx_(&cx), eps_(eps) {}

  int nodeCount() const { return n_; }

  int pointNode(int cell, const Vec2& pos) {
    cell = cx_->liveCell(cell);
    const int id = newNode();
    special_.push_back({id, cell, pos});
    openCell(cell);
    cellNodes_[cell].push_back(id);
    return id;
  }

  // Dijkstra between two nodes; nodes expand their cells when popped.
  // Returns (distance, node path) or +inf.
  std::pair<double, std::vector<int>> shortest(int from, int to, double bound) {
    std::vector<double> dist(nodeCount(), kInf);
    std::vector<int> prev(nodeCount(), -1);
    if (std::getenv("CONESURF_ORACLE_DEBUG")) {
      std::cerr << "[oracle] start nodes=" << nodeCount() << " opened=" << openedList_.size();
      for (int oc : openedList_) std::cerr << " cell" << oc << ":" << cellNodes_[oc].size();
      std::cerr << std::endl;
    }
    using QE = std::pair<double, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
    dist[from] = 0;
    pq.push({0, from});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u] + 1e-15) continue;
      if (u == to) break;
      if (d > bound) break;
      expandNode(u);
      if ((int)dist.size() < nodeCount()) {
        dist.resize(nodeCount(), kInf);
        prev.resize(nodeCount(), -1);
      }
      for (int cell : nodeCells(u)) {
        const int liveC = cx_->liveCell(cell);
        const Vec2 pu = nodePos(u, liveC);
        // folds can leave node lists registered under stale cell ids
        for (int oc : openedList_) {
          if (cx_->liveCell(oc) != liveC) continue;
          for (int v : cellNodes_[oc]) {
            if (v == u) continue;
            const double nd = d + (pu - nodePos(v, liveC)).norm();
            if ((int)dist.size() <= v) {
              dist.resize(nodeCount(), kInf);
              prev.resize(nodeCount(), -1);
            }
            if (nd < dist[v] - 1e-15) {
              dist[v] = nd;
              prev[v] = u;
              pq.push({nd, v});
            }
          }
        }
      }
    }
    if (!(to < (int)dist.size()) || !std::isfinite(dist[to])) return {kInf, {}};
    std::vector<int> path;
    for (int v = to; v >= 0; v = prev[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    if (std::getenv("CONESURF_ORACLE_DEBUG")) {
      std::cerr << "[oracle] graph dist=" << dist[to] << " path:";
      for (int v : path) {
        std::cerr << " " << v << (lvOf_[v] >= 0 ? "[lv]" : (edgeKey_[v].empty() ? "[pt]" : "[es]"));
      }
      std::cerr << std::endl;
    }
    return {refine(path), path};
  }

  int lvNode(int lv) {
    lv = cx_->liveVertex(lv);
    auto it = lvNode_.find(lv);
    if (it != lvNode_.end()) return it->second;
    const int id = newNode();
    lvOf_.resize(nodeCount(), -1);
    lvOf_[id] = lv;
    lvNode_[lv] = id;
    // register in the cells of the current fan; more cells attach on expand
    for (const auto& c : cx_->fanCorners(lv)) {
      openCell(c.cell);
      addToCell(c.cell, id);
    }
    return id;
  }

private:
  struct Special {
    int id, cell;
    Vec2 pos;
  };

  int newNode() {
    const int id = n_++;
    lvOf_.resize(n_, -1);
    edgeKey_.resize(n_);
    return id;
  }

  void addToCell(int cell, int id) {
    auto& v = cellNodes_[cell];
    if (std::find(v.begin(), v.end(), id) == v.end()) v.push_back(id);
  }

  std::vector<int> nodeCells(int u) const {
    std::vector<int> out;
    if (lvOf_[u] >= 0) {
      for (const auto& c : cx_->fanCorners(lvOf_[u])) out.push_back(c.cell);
      return out;
    }
    for (const auto& sp : special_)
      if (sp.id == u) return {cx_->liveCell(sp.cell)};
    for (const auto& [cell, edge, i] : edgeKey_[u]) out.push_back(cx_->liveCell(cell));
    return out;
  }

  Vec2 nodePos(int u, int cell) const {
    const Surface& s = cx_->surface();
    if (lvOf_[u] >= 0) {
      for (const auto& c : cx_->fanCorners(lvOf_[u]))
        if (c.cell == cell) return s.tris[cx_->cell(cell).tri].v[c.k];
      throw Error(ErrorKind::Internal, "lv node not incident to cell");
    }
    for (const auto& sp : special_)
      if (sp.id == u && cx_->liveCell(sp.cell) == cx_->liveCell(cell)) return sp.pos;
    for (const auto& [c, edge, i] : edgeKey_[u]) {
      if (cx_->liveCell(c) != cx_->liveCell(cell)) continue;
      const Tri& t = s.tris[cx_->cell(cell).tri];
      const int m = edgeSamples(cell, edge);
      return t.v[edge] + (double(i) / m) * (t.v[(edge + 1) % 3] - t.v[edge]);
    }
    throw Error(ErrorKind::Internal, "node not incident to cell");
  }

  int edgeSamples(int cell, int edge) const {
    const Surface& s = cx_->surface();
    const Tri& t = s.tris[cx_->cell(cell).tri];
    const double len = (t.v[(edge + 1) % 3] - t.v[edge]).norm();
    return std::max(2, (int)std::ceil(len / eps_));
  }

  void expandNode(int u) {
    if (lvOf_[u] >= 0) {
      cx_->completeFan(lvOf_[u]);
      for (const auto& c : cx_->fanCorners(lvOf_[u])) {
        openCell(c.cell);
        addToCell(c.cell, u);
      }
      return;
    }
    for (const auto& [cell, edge, i] : edgeKey_[u]) {
      const int n = cx_->ensureNeighbor(cell, edge);
      if (n >= 0) openCell(n);
    }
    for (const auto& sp : special_)
      if (sp.id == u) openCell(sp.cell);
  }

  void openCell(int cell) {
    cell = cx_->liveCell(cell);
    if (opened_.count(cell)) return;
    opened_.insert(cell);
    openedList_.push_back(cell);
    auto& nodes = cellNodes_[cell];
    const Surface& s = cx_->surface();
    // corner nodes
    for (int k = 0; k < 3; ++k) {
      const int id = lvNode(cx_->cell(cell).lv[k]);
      addToCell(cell, id);
    }
    // edge samples keyed canonically per complex edge so both sides share
    for (int e = 0; e < 3; ++e) {
      const int nb = cx_->ensureNeighbor(cx_->liveCell(cell), e);
      const int lc = cx_->liveCell(cell);
      const int m = edgeSamples(lc, e);
      std::pair<int, int> key{lc, e};
      int nbEdge = -1;
      if (nb >= 0) {
        nbEdge = s.tris[cx_->cell(lc).tri].link[e].edge;
        if (std::make_pair(nb, nbEdge) < key) key = {nb, nbEdge};
      }
      auto it = edgeNodes_.find(key);
      if (it == edgeNodes_.end()) {
        std::vector<int> ids;
        for (int i = 1; i < m; ++i) {
          const int id = newNode();
          edgeKey_[id].push_back({lc, e, i});
          if (nb >= 0) edgeKey_[id].push_back({nb, nbEdge, m - i});
          ids.push_back(id);
        }
        edgeNodes_[key] = ids;
        for (int id : ids) addToCell(lc, id);
      } else {
        for (int id : it->second) {
          bool has = false;
          for (const auto& [c2, e2, i2] : edgeKey_[id])
            if (cx_->liveCell(c2) == lc && e2 == e) has = true;
          if (!has) {
            // find the index from the other side
            for (const auto& [c2, e2, i2] : edgeKey_[id])
              if (cx_->liveCell(c2) == nb && e2 == nbEdge) edgeKey_[id].push_back({lc, e, m - i2});
          }
          addToCell(lc, id);
        }
      }
    }
    (void)nodes;
  }

  // Taut-string refinement: slide interior edge nodes along their edges.
  double refine(const std::vector<int>& path) {
    const Surface& s = cx_->surface();
    if (path.size() < 2) return 0;
    // per step: host cell shared by consecutive nodes
    const int steps = (int)path.size() - 1;
    std::vector<int> hostCell(steps, -1);
    for (int i = 0; i < steps; ++i) {
      const auto cu = nodeCells(path[i]);
      const auto cv = nodeCells(path[i + 1]);
      for (int a : cu)
        for (int b : cv)
          if (cx_->liveCell(a) == cx_->liveCell(b)) hostCell[i] = cx_->liveCell(a);
      if (hostCell[i] < 0) throw Error(ErrorKind::Internal, "path step has no shared cell");
    }
    // mutable positions: per node, parameterized by its edge where possible
    struct P {
      bool slide = false;
      int cell = -1, edge = -1;
      double t = 0; // param on edge
    };
    std::vector<P> par(path.size());
    for (size_t i = 0; i < path.size(); ++i) {
      const int u = path[i];
      if (lvOf_[u] >= 0) continue;
      if (!edgeKey_[u].empty()) {
        auto [c, e, idx] = edgeKey_[u][0];
        par[i] = {true, c, e, double(idx) / edgeSamples(c, e)};
      }
    }
    auto posInCell = [&](size_t i, int cell) -> Vec2 {
      const int u = path[i];
      if (!par[i].slide) return nodePos(u, cell);
      // express the slid position in `cell`
      for (const auto& [c, e, idx] : edgeKey_[u]) {
        if (cx_->liveCell(c) != cx_->liveCell(cell)) continue;
        const Tri& t = s.tris[cx_->cell(cell).tri];
        // param stored on par[i].cell's orientation; convert
        double tt = par[i].t;
        if (cx_->liveCell(cell) != cx_->liveCell(par[i].cell) || e != par[i].edge)
          tt = 1.0 - par[i].t;
        return t.v[e] + tt * (t.v[(e + 1) % 3] - t.v[e]);
      }
      throw Error(ErrorKind::Internal, "slid node not on cell");
    };
    auto total = [&]() {
      double L = 0;
      for (int i = 0; i < steps; ++i)
        L += (posInCell(i, hostCell[i]) - posInCell(i + 1, hostCell[i])).norm();
      return L;
    };
    double cur = total();
    double bestTotal = cur;
    std::vector<P> bestPar = par;
    for (int pass = 0; pass < 400; ++pass) {
      for (size_t i = 1; i + 1 < path.size(); ++i) {
        if (!par[i].slide) continue;
        const int cA = hostCell[i - 1], cB = hostCell[i];
        const Vec2 u = posInCell(i - 1, cA);
        Vec2 w = posInCell(i + 1, cB);
        // transport w into cA's chart if needed
        if (cA != cB) {
          // shared surface edge of the node links cA and cB
          int eA = -1;
          for (const auto& [c, e, idx] : edgeKey_[path[i]])
            if (cx_->liveCell(c) == cA) eA = e;
          if (eA < 0) continue;
          if (cx_->neighbor(cA, eA) != cB) continue;
          w = s.tris[cx_->cell(cA).tri].link[eA].motion(w);
        }
        // slide along the edge in cA's chart
        int eA = -1;
        for (const auto& [c, e, idx] : edgeKey_[path[i]])
          if (cx_->liveCell(c) == cA) eA = e;
        if (eA < 0) continue;
        const Tri& t = s.tris[cx_->cell(cA).tri];
        const Vec2 a = t.v[eA], b = t.v[(eA + 1) % 3];
        // reflect u across line (a,b); the taut position is where [refl, w]
        // meets the edge
        const Vec2 ab = (b - a).normalized();
        const Vec2 proj = a + ab * (u - a).dot(ab);
        const Vec2 refl = 2 * proj - u;
        const Vec2 d = w - refl;
        const double denom = cross2(d, b - a);
        if (std::abs(denom) < 1e-18) continue;
        double tt = std::clamp(cross2(d, refl - a) / denom, 0.0, 1.0);
        double tself = tt;
        if (cx_->liveCell(par[i].cell) != cA || eA != par[i].edge) tself = 1.0 - tt;
        par[i].t = tself;
      }
      const double nl = total();
      if (nl < bestTotal) {
        bestTotal = nl;
        bestPar = par;
      }
      if (cur - nl < 1e-13 * std::max(1.0, cur)) break;
      cur = nl;
    }
    return bestTotal;
  }

  LiftComplex* cx_;
  double eps_;
  int n_ = 0;
  std::vector<int> lvOf_;
  std::vector<std::vector<std::tuple<int, int, int>>> edgeKey_; // (cell, edge, sampleIdx)
  std::map<int, int> lvNode_;
  std::map<int, std::vector<int>> cellNodes_;
  std::map<std::pair<int, int>, std::vector<int>> edgeNodes_;
  std::set<int> opened_;
  std::vector<int> openedList_;
  std::vector<Special> special_;
};

int navigateToPoint(LiftComplex& cx, const SurfacePoint& q, const HomotopyWord& w) {
  const Surface& s = cx.surface();
  int cell = cx.navigateWord(cx.root(), w.letters);
  if (s.tris[cx.cell(cell).tri].poly != s.tris[q.tri].poly)
    throw Error(ErrorKind::Input, "target point is not in the word's final polygon");
  for (int e : s.diagonalPath(cx.cell(cell).tri, q.tri)) cell = cx.ensureNeighbor(cell, e);
  return cell;
}

}  // namespace

double oracleShortestLength(const Surface& s, const SurfacePoint& p, const SurfacePoint& q,
                            const HomotopyWord& w, double rCap) {
  LiftComplex cx(s, p.tri);
  const int target = navigateToPoint(cx, q, w);
  NetGraph net(cx, s.diameterEstimate / 500.0);
  const int a = net.pointNode(cx.root(), p.pos);
  const int b = net.pointNode(target, q.pos);
  auto [d, path] = net.shortest(a, b, rCap);
  if (!std::isfinite(d)) throw Error(ErrorKind::Unreachable, "net oracle: target unreachable");
  return d;
}

double oracleClosedLength(const Surface& s, const HomotopyWord& w) {
  HomotopyWord cw = w;
  cw.cyclic = true;
  cw.reduce();
  if (cw.letters.empty()) throw Error(ErrorKind::Input, "trivial word");
  double best = kInf;
  // try every cyclic rotation as the corridor base (flat candidates + anchors)
  const int n = (int)cw.letters.size();
  std::vector<int> rootTris;
  for (int r = 0; r < n; ++r) {
    std::vector<int> rot;
    for (int i = 0; i < n; ++i) rot.push_back(cw.letters[(r + i) % n]);
    const Gluing& g0 = s.gluings[std::abs(rot[0]) - 1];
    const EdgeRef side0 = rot[0] > 0 ? g0.a : g0.b;
    auto [t0, e0] = s.triEdgeOfPolygonEdge(side0);
    (void)e0;
    LiftComplex cx(s, t0);
    int end;
    try {
      end = cx.navigateWord(cx.root(), rot);
    } catch (const Error&) {
      continue;
    }
    // word must return to the start triangle's polygon for a closed corridor
    if (s.tris[cx.cell(end).tri].poly != s.tris[t0].poly) continue;
    for (int e : s.diagonalPath(cx.cell(end).tri, t0)) end = cx.ensureNeighbor(end, e);
    const RigidMotion M = cx.cell(end).plane;
    const double rotErr = std::abs(normalizeAngle(M.angle() + EIGEN_PI) - EIGEN_PI);
    if (rotErr < 1e-9) {
      // flat candidate: straight segment x -> M(x) inside the corridor strip
      // (sampled feasibility over corridor cells and their one-ring)
      std::vector<std::pair<int, RigidMotion>> region;
      for (int c = end; c >= 0; c = cx.cell(c).parent) region.push_back({c, cx.cell(c).plane});
      std::vector<std::pair<int, RigidMotion>> ring = region;
      for (auto& [c, pl] : region) {
        for (int e = 0; e < 3; ++e) {
          const int nb = cx.ensureNeighbor(c, e);
          if (nb < 0) continue;
          ring.push_back({nb, pl * s.tris[cx.cell(c).tri].link[e].motion});
        }
      }
      auto insideRegion = [&](const Vec2& pt) {
        for (auto& [c, pl] : ring) {
          const Tri& t = s.tris[cx.cell(c).tri];
          const Vec2 a = pl(t.v[0]), b = pl(t.v[1]), cc = pl(t.v[2]);
          if (cross2(b - a, pt - a) >= -1e-9 && cross2(cc - b, pt - b) >= -1e-9 &&
              cross2(a - cc, pt - cc) >= -1e-9)
            return true;
        }
        return false;
      };
      const Tri& rt = s.tris[t0];
      const Vec2 ea = rt.v[0], eb = rt.v[1], ec = rt.v[2];
      for (int si = 1; si < 24; ++si) {
        for (int sj = 1; sj + si < 24; ++sj) {
          const Vec2 x = ea + (si / 24.0) * (eb - ea) + (sj / 24.0) * (ec - ea);
          const Vec2 y = M(x);
          const double len = (y - x).norm();
          if (len >= best) continue;
          bool ok = true;
          const int m = std::max(2, (int)std::ceil(len / (s.diameterEstimate / 500.0)));
          for (int qq = 0; qq <= m && ok; ++qq)
            ok = insideRegion(x + (double(qq) / m) * (y - x));
          if (ok) best = std::min(best, len);
        }
      }
    }
    if (r == 0) {
      // vertex-anchored candidates on the base rotation
      NetGraph net(cx, s.diameterEstimate / 500.0);
      std::vector<std::pair<int, int>> anchors; // (cell, corner)
      for (int c = end; c >= 0; c = cx.cell(c).parent) {
        for (int k = 0; k < 3; ++k) {
          const int vcId = s.tris[cx.cell(c).tri].vclass[k];
          if (s.classes[vcId].kind == ConeKind::Small) continue;
          anchors.push_back({c, k});
        }
      }
      // dedup by lifted vertex, cap the anchor count
      std::set<int> lvSeen;
      int used = 0;
      for (auto [c, k] : anchors) {
        if (used >= 10) break;
        const int lv = cx.liveVertex(cx.cell(c).lv[k]);
        if (!lvSeen.insert(lv).second) continue;
        ++used;
        // deck image: replay the parent path of cell c from `end`
        std::vector<int> edges;
        for (int cc = c; cx.cell(cc).parent >= 0; cc = cx.cell(cc).parent)
          edges.push_back(cx.cell(cc).parentEdge);
        std::reverse(edges.begin(), edges.end());
        int img = end;
        for (int e : edges) img = cx.ensureNeighbor(img, e);
        const int lvImg = cx.liveVertex(cx.cell(img).lv[k]);
        if (lvImg == lv) continue;
        const int na = net.lvNode(lv);
        const int nb = net.lvNode(lvImg);
        auto [d, pathNodes] = net.shortest(na, nb, std::min(best, 64.0 * s.diameterEstimate));
        if (std::isfinite(d)) best = std::min(best, d);
      }
    }
  }
  if (!std::isfinite(best)) throw Error(ErrorKind::Unreachable, "net oracle: no closed candidate");
  return best;
}

}  // namespace conesurf
