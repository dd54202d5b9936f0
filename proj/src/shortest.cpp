#include "conesurf/shortest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <set>

namespace conesurf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nudge a point off edges/vertices so angular sweeps stay non-degenerate.
Vec2 interiorize(const Surface& s, int tri, Vec2 pos) {
  const Tri& t = s.tris[tri];
  for (int k = 0; k < 3; ++k)
    if ((t.v[k] - pos).norm() <= s.tol.epsInc)
      throw Error(ErrorKind::Input, "point lies on a cone point");
  const Vec2 centroid = (t.v[0] + t.v[1] + t.v[2]) / 3.0;
  for (int e = 0; e < 3; ++e) {
    const Vec2 ev = t.v[(e + 1) % 3] - t.v[e];
    const double d = std::abs(cross2(ev.normalized(), pos - t.v[e]));
    // clear of the visibility graze margin so on-edge queries stay reachable
    if (d <= 2e-8) return pos + 1e-8 * (centroid - pos).normalized();
  }
  return pos;
}

struct PassageInfo {
  double left = 0, right = 0, turn = 0;
  std::vector<std::pair<int, int>> chain; // (cell, edge) crossings, path order
};

// Pivot data between an incoming and outgoing arc at a vertex node. The
// development side is the smaller side; ties avoid the sibling departure rays.
PassageInfo makePassage(LiftComplex& cx, int lv, const VisArc& in, const VisArc& out,
                        const std::vector<double>& siblingCanon) {
  const Surface& s = cx.surface();
  const std::vector<CellCorner> fan = cx.fanCorners(lv);
  const double theta = s.classes[cx.vertex(lv).classId].angle;
  PassageInfo p;
  double left = std::fmod(in.arrCanon - out.depCanon, theta);
  if (left < 0) left += theta;
  p.left = left;
  p.right = theta - left;
  bool useLeft;
  if (std::abs(p.left - p.right) > 1e-9) {
    useLeft = p.left < p.right;
  } else {
    // tie: develop away from the sibling branches
    bool sibLeft = false, sibRight = false;
    for (double c : siblingCanon) {
      if (std::abs(c - out.depCanon) < 1e-12) continue;
      double d = std::fmod(in.arrCanon - c, theta);
      if (d < 0) d += theta;
      (d < left ? sibLeft : sibRight) = true;
    }
    useLeft = sibLeft ? false : true;
    if (!sibLeft && sibRight) useLeft = true;
  }
  p.turn = useLeft ? (EIGEN_PI - p.left) : (p.right - EIGEN_PI);
  // fan indices (corner cells resolved through folds)
  int i = -1, j = -1;
  const int m = (int)fan.size();
  const int inCell = cx.liveCell(in.arrCorner.cell);
  const int outCell = cx.liveCell(out.depCorner.cell);
  for (int t = 0; t < m; ++t) {
    if (fan[t].cell == inCell && fan[t].k == in.arrCorner.k) i = t;
    if (fan[t].cell == outCell && fan[t].k == out.depCorner.k) j = t;
  }
  if (i < 0 || j < 0) throw Error(ErrorKind::Internal, "passage corners not in fan");
  if (useLeft) {
    int steps = ((i - j) % m + m) % m;
    int cur = i;
    for (int k = 0; k < steps; ++k) {
      const CellCorner c = fan[cur];
      p.chain.push_back({c.cell, c.k});
      cur = (cur - 1 + m) % m;
    }
  } else {
    int steps = ((j - i) % m + m) % m;
    int cur = i;
    for (int k = 0; k < steps; ++k) {
      const CellCorner c = fan[cur];
      p.chain.push_back({c.cell, (c.k + 2) % 3});
      cur = (cur + 1) % m;
    }
  }
  return p;
}

bool passageValid(const Surface& s, double theta, const VisArc& in, const VisArc& out) {
  double left = std::fmod(in.arrCanon - out.depCanon, theta);
  if (left < 0) left += theta;
  return left >= EIGEN_PI - s.tol.epsAng && theta - left >= EIGEN_PI - s.tol.epsAng;
}

struct PathBuild {
  std::vector<const VisArc*> arcs;
  double length = 0;
};

Representative assemble(const Surface& s, VisibilityGraph& g, const std::vector<const VisArc*>& arcs,
                        const SurfacePoint& start,
                        const std::vector<std::vector<double>>& siblingCanonPerNode) {
  LiftComplex& cx = g.complex();
  Representative rep;
  rep.path.start = start;
  Vec2 devP = start.pos;
  Vec2 devD{1, 0};
  rep.devel.push_back(devP);
  for (size_t ai = 0; ai < arcs.size(); ++ai) {
    const VisArc& a = *arcs[ai];
    if (ai == 0) {
      // point sources develop in the root chart; vertex sources develop the
      // cone flat with directions at their canonical class coordinates
      devD = g.node(a.from).isVertex ? dirOfAngle(a.depCanon) : a.depDir;
    } else {
      const VisNode& n = g.node(g.resolveNode(a.from));
      static const std::vector<double> kNoSiblings;
      const std::vector<double>& sib =
          ai - 1 < siblingCanonPerNode.size() ? siblingCanonPerNode[ai - 1] : kNoSiblings;
      PassageInfo pi = makePassage(cx, n.lv, *arcs[ai - 1], a, sib);
      PathEvent pe;
      pe.kind = PathEvent::Pass;
      pe.pass.coneClass = cx.vertex(n.lv).classId;
      pe.pass.leftAngle = pi.left;
      pe.pass.rightAngle = pi.right;
      pe.pass.turn = pi.turn;
      for (auto [cell, edge] : pi.chain) {
        pe.pass.chain.push_back({cx.cell(cell).tri, edge});
        const int letter = s.tris[cx.cell(cell).tri].link[edge].letter;
        if (letter != 0) rep.path.word.letters.push_back(letter);
      }
      rep.path.events.push_back(pe);
      rep.turns.push_back(pi.turn);
      Representative::PassMark pm;
      pm.lv = cx.liveVertex(n.lv);
      pm.inSeg = (int)rep.trace.size() - 1;
      pm.outSeg = (int)rep.trace.size();
      rep.passMarks.push_back(pm);
      devD = Eigen::Rotation2Dd(pi.turn) * devD;
    }
    std::vector<std::pair<int, int>> crossings;
    auto segs = g.arcTrace(a, &crossings);
    size_t ci = 0;
    for (size_t si = 0; si < segs.size(); ++si) {
      PathEvent pe;
      pe.kind = PathEvent::Seg;
      pe.tri = cx.cell(segs[si].cell).tri;
      pe.p0 = segs[si].a;
      pe.p1 = segs[si].b;
      rep.path.events.push_back(pe);
      rep.trace.push_back(segs[si]);
      if (si + 1 < segs.size() && ci < crossings.size()) {
        auto [cell, edge] = crossings[ci++];
        PathEvent ce;
        ce.kind = PathEvent::Cross;
        ce.crossTri = cx.cell(cell).tri;
        ce.crossEdge = edge;
        ce.letter = s.tris[ce.crossTri].link[edge].letter;
        if (ce.letter != 0) rep.path.word.letters.push_back(ce.letter);
        rep.path.events.push_back(ce);
      }
    }
    devP += a.len * devD;
    rep.devel.push_back(devP);
    rep.length += a.len;
  }
  rep.path.word.reduce();
  rep.path.recomputeLength();
  rep.length = rep.path.length;
  return rep;
}

int locateTargetCell(LiftComplex& cx, const SurfacePoint& q, const HomotopyWord& w) {
  const Surface& s = cx.surface();
  int cell = cx.navigateWord(cx.root(), w.letters);
  if (s.tris[cx.cell(cell).tri].poly != s.tris[q.tri].poly)
    throw Error(ErrorKind::Input, "target point is not in the word's final polygon");
  for (int e : s.diagonalPath(cx.cell(cell).tri, q.tri)) {
    cell = cx.ensureNeighbor(cell, e);
    if (cell < 0) throw Error(ErrorKind::Internal, "diagonal navigation hit boundary");
  }
  return cell;
}

}  // namespace

bool insidePolygon(const std::vector<Vec2>& poly, const Vec2& p, double eps) {
  // boundary within eps counts as inside
  double bd = kInf;
  const int n = (int)poly.size();
  for (int i = 0; i < n; ++i) {
    const Vec2 a = poly[i], b = poly[(i + 1) % n];
    const Vec2 ab = b - a;
    const double L2 = ab.squaredNorm();
    const double t = L2 > 0 ? std::clamp((p - a).dot(ab) / L2, 0.0, 1.0) : 0.0;
    bd = std::min(bd, (a + t * ab - p).norm());
  }
  if (bd <= eps) return true;
  // crossing parity
  bool in = false;
  for (int i = 0; i < n; ++i) {
    const Vec2 a = poly[i], b = poly[(i + 1) % n];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (x > p.x()) in = !in;
    }
  }
  return in;
}

std::vector<Representative> shortestSegment(const Surface& s, const SurfacePoint& p,
                                            const SurfacePoint& q, const HomotopyWord& w,
                                            double rCap) {
  if (p.tri < 0 || q.tri < 0) throw Error(ErrorKind::Input, "shortest needs chart endpoints");
  LiftComplex cx(s, p.tri);
  const Vec2 ppos = interiorize(s, p.tri, p.pos);
  const int targetCell = locateTargetCell(cx, q, w);
  const Vec2 qpos = interiorize(s, cx.cell(targetCell).tri, q.pos);
  {
    const Vec2 qdev = cx.cell(targetCell).plane(qpos);
    if ((qdev - ppos).norm() > rCap)
      throw Error(ErrorKind::Unreachable, "target lift development exceeds the radius cap");
  }
  VisibilityGraph g(cx, rCap);
  const int srcNode = g.addPointNode(cx.root(), ppos);
  const int dstNode = g.addPointNode(targetCell, qpos);

  // edge-based Dijkstra with passage-angle filtering
  struct State {
    double dist;
    int node, idx;
  };
  auto cmp = [](const State& a, const State& b) { return a.dist > b.dist; };
  std::priority_queue<State, std::vector<State>, decltype(cmp)> pq(cmp);
  std::map<std::pair<int, int>, double> dist;

  for (size_t i = 0; i < g.arcsFrom(srcNode).size(); ++i) {
    const VisArc& a = g.arcsFrom(srcNode)[i];
    dist[{srcNode, (int)i}] = a.len;
    pq.push({a.len, srcNode, (int)i});
  }
  double best = kInf;
  while (!pq.empty()) {
    State st = pq.top();
    pq.pop();
    const VisArc& a = g.arcsFrom(st.node)[st.idx];
    if (st.dist > dist[{st.node, st.idx}] + 1e-15) continue;
    if (st.dist > std::min(best, rCap)) break;
    const int head = g.resolveNode(a.to);
    if (head == g.resolveNode(dstNode)) {
      best = std::min(best, st.dist);
      continue;
    }
    if (!g.node(head).isVertex) continue;
    const double theta = g.classAngle(head);
    const auto& outs = g.arcsFrom(head);
    for (size_t i = 0; i < outs.size(); ++i) {
      if (!passageValid(s, theta, a, outs[i])) continue;
      const double nd = st.dist + outs[i].len;
      auto key = std::make_pair(head, (int)i);
      auto it = dist.find(key);
      if (it == dist.end() || nd < it->second - 1e-15) {
        dist[key] = nd;
        pq.push({nd, a.to, (int)i});
      }
    }
  }
  if (!std::isfinite(best)) throw Error(ErrorKind::Unreachable, "target not reachable within the radius cap");

  const double tie = s.tol.epsTieRel * best;
  // enumerate all tie-optimal arc sequences by backward DFS over the relaxation DAG
  std::vector<std::vector<const VisArc*>> paths;
  std::vector<const VisArc*> cur;
  std::set<std::vector<const VisArc*>> seen;

  std::function<void(int, int, double)> back = [&](int node, int idx, double d) {
    const VisArc& a = g.arcsFrom(node)[idx];
    cur.push_back(&a);
    if (node == srcNode && std::abs(d - a.len) <= tie + 1e-12) {
      std::vector<const VisArc*> fwd(cur.rbegin(), cur.rend());
      if (seen.insert(fwd).second && paths.size() < s.tol.branchCap) paths.push_back(fwd);
    } else if (node != srcNode) {
      // predecessors: arcs arriving at `node` compatible with a
      const double theta = g.classAngle(node);
      for (auto& [key, dv] : dist) {
        const VisArc& pa = g.arcsFrom(key.first)[key.second];
        if (g.resolveNode(pa.to) != node) continue;
        if (!passageValid(s, theta, pa, a)) continue;
        if (dv + a.len <= d + 1e-12) back(key.first, key.second, dv);
      }
    }
    cur.pop_back();
  };
  for (auto& [key, dv] : dist) {
    const VisArc& a = g.arcsFrom(key.first)[key.second];
    if (g.resolveNode(a.to) != g.resolveNode(dstNode)) continue;
    if (dv <= best + tie) back(key.first, key.second, dv);
  }

  std::vector<Representative> out;
  for (auto& seq : paths) {
    Representative r = assemble(s, g, seq, SurfacePoint{p.tri, ppos, -1}, {});
    if (r.length <= best + tie) out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const Representative& a, const Representative& b) {
    return a.length < b.length;
  });
  return out;
}

ExtremalPairResult classRepresentatives(const Surface& s, const SurfacePoint& p,
                                        const SurfacePoint& q, const HomotopyWord& w, double N) {
  const bool vertexBase = p.coneClass >= 0;
  const Corner anchor = vertexBase ? s.classes[p.coneClass].cycle[0] : Corner{};
  const int rootTri = vertexBase ? anchor.tri : p.tri;
  LiftComplex cx(s, rootTri);
  Vec2 ppos{0, 0};
  int srcNode = -1, dstNode = -1;
  VisibilityGraph g(cx, N);
  if (vertexBase) {
    srcNode = g.vertexNode(cx.cell(cx.root()).lv[anchor.k]);
    int end = cx.navigateWord(cx.root(), w.letters);
    if (s.tris[cx.cell(end).tri].poly != s.tris[rootTri].poly)
      throw Error(ErrorKind::Input, "word does not return to the base polygon");
    for (int e : s.diagonalPath(cx.cell(end).tri, rootTri)) end = cx.ensureNeighbor(end, e);
    dstNode = g.vertexNode(cx.cell(end).lv[anchor.k]);
    if (srcNode == dstNode) throw Error(ErrorKind::Input, "word fixes the base cone point");
  } else {
    ppos = interiorize(s, p.tri, p.pos);
    const int targetCell = locateTargetCell(cx, q, w);
    const Vec2 qpos = interiorize(s, cx.cell(targetCell).tri, q.pos);
    srcNode = g.addPointNode(cx.root(), ppos);
    dstNode = g.addPointNode(targetCell, qpos);
  }

  ExtremalPairResult res;
  struct Frame {
    std::vector<const VisArc*> arcs;
    std::vector<std::vector<double>> siblings;
    Vec2 pos, dir;
    double len;
  };
  std::vector<std::pair<std::vector<const VisArc*>, std::vector<std::vector<double>>>> found;

  std::function<void(Frame&)> dfs = [&](Frame& f) {
    if (found.size() >= s.tol.branchCap) {
      res.capped = true;
      return;
    }
    const VisArc& last = *f.arcs.back();
    const int head = g.resolveNode(last.to);
    if (head == g.resolveNode(dstNode)) {
      found.push_back({f.arcs, f.siblings});
      return;
    }
    if (!g.node(head).isVertex) return;
    if (f.arcs.size() > 200) return;
    const double theta = g.classAngle(head);
    const auto& outs = g.arcsFrom(head);
    std::vector<int> valid;
    for (size_t i = 0; i < outs.size(); ++i)
      if (passageValid(s, theta, last, outs[i])) valid.push_back((int)i);
    std::vector<double> canon;
    for (int i : valid) canon.push_back(outs[i].depCanon);
    for (int i : valid) {
      const VisArc& nx = outs[i];
      // development turn by the side rule for pruning
      PassageInfo pi = makePassage(g.complex(), g.node(head).lv, last, nx, canon);
      const Vec2 nd = Eigen::Rotation2Dd(pi.turn) * f.dir;
      const Vec2 np = f.pos + nx.len * nd;
      if (np.norm() > N + s.tol.epsInc) continue;
      Frame nf = f;
      nf.arcs.push_back(&nx);
      nf.siblings.push_back(canon);
      nf.pos = np;
      nf.dir = nd;
      nf.len = f.len + nx.len;
      dfs(nf);
    }
  };

  for (size_t i = 0; i < g.arcsFrom(srcNode).size(); ++i) {
    const VisArc& a = g.arcsFrom(srcNode)[i];
    if (a.len > N) continue;
    Frame f;
    f.arcs = {&a};
    f.siblings = {};
    f.dir = vertexBase ? dirOfAngle(a.depCanon) : a.depDir;
    f.pos = a.len * f.dir; // development relative to p
    f.len = a.len;
    dfs(f);
  }

  for (auto& [seq, sib] : found) {
    Representative r = assemble(s, g, seq, vertexBase ? SurfacePoint{rootTri, s.tris[anchor.tri].v[anchor.k], -1}
                                                      : SurfacePoint{p.tri, ppos, -1},
                                sib);
    r.depCanon = seq.front()->depCanon;
    res.members.push_back(std::move(r));
  }
  if (res.members.empty())
    throw Error(ErrorKind::Unreachable, "no representative reaches the target within the disk");

  // order leftmost..rightmost: larger departure coordinate / turn = lefter
  std::sort(res.members.begin(), res.members.end(),
            [](const Representative& a, const Representative& b) {
              if (std::abs(a.depCanon - b.depCanon) > 1e-12) return a.depCanon > b.depCanon;
              const size_t n = std::min(a.turns.size(), b.turns.size());
              for (size_t i = 0; i < n; ++i) {
                if (std::abs(a.turns[i] - b.turns[i]) > 1e-12) return a.turns[i] > b.turns[i];
              }
              return a.turns.size() < b.turns.size();
            });

  res.minLength = kInf;
  res.maxLength = 0;
  for (auto& m : res.members) {
    res.xi.push_back(m.devel.back());
    res.minLength = std::min(res.minLength, m.length);
    res.maxLength = std::max(res.maxLength, m.length);
  }
  // envelope polygon: left member development, chord, reversed right member
  const auto& L = res.members.front().devel;
  const auto& R = res.members.back().devel;
  res.envelope = L;
  for (auto it = R.rbegin(); it != R.rend(); ++it) res.envelope.push_back(*it);
  return res;
}

std::vector<BifurcationEntry> bifurcationScan(const Surface& s, const SurfacePoint& p,
                                              const std::vector<HomotopyWord>& family, int kMax,
                                              double N) {
  std::vector<BifurcationEntry> out;
  for (const auto& w : family) {
    for (int k = 1; k <= kMax; ++k) {
      BifurcationEntry e;
      e.word = w.str(s);
      e.power = k;
      try {
        HomotopyWord wk = wordPower(w, k);
        wk.cyclic = false;
        ExtremalPairResult r = classRepresentatives(s, p, p, wk, N);
        e.count = (int)r.members.size();
        e.minLength = r.minLength;
        e.maxLength = r.maxLength;
        const double tie = s.tol.epsTieRel * std::max(1.0, r.minLength);
        int equal = 0;
        for (auto& m : r.members)
          if (m.length <= r.minLength + tie) ++equal;
        e.bifurcates = equal >= 2;
        if (r.members.size() >= 2) {
          const auto& A = r.members.front();
          const auto& B = r.members.back();
          const size_t n = std::min(A.turns.size(), B.turns.size());
          for (size_t i = 0; i < n; ++i) {
            if (std::abs(A.turns[i] - B.turns[i]) > 1e-12) {
              e.turnLeft = A.turns[i];
              e.turnRight = B.turns[i];
              // divergence vertex: the i+1-th passage of A
              int passIdx = 0;
              for (const auto& ev : A.path.events) {
                if (ev.kind != PathEvent::Pass) continue;
                if (passIdx == (int)i) {
                  e.divergenceClass = ev.pass.coneClass;
                  e.divergenceAngle = s.classes[ev.pass.coneClass].angle;
                  break;
                }
                ++passIdx;
              }
              break;
            }
          }
          // suffix sharing: identical final segment traces
          const auto& ta = A.trace;
          const auto& tb = B.trace;
          if (!ta.empty() && !tb.empty()) {
            const auto& la = ta.back();
            const auto& lb = tb.back();
            e.suffixShared = la.cell == lb.cell && (la.a - lb.a).norm() < 1e-9 &&
                             (la.b - lb.b).norm() < 1e-9;
          }
        }
        e.status = "ok";
      } catch (const Error& err) {
        e.status = err.what();
      }
      out.push_back(e);
    }
  }
  return out;
}

}  // namespace conesurf

namespace conesurf {

std::vector<Representative> closedTies(const Surface& s, const GeodesicPath& minimizer) {
  std::vector<Representative> out;
  bool hasPass = false;
  for (const auto& ev : minimizer.events)
    if (ev.kind == PathEvent::Pass) hasPass = true;
  if (!hasPass || minimizer.start.tri < 0) {
    Representative r;
    r.path = minimizer;
    r.length = minimizer.length;
    out.push_back(r);
    return out;
  }
  const double L = minimizer.length;
  const double tie = s.tol.epsTieRel * L;
  LiftComplex cx(s, minimizer.start.tri);
  // replay the loop's crossing sequence to find the deck image of the anchor
  int cur = cx.root();
  for (const auto& ev : minimizer.events) {
    if (ev.kind == PathEvent::Cross) {
      cur = cx.ensureNeighbor(cur, ev.crossEdge);
    } else if (ev.kind == PathEvent::Pass) {
      for (auto [tri, edge] : ev.pass.chain) {
        (void)tri;
        cur = cx.ensureNeighbor(cur, edge);
      }
    }
    if (cur < 0) throw Error(ErrorKind::Internal, "closed loop replay left the surface");
  }
  if (s.tris[cx.cell(cur).tri].poly != s.tris[minimizer.start.tri].poly ||
      cx.cell(cur).tri != minimizer.start.tri)
    throw Error(ErrorKind::Internal, "closed loop replay did not return to the start triangle");
  // anchor corner: the vertex at the loop start
  int k0 = -1;
  for (int k = 0; k < 3; ++k)
    if ((s.tris[minimizer.start.tri].v[k] - minimizer.start.pos).norm() <= 1e-9) k0 = k;
  if (k0 < 0) throw Error(ErrorKind::Internal, "closed minimizer does not start at a vertex");
  VisibilityGraph g(cx, 1.25 * L + s.diameterEstimate);
  const int srcNode = g.vertexNode(cx.cell(cx.root()).lv[k0]);
  const int dstNode = g.vertexNode(cx.cell(cur).lv[k0]);
  if (srcNode == dstNode) throw Error(ErrorKind::Internal, "trivial deck image in tie search");
  const double theta = g.classAngle(srcNode);

  struct Frame {
    std::vector<const VisArc*> arcs;
    std::vector<std::vector<double>> siblings;
    double len;
  };
  std::vector<std::pair<std::vector<const VisArc*>, std::vector<std::vector<double>>>> found;
  std::function<void(Frame&)> dfs = [&](Frame& f) {
    if (found.size() >= s.tol.branchCap) return;
    const VisArc& last = *f.arcs.back();
    if (g.resolveNode(last.to) == g.resolveNode(dstNode)) {
      // closure angles at the anchor vertex
      const VisArc& first = *f.arcs.front();
      double left = std::fmod(last.arrCanon - first.depCanon, theta);
      if (left < 0) left += theta;
      if (left >= EIGEN_PI - s.tol.epsAng && theta - left >= EIGEN_PI - s.tol.epsAng)
        found.push_back({f.arcs, f.siblings});
      return;
    }
    const int head = g.resolveNode(last.to);
    if (!g.node(head).isVertex) return;
    if (f.arcs.size() > 64) return;
    const double th = g.classAngle(head);
    const auto& outs = g.arcsFrom(head);
    std::vector<int> valid;
    for (size_t i = 0; i < outs.size(); ++i)
      if (passageValid(s, th, last, outs[i])) valid.push_back((int)i);
    std::vector<double> canon;
    for (int i : valid) canon.push_back(outs[i].depCanon);
    for (int i : valid) {
      const VisArc& nx = outs[i];
      if (f.len + nx.len > L + tie) continue;
      Frame nf = f;
      nf.arcs.push_back(&nx);
      nf.siblings.push_back(canon);
      nf.len = f.len + nx.len;
      dfs(nf);
    }
  };
  for (size_t i = 0; i < g.arcsFrom(srcNode).size(); ++i) {
    const VisArc& a = g.arcsFrom(srcNode)[i];
    if (a.len > L + tie) continue;
    Frame f;
    f.arcs = {&a};
    f.len = a.len;
    dfs(f);
  }
  for (auto& [seq, sib] : found) {
    Representative r = assemble(s, g, seq, minimizer.start, sib);
    if (r.length > L + tie) continue;
    // closing passage event
    const VisArc& last = *seq.back();
    const VisArc& first = *seq.front();
    double left = std::fmod(last.arrCanon - first.depCanon, theta);
    if (left < 0) left += theta;
    PathEvent pe;
    pe.kind = PathEvent::Pass;
    pe.pass.coneClass = cx.vertex(g.node(srcNode).lv).classId;
    pe.pass.leftAngle = left;
    pe.pass.rightAngle = theta - left;
    pe.pass.turn = left <= theta - left ? (EIGEN_PI - left) : ((theta - left) - EIGEN_PI);
    r.turns.push_back(pe.pass.turn);
    r.path.events.push_back(pe);
    r.path.closed = true;
    r.path.word.cyclic = true;
    r.path.word.reduce();
    r.path.end = r.path.start;
    out.push_back(std::move(r));
  }
  if (out.empty()) {
    Representative r;
    r.path = minimizer;
    r.length = minimizer.length;
    out.push_back(r);
    return out;
  }
  std::sort(out.begin(), out.end(), [](const Representative& a, const Representative& b) {
    const size_t n = std::min(a.turns.size(), b.turns.size());
    for (size_t i = 0; i < n; ++i)
      if (std::abs(a.turns[i] - b.turns[i]) > 1e-12) return a.turns[i] > b.turns[i];
    return a.turns.size() < b.turns.size();
  });
  // drop duplicates (identical turn signatures and lengths)
  std::vector<Representative> dedup;
  for (auto& r : out) {
    bool dup = false;
    for (const auto& d : dedup) {
      if (std::abs(d.length - r.length) > 1e-9 || d.turns.size() != r.turns.size()) continue;
      bool same = true;
      for (size_t i = 0; i < r.turns.size(); ++i)
        if (std::abs(d.turns[i] - r.turns[i]) > 1e-9) same = false;
      if (same && d.trace.size() == r.trace.size()) {
        bool sameTrace = true;
        for (size_t i = 0; i < r.trace.size(); ++i)
          if (d.trace[i].cell != r.trace[i].cell || (d.trace[i].a - r.trace[i].a).norm() > 1e-9)
            sameTrace = false;
        if (sameTrace) dup = true;
      }
    }
    if (!dup) dedup.push_back(std::move(r));
  }
  return dedup;
}

}  // namespace conesurf
