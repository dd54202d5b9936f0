#include "conesurf/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>

#include <json.hpp>

namespace conesurf {

using nlohmann::ordered_json;

std::string kindName(ConeKind k) {
  switch (k) {
    case ConeKind::Small: return "small";
    case ConeKind::Regular: return "regular";
    case ConeKind::Large: return "large";
  }
  return "?";
}

namespace {

double shoelace(const std::vector<Vec2>& v) {
  double s = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % v.size()];
    s += cross2(a, b);
  }
  return 0.5 * s;
}

bool segmentsIntersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) { return cross2(q - p, r - p); };
  double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0))) return true;
  return false;
}

bool pointInTriangleStrict(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c, double eps) {
  double d1 = cross2(b - a, p - a);
  double d2 = cross2(c - b, p - b);
  double d3 = cross2(a - c, p - c);
  return d1 > eps && d2 > eps && d3 > eps;
}

// Ear clipping over polygon vertex indices; returns triangles as index triples.
std::vector<std::array<int, 3>> earClip(const Polygon& poly, const std::string& pid) {
  const auto& pts = poly.vertices;
  const int n = (int)pts.size();
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::array<int, 3>> out;
  double scale = 0;
  for (const auto& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double areaEps = 1e-12 * std::max(1.0, scale * scale);

  while (idx.size() > 3) {
    bool clipped = false;
    const int m = (int)idx.size();
    for (int i = 0; i < m; ++i) {
      int ia = idx[(i + m - 1) % m], ib = idx[i], ic = idx[(i + 1) % m];
      const Vec2 &a = pts[ia], &b = pts[ib], &c = pts[ic];
      if (cross2(b - a, c - b) <= areaEps) continue; // reflex or flat corner
      bool blocked = false;
      for (int j : idx) {
        if (j == ia || j == ib || j == ic) continue;
        if (pointInTriangleStrict(pts[j], a, b, c, -areaEps)) { blocked = true; break; }
      }
      if (blocked) continue;
      out.push_back({ia, ib, ic});
      idx.erase(idx.begin() + i);
      clipped = true;
      break;
    }
    if (!clipped)
      throw Error(ErrorKind::Geometry, "polygon '" + pid + "': ear clipping failed (degenerate input?)");
  }
  // Final triangle must be non-degenerate.
  const Vec2 &a = pts[idx[0]], &b = pts[idx[1]], &c = pts[idx[2]];
  if (cross2(b - a, c - b) <= areaEps)
    throw Error(ErrorKind::Geometry, "polygon '" + pid + "': degenerate final triangle");
  out.push_back({idx[0], idx[1], idx[2]});
  return out;
}

struct DSU {
  std::vector<int> p;
  explicit DSU(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

void Surface::finalize() {
  // --- polygon-level validation ---
  if (polygons.empty()) throw Error(ErrorKind::Schema, "no polygons");
  for (const auto& poly : polygons) {
    const auto& v = poly.vertices;
    if (v.size() < 3) throw Error(ErrorKind::Geometry, "polygon '" + poly.id + "': fewer than 3 vertices");
    for (const auto& p : v)
      if (!p.allFinite()) throw Error(ErrorKind::Geometry, "polygon '" + poly.id + "': non-finite coordinate");
    const int n = (int)v.size();
    for (int i = 0; i < n; ++i)
      if ((v[i] - v[(i + 1) % n]).norm() <= tol.epsInc)
        throw Error(ErrorKind::Geometry, "polygon '" + poly.id + "': repeated vertex");
    if (shoelace(v) <= 0)
      throw Error(ErrorKind::Geometry, "polygon '" + poly.id + "': not positively oriented");
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue; // adjacent
        if (segmentsIntersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
          throw Error(ErrorKind::Geometry, "polygon '" + poly.id + "': self-intersecting");
      }
    }
  }

  auto polyIndex = [&](const std::string& id) {
    for (size_t i = 0; i < polygons.size(); ++i)
      if (polygons[i].id == id) return (int)i;
    throw Error(ErrorKind::Schema, "unknown polygon id '" + id + "'");
  };
  (void)polyIndex;

  // --- gluing validation + derived motions ---
  std::set<std::pair<int, int>> glued;
  for (auto& g : gluings) {
    for (const EdgeRef* e : {&g.a, &g.b}) {
      if (e->poly < 0 || e->poly >= (int)polygons.size())
        throw Error(ErrorKind::Schema, "gluing references unknown polygon");
      const int n = (int)polygons[e->poly].vertices.size();
      if (e->edge < 0 || e->edge >= n) throw Error(ErrorKind::Schema, "gluing references bad edge index");
    }
    if (!glued.insert({g.a.poly, g.a.edge}).second || !glued.insert({g.b.poly, g.b.edge}).second)
      throw Error(ErrorKind::Geometry, "edge glued twice");
    const auto& va = polygons[g.a.poly].vertices;
    const auto& vb = polygons[g.b.poly].vertices;
    const int na = (int)va.size(), nb = (int)vb.size();
    const Vec2 a0 = va[g.a.edge], a1 = va[(g.a.edge + 1) % na];
    const Vec2 b0 = vb[g.b.edge], b1 = vb[(g.b.edge + 1) % nb];
    const double la = (a1 - a0).norm(), lb = (b1 - b0).norm();
    if (std::abs(la - lb) > tol.epsLen)
      throw Error(ErrorKind::Geometry, "glued edge length mismatch: " + std::to_string(la) + " vs " + std::to_string(lb));
    g.motion = motionMatchingOpposite(a0, a1, b0, b1);
  }

  // --- connectivity ---
  {
    DSU dsu((int)polygons.size());
    for (const auto& g : gluings) dsu.unite(g.a.poly, g.b.poly);
    for (size_t i = 1; i < polygons.size(); ++i)
      if (dsu.find((int)i) != dsu.find(0)) throw Error(ErrorKind::Topology, "surface is disconnected");
  }

  // --- triangulation ---
  tris.clear();
  polyEdgeOwner_.clear();
  std::vector<std::vector<int>> triOfPoly(polygons.size());
  for (int pi = 0; pi < (int)polygons.size(); ++pi) {
    const auto& poly = polygons[pi];
    auto triplets = earClip(poly, poly.id);
    // map: directed edge (i -> j) over polygon vertex indices -> (tri, edge slot)
    std::map<std::pair<int, int>, std::pair<int, int>> half;
    for (const auto& tr : triplets) {
      Tri t;
      t.poly = pi;
      for (int k = 0; k < 3; ++k) {
        t.pvertex[k] = tr[k];
        t.v[k] = poly.vertices[tr[k]];
      }
      const int ti = (int)tris.size();
      tris.push_back(t);
      triOfPoly[pi].push_back(ti);
      for (int k = 0; k < 3; ++k) half[{tr[k], tr[(k + 1) % 3]}] = {ti, k};
    }
    const int n = (int)poly.vertices.size();
    for (auto& [key, te] : half) {
      auto [i, j] = key;
      auto rev = half.find({j, i});
      if (rev != half.end()) {
        // interior diagonal: identity transition within the shared chart
        tris[te.first].link[te.second] = Link{rev->second.first, rev->second.second, RigidMotion::identity(), 0};
      } else if (j == (i + 1) % n) {
        polyEdgeOwner_[{pi, i}] = te; // original polygon edge
      } else {
        throw Error(ErrorKind::Internal, "triangulation produced an unmatched diagonal");
      }
    }
  }

  // --- glue triangle edges across gluings ---
  for (int gi = 0; gi < (int)gluings.size(); ++gi) {
    const auto& g = gluings[gi];
    auto [ta, ea] = polyEdgeOwner_.at({g.a.poly, g.a.edge});
    auto [tb, eb] = polyEdgeOwner_.at({g.b.poly, g.b.edge});
    tris[ta].link[ea] = Link{tb, eb, g.motion, +(gi + 1)};
    tris[tb].link[eb] = Link{ta, ea, g.motion.inverse(), -(gi + 1)};
    // motion maps b chart -> a chart; crossing out of a-side re-expresses in b chart via inverse
  }

  // check derived motions put side_b endpoints onto side_a endpoints swapped
  for (const auto& g : gluings) {
    const auto& va = polygons[g.a.poly].vertices;
    const auto& vb = polygons[g.b.poly].vertices;
    const int na = (int)va.size(), nb = (int)vb.size();
    const Vec2 a0 = va[g.a.edge], a1 = va[(g.a.edge + 1) % na];
    const Vec2 b0 = vb[g.b.edge], b1 = vb[(g.b.edge + 1) % nb];
    if ((g.motion(b0) - a1).norm() > 1e-7 || (g.motion(b1) - a0).norm() > 1e-7)
      throw Error(ErrorKind::Internal, "derived motion does not match edge endpoints");
  }

  // --- vertex classes via corner adjacency ---
  // next CCW corner around the vertex of corner (t,k) is across edge (t, k-1);
  // previous is across edge (t, k).
  const int nc = (int)tris.size() * 3;
  auto cid = [](int t, int k) { return 3 * t + k; };
  DSU dsu(nc);
  for (int t = 0; t < (int)tris.size(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const Link& l = tris[t].link[k];
      if (l.tri < 0) continue;
      // across edge (t,k): corner k of t ~ corner (l.edge+1) of l.tri; corner k+1 ~ corner l.edge
      dsu.unite(cid(t, k), cid(l.tri, (l.edge + 1) % 3));
      dsu.unite(cid(t, (k + 1) % 3), cid(l.tri, l.edge));
    }
  }
  std::map<int, int> root2class;
  classes.clear();
  for (int t = 0; t < (int)tris.size(); ++t) {
    for (int k = 0; k < 3; ++k) {
      int r = dsu.find(cid(t, k));
      auto it = root2class.find(r);
      int c;
      if (it == root2class.end()) {
        c = (int)classes.size();
        root2class[r] = c;
        classes.push_back(VertexClass{});
        classes[c].id = c;
      } else {
        c = it->second;
      }
      tris[t].vclass[k] = c;
    }
  }

  // corner cycles: walk CCW from a chain start (or anywhere for interior)
  auto nextCCW = [&](Corner c) -> std::optional<Corner> {
    const Link& l = tris[c.tri].link[(c.k + 2) % 3];
    if (l.tri < 0) return std::nullopt;
    return Corner{l.tri, l.edge};
  };
  auto prevCCW = [&](Corner c) -> std::optional<Corner> {
    const Link& l = tris[c.tri].link[c.k];
    if (l.tri < 0) return std::nullopt;
    return Corner{l.tri, (l.edge + 1) % 3};
  };

  std::vector<char> seen(nc, 0);
  cycleIndex_.clear();
  for (int t = 0; t < (int)tris.size(); ++t) {
    for (int k = 0; k < 3; ++k) {
      if (seen[cid(t, k)]) continue;
      // find chain start: walk CW until boundary or wrap
      Corner start{t, k};
      bool boundaryChain = false;
      {
        Corner cur = start;
        for (int guard = 0; guard <= nc; ++guard) {
          auto p = prevCCW(cur);
          if (!p) { boundaryChain = true; start = cur; break; }
          cur = *p;
          if (cur == start) break; // interior cycle
          if (guard == nc) throw Error(ErrorKind::Internal, "corner cycle walk failed");
        }
        if (!boundaryChain) start = cur;
      }
      VertexClass& vc = classes[tris[start.tri].vclass[start.k]];
      vc.boundary = boundaryChain;
      double acc = 0;
      Corner cur = start;
      for (int guard = 0; guard <= nc; ++guard) {
        vc.cycle.push_back(cur);
        vc.offsets.push_back(acc);
        cycleIndex_[{cur.tri, cur.k}] = (int)vc.cycle.size() - 1;
        seen[cid(cur.tri, cur.k)] = 1;
        acc += cornerAngle(cur);
        auto nx = nextCCW(cur);
        if (!nx) break;
        if (*nx == start) break;
        cur = *nx;
        if (guard == nc) throw Error(ErrorKind::Internal, "corner cycle walk failed");
      }
      vc.angle = acc;
    }
  }

  // class members at the polygon level + kinds
  for (auto& vc : classes) {
    std::set<std::pair<int, int>> mem;
    for (const auto& c : vc.cycle) mem.insert({tris[c.tri].poly, tris[c.tri].pvertex[c.k]});
    vc.members.assign(mem.begin(), mem.end());
    const double ref = vc.boundary ? EIGEN_PI : 2 * EIGEN_PI;
    if (vc.angle < ref - tol.epsAng) vc.kind = ConeKind::Small;
    else if (vc.angle > ref + tol.epsAng) vc.kind = ConeKind::Large;
    else vc.kind = ConeKind::Regular;
  }

  // --- topology ---
  int edgeCount = 0;
  int boundaryEdges = 0;
  for (int t = 0; t < (int)tris.size(); ++t)
    for (int k = 0; k < 3; ++k) {
      if (tris[t].link[k].tri < 0) { ++edgeCount; ++boundaryEdges; }
      else ++edgeCount;  // counted twice below
    }
  edgeCount = (edgeCount + boundaryEdges) / 2;
  eulerCharacteristic = (int)classes.size() - edgeCount + (int)tris.size();

  // boundary components: follow boundary edges vertex-chain to vertex-chain
  {
    std::set<std::pair<int, int>> bEdges;
    for (int t = 0; t < (int)tris.size(); ++t)
      for (int k = 0; k < 3; ++k)
        if (tris[t].link[k].tri < 0) bEdges.insert({t, k});
    boundaryComponents = 0;
    std::set<std::pair<int, int>> visited;
    for (auto e0 : bEdges) {
      if (visited.count(e0)) continue;
      ++boundaryComponents;
      auto e = e0;
      for (int guard = 0; guard <= (int)bEdges.size(); ++guard) {
        visited.insert(e);
        // head corner of edge e is corner (e.k+1); walk CW around that vertex to the next boundary edge
        Corner c{e.first, (e.second + 1) % 3};
        for (int g2 = 0; g2 <= nc; ++g2) {
          // candidate out-edge at this corner is edge c.k
          if (tris[c.tri].link[c.k].tri < 0) { e = {c.tri, c.k}; break; }
          auto p = prevCCW(c);
          if (!p) throw Error(ErrorKind::Internal, "boundary walk failed");
          c = *p;
        }
        if (e == e0) break;
      }
    }
  }
  genus = (2 - eulerCharacteristic - boundaryComponents) / 2;

  // --- area + diameter estimate ---
  area = 0;
  for (const auto& t : tris) area += 0.5 * cross2(t.v[1] - t.v[0], t.v[2] - t.v[0]);
  diameterEstimate = 0;
  for (const auto& poly : polygons) {
    Vec2 lo = poly.vertices[0], hi = poly.vertices[0];
    for (const auto& p : poly.vertices) { lo = lo.cwiseMin(p); hi = hi.cwiseMax(p); }
    diameterEstimate = std::max(diameterEstimate, (hi - lo).norm());
  }
}

int Surface::cycleIndexOf(const Corner& c) const { return cycleIndex_.at({c.tri, c.k}); }

double Surface::cornerAngle(const Corner& c) const {
  const Tri& t = tris[c.tri];
  const Vec2 out = t.v[(c.k + 1) % 3] - t.v[c.k];
  const Vec2 in = t.v[(c.k + 2) % 3] - t.v[c.k];
  return ccwAngle(out, in);
}

double Surface::canonicalAngle(const Corner& c, const Vec2& d) const {
  const VertexClass& vc = classes[classOf(c)];
  const int ci = cycleIndexOf(c);
  const Tri& t = tris[c.tri];
  const Vec2 out = t.v[(c.k + 1) % 3] - t.v[c.k];
  double a = vc.offsets[ci] + ccwAngle(out, d);
  if (a >= vc.angle) a = std::fmod(a, vc.angle);
  return a;
}

std::pair<int, int> Surface::triEdgeOfPolygonEdge(const EdgeRef& e) const {
  auto it = polyEdgeOwner_.find({e.poly, e.edge});
  if (it == polyEdgeOwner_.end()) throw Error(ErrorKind::Internal, "no owner for polygon edge");
  return it->second;
}

std::optional<EdgeRef> Surface::polygonEdgeOfTriEdge(int tri, int edge) const {
  const Tri& t = tris[tri];
  const int n = (int)polygons[t.poly].vertices.size();
  const int i = t.pvertex[edge], j = t.pvertex[(edge + 1) % 3];
  if (j == (i + 1) % n) return EdgeRef{t.poly, i};
  return std::nullopt;
}

std::vector<int> Surface::diagonalPath(int fromTri, int toTri) const {
  if (fromTri == toTri) return {};
  // BFS through diagonal links only (within one polygon; dual graph is a tree)
  std::map<int, std::pair<int, int>> prev; // tri -> (prevTri, edgeCrossedFromPrev)
  std::queue<int> q;
  q.push(fromTri);
  prev[fromTri] = {-1, -1};
  while (!q.empty()) {
    int cur = q.front();
    q.pop();
    if (cur == toTri) break;
    for (int k = 0; k < 3; ++k) {
      const Link& l = tris[cur].link[k];
      if (l.letter != 0 || l.tri < 0) continue;
      if (prev.count(l.tri)) continue;
      prev[l.tri] = {cur, k};
      q.push(l.tri);
    }
  }
  if (!prev.count(toTri)) throw Error(ErrorKind::Internal, "triangles not in one polygon");
  std::vector<int> edges;
  for (int cur = toTri; prev[cur].first >= 0; cur = prev[cur].first) edges.push_back(prev[cur].second);
  std::reverse(edges.begin(), edges.end());
  return edges;
}

const Gluing* Surface::gluingByName(const std::string& n) const {
  for (const auto& g : gluings)
    if (g.name == n) return &g;
  return nullptr;
}

ValidationReport validateSurface(const Surface& s) {
  ValidationReport r;
  r.eulerCharacteristic = s.eulerCharacteristic;
  r.genus = s.genus;
  r.boundaryComponents = s.boundaryComponents;
  r.totalArea = s.area;
  double gb = 0;
  int vcount = 0;
  for (const auto& vc : s.classes) {
    ++vcount;
    gb += vc.boundary ? (EIGEN_PI - vc.angle) : (2 * EIGEN_PI - vc.angle);
    if (vc.kind != ConeKind::Regular) r.coneAngles.push_back({vc.angle, vc.kind});
  }
  gb -= 2 * EIGEN_PI * s.eulerCharacteristic;
  r.gaussBonnetResidual = std::abs(gb);
  if (r.gaussBonnetResidual > 1e-9 * vcount) {
    r.ok = false;
    r.failures.push_back("Gauss-Bonnet residual too large");
  }
  for (const auto& g : s.gluings) {
    const auto& va = s.polygons[g.a.poly].vertices;
    const auto& vb = s.polygons[g.b.poly].vertices;
    const int na = (int)va.size(), nb = (int)vb.size();
    const double la = (va[(g.a.edge + 1) % na] - va[g.a.edge]).norm();
    const double lb = (vb[(g.b.edge + 1) % nb] - vb[g.b.edge]).norm();
    r.gluingLengthResiduals.push_back(std::abs(la - lb));
  }
  std::sort(r.coneAngles.begin(), r.coneAngles.end(),
            [](auto& a, auto& b) { return a.first < b.first; });
  return r;
}

// ---------------- JSON ----------------

Surface parseSurface(const std::string& jsonText, const Tolerances& tol) {
  ordered_json j;
  try {
    j = ordered_json::parse(jsonText);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::Schema, std::string("invalid JSON: ") + e.what());
  }
  Surface s;
  s.tol = tol;
  if (!j.is_object() || !j.contains("polygons") || !j["polygons"].is_array())
    throw Error(ErrorKind::Schema, "top-level object with 'polygons' array required");
  if (j.contains("name")) s.name = j["name"].get<std::string>();
  std::map<std::string, int> byId;
  for (const auto& jp : j["polygons"]) {
    if (!jp.contains("id") || !jp.contains("vertices"))
      throw Error(ErrorKind::Schema, "polygon needs 'id' and 'vertices'");
    Polygon p;
    p.id = jp["id"].get<std::string>();
    if (byId.count(p.id)) throw Error(ErrorKind::Schema, "duplicate polygon id '" + p.id + "'");
    for (const auto& jv : jp["vertices"]) {
      if (!jv.is_array() || jv.size() != 2) throw Error(ErrorKind::Schema, "vertex must be [x,y]");
      p.vertices.emplace_back(jv[0].get<double>(), jv[1].get<double>());
    }
    byId[p.id] = (int)s.polygons.size();
    s.polygons.push_back(std::move(p));
  }
  if (j.contains("gluings")) {
    if (!j["gluings"].is_array()) throw Error(ErrorKind::Schema, "'gluings' must be an array");
    int gi = 0;
    for (const auto& jg : j["gluings"]) {
      if (!jg.contains("a") || !jg.contains("b")) throw Error(ErrorKind::Schema, "gluing needs 'a' and 'b'");
      auto side = [&](const ordered_json& js) {
        if (!js.is_array() || js.size() != 2) throw Error(ErrorKind::Schema, "gluing side must be [polyId, edgeIndex]");
        const std::string id = js[0].get<std::string>();
        if (!byId.count(id)) throw Error(ErrorKind::Schema, "gluing references unknown polygon '" + id + "'");
        return EdgeRef{byId[id], js[1].get<int>()};
      };
      Gluing g;
      g.a = side(jg["a"]);
      g.b = side(jg["b"]);
      if (gi < 26) g.name = std::string(1, (char)('a' + gi));
      else g.name = "g" + std::to_string(gi);
      ++gi;
      s.gluings.push_back(g);
    }
  }
  s.finalize();
  return s;
}

std::string serializeSurface(const Surface& s) {
  ordered_json j;
  if (!s.name.empty()) j["name"] = s.name;
  j["polygons"] = ordered_json::array();
  for (const auto& p : s.polygons) {
    ordered_json jp;
    jp["id"] = p.id;
    jp["vertices"] = ordered_json::array();
    for (const auto& v : p.vertices) jp["vertices"].push_back({v.x(), v.y()});
    j["polygons"].push_back(jp);
  }
  j["gluings"] = ordered_json::array();
  for (const auto& g : s.gluings) {
    ordered_json jg;
    jg["a"] = {s.polygons[g.a.poly].id, g.a.edge};
    jg["b"] = {s.polygons[g.b.poly].id, g.b.edge};
    j["gluings"].push_back(jg);
  }
  return j.dump(2);
}

}  // namespace conesurf
