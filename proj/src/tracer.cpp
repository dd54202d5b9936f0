#include "conesurf/tracer.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace conesurf {

using nlohmann::ordered_json;

// ---------------- words ----------------

void HomotopyWord::reduce() {
  std::vector<int> out;
  for (int l : letters) {
    if (!out.empty() && out.back() == -l) out.pop_back();
    else out.push_back(l);
  }
  if (cyclic) {
    size_t b = 0, e = out.size();
    while (e - b >= 2 && out[b] == -out[e - 1]) { ++b; --e; }
    out = std::vector<int>(out.begin() + b, out.begin() + e);
  }
  letters = std::move(out);
}

bool HomotopyWord::reduced() const {
  for (size_t i = 0; i + 1 < letters.size(); ++i)
    if (letters[i] == -letters[i + 1]) return false;
  if (cyclic && letters.size() >= 2 && letters.front() == -letters.back()) return false;
  return true;
}

HomotopyWord HomotopyWord::inverse() const {
  HomotopyWord w;
  w.cyclic = cyclic;
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) w.letters.push_back(-*it);
  return w;
}

std::string HomotopyWord::str(const Surface& s) const {
  std::string out;
  for (int l : letters) {
    if (!out.empty()) out += ' ';
    const int gi = std::abs(l) - 1;
    out += (gi >= 0 && gi < (int)s.gluings.size()) ? s.gluings[gi].name : "?";
    if (l < 0) out += '\'';
  }
  return out;
}

HomotopyWord parseWord(const Surface& s, const std::string& text, bool cyclic) {
  HomotopyWord w;
  w.cyclic = cyclic;
  std::istringstream ss(text);
  std::string tok;
  while (ss >> tok) {
    bool inv = false;
    if (!tok.empty() && tok.back() == '\'') {
      inv = true;
      tok.pop_back();
    }
    const Gluing* g = s.gluingByName(tok);
    if (!g) throw Error(ErrorKind::Input, "unknown gluing letter '" + tok + "'");
    int gi = 0;
    while (&s.gluings[gi] != g) ++gi;
    w.letters.push_back(inv ? -(gi + 1) : (gi + 1));
  }
  w.reduce();
  return w;
}

HomotopyWord wordPower(const HomotopyWord& w, int k) {
  HomotopyWord out;
  out.cyclic = w.cyclic;
  for (int i = 0; i < k; ++i) out.letters.insert(out.letters.end(), w.letters.begin(), w.letters.end());
  out.reduce();
  return out;
}

void GeodesicPath::recomputeLength() {
  length = 0;
  for (const auto& e : events)
    if (e.kind == PathEvent::Seg) length += (e.p1 - e.p0).norm();
}

// ---------------- tracing ----------------

namespace {

struct ExitInfo {
  enum Kind { EdgeExit, VertexHit, NoExit } kind = NoExit;
  int edge = -1;
  double t = 0;     // distance along the ray
  Vec2 point{0, 0}; // chart point of exit / hit
  int corner = -1;  // for VertexHit
};

// Exit of ray p + t*d from triangle (chart coords). p inside or on boundary.
ExitInfo triangleExitCore(const Surface& s, const Tri& tri, const Vec2& p, const Vec2& d, double tMin) {
  const double epsV = s.tol.epsInc;
  ExitInfo best;
  double bestT = std::numeric_limits<double>::infinity();
  for (int e = 0; e < 3; ++e) {
    const Vec2 a = tri.v[e], b = tri.v[(e + 1) % 3];
    const Vec2 ev = b - a;
    const double denom = cross2(d, ev);
    if (std::abs(denom) < 1e-15) continue; // parallel
    // outward test: outward normal of CCW edge
    const Vec2 n(ev.y(), -ev.x());
    if (d.dot(n) <= 0) continue;
    const double t = cross2(a - p, ev) / denom;
    if (t < tMin) continue;
    const Vec2 q = p + t * d;
    const double sparam = (q - a).dot(ev) / ev.squaredNorm();
    if (sparam < -1e-9 || sparam > 1 + 1e-9) continue;
    if (t < bestT) {
      bestT = t;
      best.kind = ExitInfo::EdgeExit;
      best.edge = e;
      best.t = t;
      best.point = q;
    }
  }
  if (best.kind == ExitInfo::NoExit) return best;
  if (best.t < 0) best.t = 0;
  // vertex grazing: closest approach of the traversed segment to each corner
  for (int k = 0; k < 3; ++k) {
    const Vec2 c = tri.v[k];
    const double tProj = std::clamp((c - p).dot(d), 0.0, best.t);
    if (tProj <= 1e-12) continue;
    if ((p + tProj * d - c).norm() <= epsV) {
      best.kind = ExitInfo::VertexHit;
      best.corner = k;
      best.t = tProj;
      best.point = p + tProj * d;
      return best;
    }
  }
  return best;
}

// Starting exactly on an edge pointing outward exits with a zero-length step.
ExitInfo triangleExit(const Surface& s, const Tri& tri, const Vec2& p, const Vec2& d) {
  ExitInfo e = triangleExitCore(s, tri, p, d, 1e-12);
  if (e.kind == ExitInfo::NoExit) e = triangleExitCore(s, tri, p, d, -1e-9);
  return e;
}

}  // namespace

std::pair<SurfacePoint, Direction> crossEdge(const Surface& s, const SurfacePoint& p, Direction v) {
  if (p.tri < 0) throw Error(ErrorKind::Input, "crossEdge needs a chart point");
  const Tri& tri = s.tris[p.tri];
  // find the edge p lies on
  int edge = -1;
  for (int e = 0; e < 3; ++e) {
    const Vec2 a = tri.v[e], b = tri.v[(e + 1) % 3];
    const Vec2 ev = b - a;
    const double d = std::abs(cross2(ev, p.pos - a)) / ev.norm();
    const double sparam = (p.pos - a).dot(ev) / ev.squaredNorm();
    if (d <= s.tol.epsInc && sparam >= -1e-9 && sparam <= 1 + 1e-9) {
      const Vec2 n(ev.y(), -ev.x());
      if (v.vec().dot(n) > 0) { edge = e; break; }
    }
  }
  if (edge < 0) throw Error(ErrorKind::Input, "point is not on an edge with outward direction");
  const Link& l = tri.link[edge];
  if (l.tri < 0) throw Error(ErrorKind::Geometry, "boundary edge hit");
  const RigidMotion inv = l.motion.inverse(); // this chart -> neighbor chart
  SurfacePoint q;
  q.tri = l.tri;
  q.pos = inv(p.pos);
  Direction w = Direction::fromVec(inv.applyDir(v.vec()));
  return {q, w};
}

GeodesicPath traceRay(const Surface& s, const SurfacePoint& start, Direction v, double L) {
  if (L <= 0) throw Error(ErrorKind::Input, "trace length must be positive");
  if (start.tri < 0) throw Error(ErrorKind::Input, "trace start must be a chart point");
  // starting on a cone point is an error
  for (int k = 0; k < 3; ++k)
    if ((s.tris[start.tri].v[k] - start.pos).norm() <= s.tol.epsInc)
      throw Error(ErrorKind::Input, "trace start lies on a vertex");

  GeodesicPath path;
  path.start = start;
  path.word.cyclic = false;
  int tri = start.tri;
  Vec2 pos = start.pos;
  Vec2 dir = v.vec();
  double remaining = L;

  for (std::size_t iter = 0; iter < s.tol.maxIterations; ++iter) {
    const Tri& t = s.tris[tri];
    ExitInfo ex = triangleExit(s, t, pos, dir);
    if (ex.kind == ExitInfo::NoExit)
      throw Error(ErrorKind::Internal, "ray failed to exit triangle");
    if (ex.t >= remaining) {
      PathEvent seg;
      seg.kind = PathEvent::Seg;
      seg.tri = tri;
      seg.p0 = pos;
      seg.p1 = pos + remaining * dir;
      path.events.push_back(seg);
      path.end = SurfacePoint{tri, seg.p1, -1};
      break;
    }
    PathEvent seg;
    seg.kind = PathEvent::Seg;
    seg.tri = tri;
    seg.p0 = pos;
    seg.p1 = ex.point;
    path.events.push_back(seg);
    remaining -= ex.t;

    if (ex.kind == ExitInfo::VertexHit) {
      PathEvent hit;
      hit.kind = PathEvent::ConeHit;
      hit.coneClass = t.vclass[ex.corner];
      path.events.push_back(hit);
      path.end = SurfacePoint{-1, {0, 0}, hit.coneClass};
      break;
    }
    const Link& l = t.link[ex.edge];
    if (l.tri < 0) {
      PathEvent b;
      b.kind = PathEvent::BoundaryHit;
      b.bTri = tri;
      b.bEdge = ex.edge;
      path.events.push_back(b);
      path.end = SurfacePoint{tri, ex.point, -1};
      break;
    }
    PathEvent cr;
    cr.kind = PathEvent::Cross;
    cr.letter = l.letter;
    cr.crossTri = tri;
    cr.crossEdge = ex.edge;
    path.events.push_back(cr);
    if (l.letter != 0) path.word.letters.push_back(l.letter);

    const RigidMotion inv = l.motion.inverse();
    pos = inv(ex.point);
    dir = inv.applyDir(dir);
    tri = l.tri;
  }
  path.word.reduce();
  path.recomputeLength();
  // closed if endpoint returned to start in the same chart
  if (path.end.tri == start.tri && (path.end.pos - start.pos).norm() <= s.tol.epsInc) path.closed = true;
  return path;
}

LocalGeodesicReport checkLocalGeodesic(const Surface& s, const GeodesicPath& path) {
  LocalGeodesicReport r;
  r.worstPassageMargin = std::numeric_limits<double>::infinity();
  const PathEvent* prevSeg = nullptr;
  const PathEvent* pendingCross = nullptr;
  bool pendingPass = false;
  for (const auto& ev : path.events) {
    switch (ev.kind) {
      case PathEvent::Seg: {
        if (prevSeg && !pendingPass) {
          Vec2 d = (prevSeg->p1 - prevSeg->p0).normalized();
          Vec2 expectedP = prevSeg->p1;
          if (pendingCross) {
            const Link& l = s.tris[pendingCross->crossTri].link[pendingCross->crossEdge];
            const RigidMotion inv = l.motion.inverse();
            d = inv.applyDir(d);
            expectedP = inv(expectedP);
          }
          // deviation of the next segment from the extended line
          r.straightnessResidual = std::max(r.straightnessResidual, (ev.p0 - expectedP).norm());
          r.straightnessResidual = std::max(r.straightnessResidual, std::abs(cross2(d, ev.p1 - ev.p0)));
        }
        prevSeg = &ev;
        pendingCross = nullptr;
        pendingPass = false;
        break;
      }
      case PathEvent::Cross:
        pendingCross = &ev;
        break;
      case PathEvent::Pass: {
        const double m = std::min(ev.pass.leftAngle, ev.pass.rightAngle) - EIGEN_PI;
        r.worstPassageMargin = std::min(r.worstPassageMargin, m);
        pendingPass = true;
        break;
      }
      default:
        break;
    }
  }
  r.locallyGeodesic =
      r.straightnessResidual <= s.tol.epsInc && r.worstPassageMargin >= -s.tol.epsAng;
  return r;
}

std::pair<double, int> minClearance(const Surface& s, const GeodesicPath& path, bool smallOnly) {
  double best = std::numeric_limits<double>::infinity();
  int witness = -1;
  auto consider = [&](const Vec2& c, int vclass, const Vec2& a, const Vec2& b) {
    const VertexClass& vc = s.classes[vclass];
    if (smallOnly ? vc.kind != ConeKind::Small : vc.kind == ConeKind::Regular) return;
    const Vec2 ab = b - a;
    const double t = std::clamp((c - a).dot(ab) / std::max(ab.squaredNorm(), 1e-300), 0.0, 1.0);
    const double d = (a + t * ab - c).norm();
    if (d < best) {
      best = d;
      witness = vclass;
    }
  };
  for (const auto& ev : path.events) {
    if (ev.kind != PathEvent::Seg) continue;
    const Tri& t = s.tris[ev.tri];
    for (int k = 0; k < 3; ++k) consider(t.v[k], t.vclass[k], ev.p0, ev.p1);
    for (int e = 0; e < 3; ++e) {
      const Link& l = t.link[e];
      if (l.tri < 0) continue;
      const Tri& n = s.tris[l.tri];
      for (int k = 0; k < 3; ++k) consider(l.motion(n.v[k]), n.vclass[k], ev.p0, ev.p1);
    }
  }
  return {best, witness};
}

std::string serializePath(const Surface& s, const GeodesicPath& p) {
  ordered_json j;
  j["length"] = p.length;
  j["closed"] = p.closed;
  j["word"] = p.word.str(s);
  j["events"] = ordered_json::array();
  auto letterName = [&](int l) -> ordered_json {
    if (l == 0) return nullptr;
    const int gi = std::abs(l) - 1;
    std::string n = s.gluings[gi].name;
    if (l < 0) n += "'";
    return n;
  };
  for (const auto& ev : p.events) {
    switch (ev.kind) {
      case PathEvent::Seg:
        j["events"].push_back({{"seg", {{ev.p0.x(), ev.p0.y()}, {ev.p1.x(), ev.p1.y()}, ev.tri}}});
        break;
      case PathEvent::Cross:
        j["events"].push_back({{"cross", letterName(ev.letter)}});
        break;
      case PathEvent::Pass: {
        ordered_json c;
        c["id"] = ev.pass.coneClass;
        c["left"] = ev.pass.leftAngle;
        c["right"] = ev.pass.rightAngle;
        j["events"].push_back({{"cone", c}});
        break;
      }
      case PathEvent::ConeHit:
        j["events"].push_back({{"cone_hit", ev.coneClass}});
        break;
      case PathEvent::BoundaryHit:
        j["events"].push_back({{"boundary", {ev.bTri, ev.bEdge}}});
        break;
    }
  }
  return j.dump();
}

}  // namespace conesurf
