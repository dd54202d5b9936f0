#include "conesurf/closed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conesurf/shortest.hpp"
#include "conesurf/unfolding.hpp"

namespace conesurf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Crossing {
  int tri = -1, edge = -1;
};

struct Pivot {
  Corner inCorner, outCorner;
  Vec2 dIn{0, 0}, dOut{0, 0}; // chart travel dirs (into / out of the vertex)
  int vclass = -1;
};

struct FunnelOut {
  std::vector<Vec2> pts;     // S, bends..., E
  std::vector<int> idx;      // portal index per bend
  double length = 0;
};

double triarea(const Vec2& a, const Vec2& b, const Vec2& c) { return cross2(b - a, c - a); }

// Classic funnel through developed portals (L[i], R[i]); returns the taut path.
FunnelOut funnel(const Vec2& S, const std::vector<Vec2>& L, const std::vector<Vec2>& R,
                 const Vec2& E, double eps) {
  const int m = (int)L.size();
  FunnelOut out;
  out.pts.push_back(S);
  Vec2 apex = S, pl = S, pr = S;
  int li = 0, ri = 0;
  auto lv = [&](int i) { return i < m ? L[i] : E; };
  auto rv = [&](int i) { return i < m ? R[i] : E; };
  for (int i = 0; i <= m; ++i) {
    const Vec2 l = lv(i), r = rv(i);
    if (triarea(apex, pr, r) <= eps) {
      if ((apex - pr).norm() <= 1e-14 || triarea(apex, pl, r) > -eps) {
        pr = r;
        ri = i;
      } else {
        out.pts.push_back(pl);
        out.idx.push_back(li);
        apex = pl;
        i = li;
        li = ri = i;
        pl = pr = apex;
        continue;
      }
    }
    if (triarea(apex, pl, l) >= -eps) {
      if ((apex - pl).norm() <= 1e-14 || triarea(apex, pr, l) < eps) {
        pl = l;
        li = i;
      } else {
        out.pts.push_back(pr);
        out.idx.push_back(ri);
        apex = pr;
        i = ri;
        li = ri = i;
        pl = pr = apex;
        continue;
      }
    }
  }
  out.pts.push_back(E);
  for (size_t i = 0; i + 1 < out.pts.size(); ++i) out.length += (out.pts[i + 1] - out.pts[i]).norm();
  return out;
}

void developRun(const Surface& s, int startTri, const std::vector<Crossing>& run,
                std::vector<RigidMotion>& frames, std::vector<Vec2>& L, std::vector<Vec2>& R) {
  frames.assign(1, RigidMotion::identity());
  L.clear();
  R.clear();
  int tri = startTri;
  for (const auto& c : run) {
    if (c.tri != tri) throw Error(ErrorKind::Internal, "run triangle chain broken");
    const Link& l = s.tris[c.tri].link[c.edge];
    if (l.tri < 0) throw Error(ErrorKind::Internal, "run crosses a boundary edge");
    const RigidMotion& F = frames.back();
    L.push_back(F(s.tris[c.tri].v[(c.edge + 1) % 3]));
    R.push_back(F(s.tris[c.tri].v[c.edge]));
    frames.push_back(F * l.motion);
    tri = l.tri;
  }
}

// Straight chord through a run: Seg/Cross events with crossing points.
void emitStraightRun(const Surface& s, int startTri, const std::vector<Crossing>& run,
                     const Vec2& Schart, const Vec2& Edev, GeodesicPath& path) {
  std::vector<RigidMotion> frames;
  std::vector<Vec2> L, R;
  developRun(s, startTri, run, frames, L, R);
  Vec2 prev = Schart;
  int tri = startTri;
  for (size_t j = 0; j < run.size(); ++j) {
    const Vec2 pa = R[j], pb = L[j];
    const Vec2 d = Edev - Schart;
    const double denom = cross2(d, pb - pa);
    double t = 0.5;
    if (std::abs(denom) > 1e-18) t = std::clamp(cross2(d, Schart - pa) / denom, 0.0, 1.0);
    const Vec2 xdev = pa + t * (pb - pa);
    const Vec2 xchart = frames[j].inverse()(xdev);
    PathEvent seg;
    seg.kind = PathEvent::Seg;
    seg.tri = tri;
    seg.p0 = prev;
    seg.p1 = xchart;
    path.events.push_back(seg);
    const Link& l = s.tris[run[j].tri].link[run[j].edge];
    PathEvent cr;
    cr.kind = PathEvent::Cross;
    cr.crossTri = run[j].tri;
    cr.crossEdge = run[j].edge;
    cr.letter = l.letter;
    if (cr.letter != 0) path.word.letters.push_back(cr.letter);
    path.events.push_back(cr);
    prev = frames[j + 1].inverse()(xdev);
    tri = l.tri;
  }
  PathEvent seg;
  seg.kind = PathEvent::Seg;
  seg.tri = tri;
  seg.p0 = prev;
  seg.p1 = frames.back().inverse()(Edev);
  path.events.push_back(seg);
}

class Shortener {
public:
  Shortener(const Surface& s, const HomotopyWord& w) : s_(s) { buildInitial(w); }

  void run() {
    double prev = kInf;
    int stable = 0;
    for (iters_ = 0; iters_ < (int)s_.tol.maxIterations; ++iters_) {
      bool structural = false;
      const double len = pivots_.empty() ? cyclicPass(structural) : pivotPass(structural);
      history_.push_back(len);
      if (len <= s_.tol.epsInc)
        throw Error(ErrorKind::Input, "word is homotopically trivial (loop shrank to a point)");
      if (!structural && std::abs(prev - len) <= s_.tol.epsStopRel * std::max(len, 1e-12)) {
        if (++stable >= 3) {
          length_ = len;
          return;
        }
      } else {
        stable = 0;
      }
      prev = len;
    }
    throw Error(ErrorKind::Resource, "shortening iteration cap exceeded");
  }

  GeodesicPath result() const;
  double length() const { return length_; }
  int iterations() const { return iters_; }
  const std::vector<double>& history() const { return history_; }

private:
  void buildInitial(const HomotopyWord& w) {
    HomotopyWord cw = w;
    cw.cyclic = true;
    cw.reduce();
    if (cw.letters.empty()) throw Error(ErrorKind::Input, "word reduces to the trivial word");
    std::vector<Crossing> cyc;
    int curTri = -1;
    for (int l : cw.letters) {
      const Gluing& g = s_.gluings[std::abs(l) - 1];
      const EdgeRef side = l > 0 ? g.a : g.b;
      auto [ti, te] = s_.triEdgeOfPolygonEdge(side);
      if (curTri >= 0) {
        if (s_.tris[curTri].poly != side.poly)
          throw Error(ErrorKind::Input, "word is not composable (polygon mismatch)");
        for (int e : s_.diagonalPath(curTri, ti)) {
          cyc.push_back({curTri, e});
          curTri = s_.tris[curTri].link[e].tri;
        }
      }
      cyc.push_back({ti, te});
      curTri = s_.tris[ti].link[te].tri;
    }
    {
      const int l = cw.letters[0];
      const Gluing& g = s_.gluings[std::abs(l) - 1];
      const EdgeRef side = l > 0 ? g.a : g.b;
      auto [ti, te] = s_.triEdgeOfPolygonEdge(side);
      (void)te;
      if (s_.tris[curTri].poly != side.poly)
        throw Error(ErrorKind::Input, "word is not cyclically composable");
      for (int e : s_.diagonalPath(curTri, ti)) {
        cyc.push_back({curTri, e});
        curTri = s_.tris[curTri].link[e].tri;
      }
    }
    runs_.assign(1, cyc);
    pivots_.clear();
    cutParam_ = 0.5;
  }

  double funnelEps() const { return 1e-12 * std::max(1.0, s_.diameterEstimate * s_.diameterEstimate); }

  struct BendData {
    Pivot pivot;
    int splitBegin = 0, splitEnd = 0; // crossings consumed [begin, end)
  };

  std::vector<BendData> extractBends(int startTri, const std::vector<Crossing>& run,
                                     const std::vector<RigidMotion>& frames, const FunnelOut& f,
                                     const std::vector<Vec2>& L, const std::vector<Vec2>& R) const {
    std::vector<BendData> out;
    const double eps = 1e-7 * std::max(1.0, s_.diameterEstimate);
    for (size_t b = 0; b < f.idx.size(); ++b) {
      const Vec2 P = f.pts[b + 1];
      const int j = f.idx[b];
      int jEnd = j;
      while (jEnd < (int)run.size() &&
             ((L[jEnd] - P).norm() <= eps || (R[jEnd] - P).norm() <= eps))
        ++jEnd;
      BendData bd;
      bd.splitBegin = j;
      bd.splitEnd = jEnd;
      Pivot& pv = bd.pivot;
      const int inTri = j == 0 ? startTri : s_.tris[run[j - 1].tri].link[run[j - 1].edge].tri;
      const int outTri =
          jEnd == 0 ? startTri : s_.tris[run[jEnd - 1].tri].link[run[jEnd - 1].edge].tri;
      int kin = -1, kout = -1;
      for (int k = 0; k < 3; ++k) {
        if ((frames[j](s_.tris[inTri].v[k]) - P).norm() <= eps) kin = k;
        if ((frames[jEnd](s_.tris[outTri].v[k]) - P).norm() <= eps) kout = k;
      }
      if (kin < 0 || kout < 0) throw Error(ErrorKind::Internal, "bend vertex not found in charts");
      pv.inCorner = {inTri, kin};
      pv.outCorner = {outTri, kout};
      pv.vclass = s_.tris[inTri].vclass[kin];
      pv.dIn = frames[j].rot.inverse() * (P - f.pts[b]).normalized();
      pv.dOut = frames[jEnd].rot.inverse() * (f.pts[b + 2] - P).normalized();
      out.push_back(std::move(bd));
    }
    return out;
  }

  // Returns true if valid; else fills the complement-side chain for a flip.
  bool validateOrFlip(const Pivot& pv, std::vector<Crossing>& replacement) const {
    const VertexClass& vc = s_.classes[pv.vclass];
    const double theta = vc.angle;
    const double ain = s_.canonicalAngle(pv.inCorner, -pv.dIn);
    const double bout = s_.canonicalAngle(pv.outCorner, pv.dOut);
    double left = std::fmod(ain - bout, theta);
    if (left < 0) left += theta;
    const double right = theta - left;
    if (left >= EIGEN_PI - s_.tol.epsAng && right >= EIGEN_PI - s_.tol.epsAng) return true;
    if (vc.boundary)
      throw Error(ErrorKind::Geometry, "shortening pressed against the surface boundary");
    const int m = (int)vc.cycle.size();
    const int i = s_.cycleIndexOf(pv.inCorner);
    const int j = s_.cycleIndexOf(pv.outCorner);
    replacement.clear();
    if (left < right) {
      int cur = i;
      const int steps = ((i - j) % m + m) % m;
      for (int q = 0; q < steps; ++q) {
        const Corner c = vc.cycle[cur];
        replacement.push_back({c.tri, c.k});
        cur = (cur - 1 + m) % m;
      }
    } else {
      int cur = i;
      const int steps = ((j - i) % m + m) % m;
      for (int q = 0; q < steps; ++q) {
        const Corner c = vc.cycle[cur];
        replacement.push_back({c.tri, (c.k + 2) % 3});
        cur = (cur + 1) % m;
      }
    }
    return false;
  }

  double cyclicPass(bool& structural) {
    std::vector<Crossing>& cyc = runs_[0];
    const Crossing c0 = cyc.front();
    const Link& l0 = s_.tris[c0.tri].link[c0.edge];
    const int startTri = l0.tri;
    std::vector<Crossing> run(cyc.begin() + 1, cyc.end());
    run.push_back(c0);
    std::vector<RigidMotion> frames;
    std::vector<Vec2> L, R;
    developRun(s_, startTri, run, frames, L, R);
    const int le = l0.edge;
    const Vec2 ea = s_.tris[startTri].v[le], eb = s_.tris[startTri].v[(le + 1) % 3];
    const Vec2 S = ea + cutParam_ * (eb - ea);
    const Vec2 E = frames.back()(S);
    FunnelOut f = funnel(S, L, R, E, funnelEps());
    auto bends = extractBends(startTri, run, frames, f, L, R);
    if (!bends.empty()) {
      structural = true;
      std::vector<Pivot> pv;
      std::vector<std::vector<Crossing>> rs;
      for (size_t bi = 0; bi < bends.size(); ++bi) {
        pv.push_back(bends[bi].pivot);
        if (bi + 1 < bends.size())
          rs.push_back(std::vector<Crossing>(run.begin() + bends[bi].splitEnd,
                                             run.begin() + bends[bi + 1].splitBegin));
      }
      std::vector<Crossing> wrap(run.begin() + bends.back().splitEnd, run.end());
      wrap.insert(wrap.end(), run.begin(), run.begin() + bends.front().splitBegin);
      rs.push_back(std::move(wrap));
      pivots_ = std::move(pv);
      runs_ = std::move(rs);
      return f.length;
    }
    structural = false;
    // advance the cut to the middle portal
    const int mid = (int)run.size() / 2;
    const Vec2 pa = R[mid], pb = L[mid];
    double t = 0.5;
    const Vec2 d = E - S;
    const double denom = cross2(d, pb - pa);
    if (std::abs(denom) > 1e-15) t = std::clamp(cross2(d, S - pa) / denom, 1e-6, 1.0 - 1e-6);
    std::vector<Crossing> rotated(run.begin() + mid, run.end());
    rotated.insert(rotated.end(), run.begin(), run.begin() + mid);
    runs_[0] = std::move(rotated);
    cutParam_ = 1.0 - t; // source-edge param flips on the reciprocal edge
    return f.length;
  }

  double pivotPass(bool& structural) {
    const int np = (int)pivots_.size();
    double total = 0;
    structural = false;
    std::vector<std::vector<BendData>> newBends(np);
    for (int i = 0; i < np; ++i) {
      Pivot& p0 = pivots_[i];
      Pivot& p1 = pivots_[(i + 1) % np];
      const int startTri = p0.outCorner.tri;
      std::vector<RigidMotion> frames;
      std::vector<Vec2> L, R;
      developRun(s_, startTri, runs_[i], frames, L, R);
      const int endTri = runs_[i].empty()
                             ? startTri
                             : s_.tris[runs_[i].back().tri].link[runs_[i].back().edge].tri;
      if (endTri != p1.inCorner.tri)
        throw Error(ErrorKind::Internal, "run does not reach the next pivot");
      const Vec2 S = s_.tris[startTri].v[p0.outCorner.k];
      const Vec2 E = frames.back()(s_.tris[endTri].v[p1.inCorner.k]);
      FunnelOut f = funnel(S, L, R, E, funnelEps());
      total += f.length;
      newBends[i] = extractBends(startTri, runs_[i], frames, f, L, R);
      p0.dOut = (f.pts[1] - f.pts[0]).normalized();
      p1.dIn = frames.back().rot.inverse() *
               (f.pts[f.pts.size() - 1] - f.pts[f.pts.size() - 2]).normalized();
    }
    bool anyNew = false;
    for (auto& nb : newBends) anyNew = anyNew || !nb.empty();
    if (anyNew) {
      structural = true;
      std::vector<Pivot> np2;
      std::vector<std::vector<Crossing>> nr;
      for (int i = 0; i < np; ++i) {
        np2.push_back(pivots_[i]);
        const auto& run = runs_[i];
        if (newBends[i].empty()) {
          nr.push_back(run);
          continue;
        }
        int prevEnd = 0;
        for (auto& bd : newBends[i]) {
          nr.push_back(std::vector<Crossing>(run.begin() + prevEnd, run.begin() + bd.splitBegin));
          np2.push_back(bd.pivot);
          prevEnd = bd.splitEnd;
        }
        nr.push_back(std::vector<Crossing>(run.begin() + prevEnd, run.end()));
      }
      pivots_ = std::move(np2);
      runs_ = std::move(nr);
      return total;
    }
    // validate and flip
    for (int i = 0; i < (int)pivots_.size(); ++i) {
      std::vector<Crossing> repl;
      if (validateOrFlip(pivots_[i], repl)) continue;
      structural = true;
      if (pivots_.size() == 1) {
        std::vector<Crossing> merged = runs_[0];
        merged.insert(merged.end(), repl.begin(), repl.end());
        pivots_.clear();
        runs_.assign(1, merged);
        cutParam_ = 0.5;
        return total;
      }
      const int prev = (i - 1 + (int)pivots_.size()) % (int)pivots_.size();
      std::vector<Crossing> merged = runs_[prev];
      merged.insert(merged.end(), repl.begin(), repl.end());
      merged.insert(merged.end(), runs_[i].begin(), runs_[i].end());
      runs_[prev] = std::move(merged);
      runs_.erase(runs_.begin() + i);
      pivots_.erase(pivots_.begin() + i);
      return total;
    }
    return total;
  }

  const Surface& s_;
  std::vector<Pivot> pivots_;
  std::vector<std::vector<Crossing>> runs_;
  double cutParam_ = 0.5;
  double length_ = kInf;
  int iters_ = 0;
  std::vector<double> history_;
};

GeodesicPath Shortener::result() const {
  GeodesicPath path;
  path.closed = true;
  path.word.cyclic = true;
  if (pivots_.empty()) {
    const std::vector<Crossing>& cyc = runs_[0];
    const Crossing c0 = cyc.front();
    const Link& l0 = s_.tris[c0.tri].link[c0.edge];
    const int startTri = l0.tri;
    std::vector<Crossing> run(cyc.begin() + 1, cyc.end());
    run.push_back(c0);
    std::vector<RigidMotion> frames;
    std::vector<Vec2> L, R;
    developRun(s_, startTri, run, frames, L, R);
    const int le = l0.edge;
    const Vec2 ea = s_.tris[startTri].v[le], eb = s_.tris[startTri].v[(le + 1) % 3];
    const Vec2 S = ea + cutParam_ * (eb - ea);
    const Vec2 E = frames.back()(S);
    path.start = SurfacePoint{startTri, S, -1};
    emitStraightRun(s_, startTri, run, S, E, path);
    path.end = path.start;
  } else {
    const int np = (int)pivots_.size();
    auto passEvent = [&](const Pivot& pv) {
      const VertexClass& vc = s_.classes[pv.vclass];
      const double theta = vc.angle;
      const double ain = s_.canonicalAngle(pv.inCorner, -pv.dIn);
      const double bout = s_.canonicalAngle(pv.outCorner, pv.dOut);
      double left = std::fmod(ain - bout, theta);
      if (left < 0) left += theta;
      PathEvent pe;
      pe.kind = PathEvent::Pass;
      pe.pass.coneClass = pv.vclass;
      pe.pass.leftAngle = left;
      pe.pass.rightAngle = theta - left;
      const bool useLeft = left <= theta - left;
      pe.pass.turn = useLeft ? (EIGEN_PI - left) : ((theta - left) - EIGEN_PI);
      const int m = (int)vc.cycle.size();
      const int ii = s_.cycleIndexOf(pv.inCorner);
      const int jj = s_.cycleIndexOf(pv.outCorner);
      if (useLeft) {
        const int steps = ((ii - jj) % m + m) % m;
        int cur = ii;
        for (int q = 0; q < steps; ++q) {
          const Corner c = vc.cycle[cur];
          pe.pass.chain.push_back({c.tri, c.k});
          cur = (cur - 1 + m) % m;
        }
      } else {
        const int steps = ((jj - ii) % m + m) % m;
        int cur = ii;
        for (int q = 0; q < steps; ++q) {
          const Corner c = vc.cycle[cur];
          pe.pass.chain.push_back({c.tri, (c.k + 2) % 3});
          cur = (cur + 1) % m;
        }
      }
      for (auto [tri, edge] : pe.pass.chain) {
        const int letter = s_.tris[tri].link[edge].letter;
        if (letter != 0) path.word.letters.push_back(letter);
      }
      return pe;
    };
    path.start = SurfacePoint{pivots_[0].outCorner.tri,
                              s_.tris[pivots_[0].outCorner.tri].v[pivots_[0].outCorner.k], -1};
    for (int i = 0; i < np; ++i) {
      const Pivot& pv = pivots_[i];
      const Pivot& p1 = pivots_[(i + 1) % np];
      const int startTri = pv.outCorner.tri;
      std::vector<RigidMotion> frames;
      std::vector<Vec2> L, R;
      developRun(s_, startTri, runs_[i], frames, L, R);
      const int endTri = runs_[i].empty()
                             ? startTri
                             : s_.tris[runs_[i].back().tri].link[runs_[i].back().edge].tri;
      const Vec2 S = s_.tris[startTri].v[pv.outCorner.k];
      const Vec2 E = frames.back()(s_.tris[endTri].v[p1.inCorner.k]);
      emitStraightRun(s_, startTri, runs_[i], S, E, path);
      path.events.push_back(passEvent(p1));
    }
    path.end = path.start;
  }
  path.word.reduce();
  path.recomputeLength();
  return path;
}

}  // namespace

double geodesicLength(const GeodesicPath& p) {
  double L = 0;
  for (const auto& e : p.events)
    if (e.kind == PathEvent::Seg) L += (e.p1 - e.p0).norm();
  return L;
}

ClosedGeodesicResult closedGeodesic(const Surface& s, const HomotopyWord& w) {
  Shortener sh(s, w);
  sh.run();
  ClosedGeodesicResult res;
  res.iterations = sh.iterations();
  res.lengthHistory = sh.history();
  GeodesicPath base = sh.result();
  double lmin = base.length;
  std::vector<GeodesicPath> ties;
  for (auto& r : closedTies(s, base)) {
    lmin = std::min(lmin, r.path.length);
    ties.push_back(std::move(r.path));
  }
  const double tie = s.tol.epsTieRel * std::max(lmin, 1e-12);
  for (auto& t : ties)
    if (t.length <= lmin + tie) res.minimizers.push_back(std::move(t));
  if (res.minimizers.empty()) res.minimizers.push_back(std::move(base));
  res.length = lmin;
  return res;
}

bool pathsCrossTransversally(const Surface& s, const GeodesicPath& a, const GeodesicPath& b) {
  struct TriSeg {
    int tri;
    Vec2 p, q;
  };
  auto collect = [&](const GeodesicPath& g) {
    std::vector<TriSeg> out;
    for (const auto& ev : g.events)
      if (ev.kind == PathEvent::Seg && (ev.p1 - ev.p0).norm() > 1e-12)
        out.push_back({ev.tri, ev.p0, ev.p1});
    return out;
  };
  auto A = collect(a);
  auto B = collect(b);
  auto properCross = [&](const TriSeg& u, const TriSeg& v) {
    const double eps = 1e-12;
    const double d1 = cross2(u.q - u.p, v.p - u.p);
    const double d2 = cross2(u.q - u.p, v.q - u.p);
    const double d3 = cross2(v.q - v.p, u.p - v.p);
    const double d4 = cross2(v.q - v.p, u.q - v.p);
    if (!((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps))) return false;
    if (!((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps))) return false;
    const double t = d3 / (d3 - d4);
    const Vec2 x = u.p + t * (u.q - u.p);
    for (int k = 0; k < 3; ++k)
      if ((s.tris[u.tri].v[k] - x).norm() < 1e-7) return false; // cone-point contact
    return true;
  };
  for (const auto& u : A) {
    for (const auto& v : B) {
      if (u.tri == v.tri && properCross(u, v)) return true;
      for (int e = 0; e < 3; ++e) {
        const Link& l = s.tris[u.tri].link[e];
        if (l.tri != v.tri) continue;
        TriSeg vt{u.tri, l.motion(v.p), l.motion(v.q)};
        if (properCross(u, vt)) return true;
      }
    }
  }
  return false;
}

GeodesicPath constrainedShorten(const Surface& s, const HomotopyWord& w,
                                const GeodesicPath& barrier) {
  ClosedGeodesicResult r = closedGeodesic(s, w);
  for (const auto& m : r.minimizers)
    if (!pathsCrossTransversally(s, m, barrier)) return m;
  throw Error(ErrorKind::Infeasible, "every minimizer crosses the barrier (word forces crossing)");
}

std::vector<DensityRecord> densitySequence(const Surface& s, const HomotopyWord& axis,
                                           const std::vector<HomotopyWord>& family, double windowT) {
  std::vector<DensityRecord> out;
  ClosedGeodesicResult ax = closedGeodesic(s, axis);
  const GeodesicPath& g = ax.minimizers.front();
  Development dg = developPath(s, g);
  {
    const double rotErr = std::abs(normalizeAngle(dg.endMotion.angle() + EIGEN_PI) - EIGEN_PI);
    if (rotErr > 1e-6) throw Error(ErrorKind::Input, "axis word has rotational holonomy");
  }
  const Vec2 c0 = dg.polyline.front();
  const Vec2 chord = dg.polyline.back() - c0;
  const double ulen = chord.norm();
  if (ulen <= s.tol.epsInc) throw Error(ErrorKind::Input, "axis geodesic is degenerate");
  RigidMotion align;
  align.rot = Eigen::Rotation2Dd(-std::atan2(chord.y(), chord.x()));
  align.t = -(align.rot * c0);

  auto power = [&](const RigidMotion& M, int k) {
    RigidMotion P = RigidMotion::identity();
    const RigidMotion step = k > 0 ? M : M.inverse();
    for (int q = 0; q < std::abs(k); ++q) P = P * step;
    return P;
  };

  std::vector<Vec2> target;
  const int axPeriods = (int)std::ceil((windowT + ulen) / ulen) + 1;
  for (int k = -axPeriods; k <= axPeriods; ++k) {
    const RigidMotion M = power(dg.endMotion, k);
    for (const auto& p : dg.polyline) target.push_back(align(M(p)));
  }
  auto distToTarget = [&](const Vec2& p) {
    double best = kInf;
    for (size_t i = 0; i + 1 < target.size(); ++i) {
      const Vec2 ab = target[i + 1] - target[i];
      const double L2 = ab.squaredNorm();
      if (L2 < 1e-18) continue;
      const double t = std::clamp((p - target[i]).dot(ab) / L2, 0.0, 1.0);
      best = std::min(best, (target[i] + t * ab - p).norm());
    }
    return best;
  };

  auto eventFrames = [&](const GeodesicPath& path) {
    std::vector<std::pair<int, RigidMotion>> frames;
    RigidMotion M = RigidMotion::identity();
    for (const auto& ev : path.events) {
      if (ev.kind == PathEvent::Seg) frames.push_back({ev.tri, M});
      else if (ev.kind == PathEvent::Cross)
        M = M * s.tris[ev.crossTri].link[ev.crossEdge].motion;
      else if (ev.kind == PathEvent::Pass)
        for (auto [tri, edge] : ev.pass.chain) M = M * s.tris[tri].link[edge].motion;
    }
    return frames;
  };
  const auto axFrames = eventFrames(g);
  const double step = std::max(1e-6, s.diameterEstimate / 500.0);

  int n = 0;
  for (const auto& wn : family) {
    ++n;
    DensityRecord rec;
    rec.n = n;
    rec.word = wn.str(s);
    try {
      ClosedGeodesicResult cr = closedGeodesic(s, wn);
      const GeodesicPath& cn = cr.minimizers.front();
      rec.length = cr.length;
      Development dn = developPath(s, cn);
      const auto cnFrames = eventFrames(cn);
      double best = kInf;
      const int cnPeriods =
          (int)std::ceil((2 * windowT + 4 * ulen) / std::max(cr.length, 1e-9)) + 1;
      for (int k = -axPeriods; k <= axPeriods; ++k) {
        const RigidMotion Mk = power(dg.endMotion, k);
        for (const auto& [atri, aframe] : axFrames) {
          for (const auto& [ctri, cframe] : cnFrames) {
            if (atri != ctri) continue;
            const RigidMotion G = align * Mk * aframe * cframe.inverse();
            double sup = 0;
            bool any = false;
            for (int kk = -cnPeriods; kk <= cnPeriods; ++kk) {
              const RigidMotion Ck = power(dn.endMotion, kk);
              for (size_t i = 0; i + 1 < dn.polyline.size(); ++i) {
                const Vec2 A = G(Ck(dn.polyline[i]));
                const Vec2 B = G(Ck(dn.polyline[i + 1]));
                const int m = std::max(1, (int)std::ceil((B - A).norm() / step));
                for (int q = 0; q <= m; ++q) {
                  const Vec2 P = A + (double(q) / m) * (B - A);
                  if (P.x() < -windowT || P.x() > windowT) continue;
                  any = true;
                  sup = std::max(sup, distToTarget(P));
                }
              }
            }
            if (any) best = std::min(best, sup);
          }
        }
      }
      if (!std::isfinite(best)) throw Error(ErrorKind::Internal, "no lift of c_n covers the window");
      rec.supDistance = best;
      rec.status = "ok";
    } catch (const Error& e) {
      rec.status = e.what();
    }
    out.push_back(rec);
  }
  return out;
}

}  // namespace conesurf
