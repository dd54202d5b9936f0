#include "conesurf/unfolding.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include <json.hpp>

namespace conesurf {

using nlohmann::ordered_json;

namespace {

double pointTriangleDistance(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
  if (cross2(b - a, p - a) >= 0 && cross2(c - b, p - b) >= 0 && cross2(a - c, p - c) >= 0) return 0;
  auto segDist = [&](const Vec2& u, const Vec2& v) {
    const Vec2 uv = v - u;
    const double t = std::clamp((p - u).dot(uv) / uv.squaredNorm(), 0.0, 1.0);
    return (u + t * uv - p).norm();
  };
  return std::min({segDist(a, b), segDist(b, c), segDist(c, a)});
}

}  // namespace

UnfoldingTree::UnfoldingTree(const Surface& s, const SurfacePoint& base, double radius)
    : base_(base), radius_(radius) {
  if (radius <= 0) throw Error(ErrorKind::Input, "unfolding radius must be positive");
  if (base.tri < 0) throw Error(ErrorKind::Input, "unfolding base must be a chart point");
  for (int k = 0; k < 3; ++k)
    if ((s.tris[base.tri].v[k] - base.pos).norm() <= s.tol.epsInc)
      throw Error(ErrorKind::Input, "unfolding base lies on a cone point");
  complex_ = std::make_shared<LiftComplex>(s, base.tri);

  // A cell joins the tree when some crossing chain from the root reaches it
  // with every crossed edge developing inside the disk. Restricting chains
  // this way keeps the tree finite: deck transformations with identity
  // planar part would otherwise re-place infinitely many lifts over the disk.
  auto meetsDisk = [&](int cell) {
    const LiftCell& c = complex_->cell(cell);
    const Tri& t = s.tris[c.tri];
    return pointTriangleDistance(base.pos, c.plane(t.v[0]), c.plane(t.v[1]), c.plane(t.v[2])) < radius;
  };
  auto edgeDist = [&](int cell, int e) {
    const LiftCell& c = complex_->cell(cell);
    const Tri& t = s.tris[c.tri];
    const Vec2 a = c.plane(t.v[e]), b = c.plane(t.v[(e + 1) % 3]);
    const Vec2 ab = b - a;
    const double tt = std::clamp((base.pos - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    return (a + tt * ab - base.pos).norm();
  };

  std::map<int, double> key; // max crossed-edge distance along the best chain
  using QE = std::pair<double, int>;
  std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
  key[0] = 0;
  pq.push({0, 0});
  std::set<int> done;
  while (!pq.empty()) {
    const auto [k, c] = pq.top();
    pq.pop();
    if (done.count(c)) continue;
    done.insert(c);
    if (meetsDisk(c)) {
      official_.push_back(c);
      // complete vertex fans so links across the disk exist
      for (int kk = 0; kk < 3; ++kk) complex_->completeFan(complex_->cell(c).lv[kk]);
    }
    for (int e = 0; e < 3; ++e) {
      const double de = edgeDist(c, e);
      const double nk = std::max(k, de);
      if (nk >= radius) continue;
      const int n = complex_->ensureNeighbor(c, e);
      if (n < 0) continue;
      auto it = key.find(n);
      if (it == key.end() || nk < it->second - 1e-15) {
        key[n] = nk;
        pq.push({nk, n});
      }
    }
  }
  // resolve folds and dedup
  for (auto& c : official_) c = complex_->liveCell(c);
  std::sort(official_.begin(), official_.end());
  official_.erase(std::unique(official_.begin(), official_.end()), official_.end());
  computeWords();
}

// Shortlex-minimal gluing words over the explored link graph; canonical, so
// trees of different radii agree on shared cells.
void UnfoldingTree::computeWords() {
  struct Key {
    std::vector<int> w;
    bool operator<(const Key& o) const {
      if (w.size() != o.w.size()) return w.size() < o.w.size();
      return w < o.w;
    }
  };
  std::map<int, Key> best;
  auto cmp = [](const std::pair<Key, int>& a, const std::pair<Key, int>& b) {
    return b.first < a.first || (!(a.first < b.first) && a.second > b.second);
  };
  std::priority_queue<std::pair<Key, int>, std::vector<std::pair<Key, int>>, decltype(cmp)> pq(cmp);
  const int r = complex_->root();
  best[r] = {};
  pq.push({{}, r});
  while (!pq.empty()) {
    auto [k, c] = pq.top();
    pq.pop();
    auto it = best.find(c);
    if (it != best.end() && it->second < k) continue;
    for (int e = 0; e < 3; ++e) {
      const int n = complex_->neighbor(c, e);
      if (n < 0) continue;
      const int letter = surface().tris[complex_->cell(c).tri].link[e].letter;
      Key nk = k;
      if (letter != 0) {
        if (!nk.w.empty() && nk.w.back() == -letter) nk.w.pop_back();
        else nk.w.push_back(letter);
      }
      auto jt = best.find(n);
      if (jt == best.end() || nk < jt->second) {
        best[n] = nk;
        pq.push({nk, n});
      }
    }
  }
  for (int c : official_) {
    auto it = best.find(c);
    words_[c] = it != best.end() ? it->second.w : complex_->cellWord(c).letters;
  }
}

HomotopyWord UnfoldingTree::word(int cell) const {
  HomotopyWord w;
  auto it = words_.find(complex_->liveCell(cell));
  if (it != words_.end()) w.letters = it->second;
  else w = complex_->cellWord(cell);
  w.reduce();
  return w;
}

bool UnfoldingTree::isOfficial(int cell) const {
  return std::binary_search(official_.begin(), official_.end(), cell);
}

UnfoldingTree unfoldDisk(const Surface& s, const SurfacePoint& base, double R) {
  return UnfoldingTree(s, base, R);
}

std::string UnfoldingTree::dumpJson() const {
  const Surface& s = surface();
  ordered_json j;
  j["base"] = {{"tri", base_.tri}, {"pos", {base_.pos.x(), base_.pos.y()}}};
  j["radius"] = radius_;
  j["cells"] = ordered_json::array();
  for (int c : official_) {
    const LiftCell& lc = complex_->cell(c);
    ordered_json jc;
    jc["id"] = c;
    jc["source"] = lc.tri;
    jc["word"] = word(c).str(s);
    jc["motion"] = {{"angle", lc.plane.angle()}, {"t", {lc.plane.t.x(), lc.plane.t.y()}}};
    j["cells"].push_back(jc);
  }
  return j.dump(2);
}

Development developPath(const Surface& s, const GeodesicPath& path) {
  Development d;
  RigidMotion M = RigidMotion::identity();
  bool first = true;
  for (const auto& ev : path.events) {
    switch (ev.kind) {
      case PathEvent::Seg: {
        const Vec2 a = M(ev.p0), b = M(ev.p1);
        if (first || d.polyline.empty() || (d.polyline.back() - a).norm() > 1e-7)
          d.polyline.push_back(a);
        d.polyline.push_back(b);
        first = false;
        break;
      }
      case PathEvent::Cross: {
        const Link& l = s.tris[ev.crossTri].link[ev.crossEdge];
        M = M * l.motion;
        break;
      }
      case PathEvent::Pass: {
        for (const auto& [tri, edge] : ev.pass.chain) {
          const Link& l = s.tris[tri].link[edge];
          M = M * l.motion;
        }
        break;
      }
      default:
        break;
    }
  }
  d.endMotion = M;
  return d;
}

Development developPathInTree(const UnfoldingTree& tree, const GeodesicPath& path) {
  // Walk cell ids alongside the development to detect escapes.
  const Surface& s = tree.surface();
  const LiftComplex& cx = tree.complex();
  int cell = 0;
  if (!path.events.empty() && path.events.front().kind == PathEvent::Seg &&
      path.events.front().tri != cx.cell(0).tri)
    throw Error(ErrorKind::Input, "path does not start in the root cell");
  for (const auto& ev : path.events) {
    if (ev.kind == PathEvent::Cross) {
      const int n = cx.neighbor(cell, ev.crossEdge);
      if (n < 0)
        throw Error(ErrorKind::Unreachable,
                    "path escapes the developed region at cell " + std::to_string(cell) + " edge " +
                        std::to_string(ev.crossEdge));
      cell = n;
    } else if (ev.kind == PathEvent::Pass) {
      for (const auto& [tri, edge] : ev.pass.chain) {
        (void)tri;
        const int n = cx.neighbor(cell, edge);
        if (n < 0)
          throw Error(ErrorKind::Unreachable,
                      "path escapes the developed region at cell " + std::to_string(cell) + " edge " +
                          std::to_string(edge));
        cell = n;
      }
    }
  }
  return developPath(s, path);
}

}  // namespace conesurf
