#include "conesurf/svg.hpp"

#include <cstdio>
#include <set>
#include <string>

namespace conesurf {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

const char* kPathColors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string renderSvg(const UnfoldingTree& tree, const std::vector<std::vector<Vec2>>& paths) {
  const Surface& s = tree.surface();
  const LiftComplex& cx = tree.complex();
  const Vec2 c = tree.base().pos;
  const double R = tree.radius();
  const double pad = 0.05 * R;
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + fmt(c.x() - R - pad) + " " +
         fmt(-(c.y() + R + pad)) + " " + fmt(2 * (R + pad)) + " " + fmt(2 * (R + pad)) + "\">\n";
  out += "<g stroke-width=\"" + fmt(R / 400.0) + "\">\n";
  // cells
  for (int cell : tree.cells()) {
    const LiftCell& lc = cx.cell(cell);
    const Tri& t = s.tris[lc.tri];
    out += "<polygon points=\"";
    for (int k = 0; k < 3; ++k) {
      const Vec2 p = lc.plane(t.v[k]);
      if (k) out += ' ';
      out += fmt(p.x()) + "," + fmt(-p.y());
    }
    out += "\" fill=\"#f5f2ea\" stroke=\"#b9b2a3\"/>\n";
  }
  // cone-point copies (one mark per lifted vertex, via its first official corner)
  {
    std::set<int> marked;
    for (int cell : tree.cells()) {
      const LiftCell& lc = cx.cell(cell);
      const Tri& t = s.tris[lc.tri];
      for (int k = 0; k < 3; ++k) {
        const int lv = cx.liveVertex(lc.lv[k]);
        if (marked.count(lv)) continue;
        const VertexClass& vc = s.classes[t.vclass[k]];
        if (vc.kind == ConeKind::Regular) continue;
        marked.insert(lv);
        const Vec2 p = lc.plane(t.v[k]);
        const bool small = vc.kind == ConeKind::Small;
        out += "<circle cx=\"" + fmt(p.x()) + "\" cy=\"" + fmt(-p.y()) + "\" r=\"" +
               fmt(small ? R / 90.0 : R / 70.0) + "\" fill=\"" + (small ? "#c0392b" : "#2c3e50") +
               "\"/>\n";
      }
    }
  }
  // disk boundary
  out += "<circle cx=\"" + fmt(c.x()) + "\" cy=\"" + fmt(-c.y()) + "\" r=\"" + fmt(R) +
         "\" fill=\"none\" stroke=\"#666666\" stroke-dasharray=\"" + fmt(R / 50.0) + "\"/>\n";
  // paths
  for (size_t i = 0; i < paths.size(); ++i) {
    if (paths[i].empty()) continue;
    out += "<polyline fill=\"none\" stroke=\"";
    out += kPathColors[i % 6];
    out += "\" stroke-width=\"" + fmt(R / 200.0) + "\" points=\"";
    for (size_t j = 0; j < paths[i].size(); ++j) {
      if (j) out += ' ';
      out += fmt(paths[i][j].x()) + "," + fmt(-paths[i][j].y());
    }
    out += "\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace conesurf
