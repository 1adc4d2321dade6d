#pragma once

#include "torex/collections.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

namespace torex {

struct FigureOptions {
  long width = 800;
  long height = 640;
  long margin = 40;
};

namespace svgdetail {

// Fixed-precision rendering of exact coordinates: round half up at 1e-6,
// print with all six fractional digits. Deterministic by construction.
inline std::string svg_num(const Rat& x) {
  Int scaled = rat_floor(x * 1000000 + Rat(1, 2));
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  Int whole = scaled / 1000000, frac = scaled % 1000000;
  std::string f = frac.str();
  f.insert(f.begin(), 6 - f.size(), '0');
  return (negative && (whole != 0 || frac != 0) ? "-" : "") + whole.str() + "." + f;
}

struct WorldMap {
  Rat min_x, max_x, min_y, max_y;
  long width, height, margin;

  Rat px(const Rat& x) const {
    return Rat(margin) + (x - min_x) / (max_x - min_x) * Rat(width - 2 * margin);
  }
  Rat py(const Rat& y) const {  // flip: world up is screen up
    return Rat(height - margin) - (y - min_y) / (max_y - min_y) * Rat(height - 2 * margin);
  }
  std::string point(const RatVec& p) const { return svg_num(px(p[0])) + "," + svg_num(py(p[1])); }
};

inline void expand(Rat& lo, Rat& hi, const Rat& v) {
  if (v < lo) lo = v;
  if (v > hi) hi = v;
}

// Clockwise angular order around the origin for polygon point lists.
inline std::vector<RatVec> cyclic_order(std::vector<RatVec> pts) {
  auto half = [](const RatVec& v) {
    if (v[1] > 0) return 0;
    if (v[1] < 0) return 1;
    return v[0] > 0 ? 0 : 1;
  };
  std::sort(pts.begin(), pts.end(), [&](const RatVec& a, const RatVec& b) {
    int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    Rat c = a[0] * b[1] - a[1] * b[0];
    if (c != 0) return c > 0;
    return a < b;
  });
  std::reverse(pts.begin(), pts.end());
  return pts;
}

inline std::string polygon_tag(const std::vector<RatVec>& pts, const WorldMap& map,
                               const std::string& cls, const std::string& style) {
  std::string out = "<polygon class=\"" + cls + "\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += " ";
    out += map.point(pts[i]);
  }
  return out + "\" style=\"" + style + "\"/>\n";
}

// Cone wedge as a filled path. For a cone spanning less than a half turn,
// the extreme directions fan out from the apex; a cone covering every
// direction degenerates to the full viewport.
inline std::string wedge_tag(const RatVec& apex, const std::vector<RatVec>& dirs,
                             const WorldMap& map, const std::string& style) {
  std::vector<RatVec> usable;
  for (const auto& d : dirs)
    if (!is_zero_vec(d)) usable.push_back(d);
  // extreme pair: d1 with every direction weakly counterclockwise of it,
  // d2 with every direction weakly clockwise
  const RatVec* d1 = nullptr;
  const RatVec* d2 = nullptr;
  for (const auto& cand : usable) {
    bool all_ccw = true, all_cw = true;
    for (const auto& other : usable) {
      Rat c = cand[0] * other[1] - cand[1] * other[0];
      if (c < 0) all_ccw = false;
      if (c > 0) all_cw = false;
      if (c == 0 && dot(cand, other) < 0) { all_ccw = false; all_cw = false; }
    }
    if (all_ccw && !d1) d1 = &cand;
    if (all_cw && !d2) d2 = &cand;
  }
  if (!d1 || !d2) {
    // full plane: cover the viewport
    std::ostringstream out;
    out << "<path class=\"wedge\" d=\"M0,0 H" << map.width << " V" << map.height
        << " H0 Z\" style=\"" << style << "\"/>\n";
    return out.str();
  }
  Rat reach = Rat(8) * (map.max_x - map.min_x + map.max_y - map.min_y);
  auto ray_end = [&](const RatVec& d) {
    Rat norm = (d[0] < 0 ? -d[0] : d[0]) + (d[1] < 0 ? -d[1] : d[1]);
    return RatVec{apex[0] + reach * d[0] / norm, apex[1] + reach * d[1] / norm};
  };
  RatVec p1 = ray_end(*d1), p2 = ray_end(*d2);
  RatVec mid{p1[0] + p2[0] - apex[0], p1[1] + p2[1] - apex[1]};
  std::string out = "<path class=\"wedge\" d=\"M" + map.point(apex) + " L" + map.point(p1) +
                    " L" + map.point(mid) + " L" + map.point(p2) + " Z\" style=\"" + style +
                    "\"/>\n";
  return out;
}

}  // namespace svgdetail

// Static figure of the quotient plane: for Picard rank two the window with
// its three forbidden wedges, for dimension-two stacks with a
// two-dimensional hat quotient the polygons Q and P-hat with the wedge
// images. Classes appear as dots, the collection highlighted.
inline std::string emit_figure(const PicardGroup& pic, const ExceptionalCollection& col,
                               const FigureOptions& opt = {}) {
  if (opt.width <= 2 * opt.margin || opt.height <= 2 * opt.margin)
    throw TorexError("figure viewport is too small");
  std::size_t k = pic.rank();
  bool rank2_plane = (k == 2);
  bool hat_plane = (!rank2_plane && pic.fan().d == 2 && k == 3);
  if (!rank2_plane && !hat_plane)
    throw UnsupportedDimension("the quotient plane is not two-dimensional");

  CohomologyEngine engine(pic);
  auto cones = engine.forbidden_cones();

  std::vector<std::vector<RatVec>> polygons;       // outline polygons
  std::vector<std::pair<RatVec, std::vector<RatVec>>> wedges;  // apex + dirs
  std::vector<RatVec> lattice_dots, collection_dots;

  if (rank2_plane) {
    // window parallelogram: vertices of the 4-facet polytope
    std::vector<RatVec> verts;
    const auto& qs = col.window.polytope.ineqs;
    for (std::size_t i = 0; i < qs.size(); ++i)
      for (std::size_t j = i + 1; j < qs.size(); ++j) {
        RatMatrix m(2, 2);
        m(0, 0) = qs[i].a[0];
        m(0, 1) = qs[i].a[1];
        m(1, 0) = qs[j].a[0];
        m(1, 1) = qs[j].a[1];
        if (rational_rank(m) != 2) continue;
        auto x = solve_rational(m, {qs[i].c, qs[j].c});
        if (x && contains(col.window.polytope, *x)) verts.push_back(*x);
      }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    polygons.push_back(svgdetail::cyclic_order(verts));
    for (const auto& c : cones) wedges.push_back({c.apex, c.generators});
    HPolyhedron around = scale_about(col.window.polytope, Rat(3), col.window.center);
    for (const IntVec& x : lattice_points(shift(around, col.shift)))
      lattice_dots.push_back(to_rat(x));
    for (const auto& c : col.classes) collection_dots.push_back(pic.real_of(c));
  } else {
    DelPezzoGeometry g = del_pezzo_geometry(pic);
    polygons.push_back(svgdetail::cyclic_order(zonotope_vertices(g.q)));
    polygons.push_back(svgdetail::cyclic_order(zonotope_vertices(g.phat)));
    for (const auto& c : cones) {
      RatVec apex = g.hat.proj.apply(c.apex);
      std::vector<RatVec> dirs;
      for (const auto& gen : c.generators) dirs.push_back(g.hat.proj.apply(gen));
      wedges.push_back({apex, dirs});
    }
    HPolyhedron around = scale_about(col.window.polytope, Rat(3), col.window.center);
    for (const IntVec& x : lattice_points(shift(around, col.shift)))
      lattice_dots.push_back(g.hat.proj.apply(to_rat(x)));
    for (const auto& c : col.classes)
      collection_dots.push_back(hat_of(g.hat, pic, c));
  }

  // world box from the outline polygons and dots
  Rat min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  auto take = [&](const RatVec& p) {
    svgdetail::expand(min_x, max_x, p[0]);
    svgdetail::expand(min_y, max_y, p[1]);
  };
  for (const auto& poly : polygons)
    for (const auto& p : poly) take(p);
  for (const auto& p : lattice_dots) take(p);
  for (const auto& p : collection_dots) take(p);
  Rat pad_x = (max_x - min_x) / 10 + Rat(1, 10);
  Rat pad_y = (max_y - min_y) / 10 + Rat(1, 10);
  min_x -= pad_x;
  max_x += pad_x;
  min_y -= pad_y;
  max_y += pad_y;
  svgdetail::WorldMap map{min_x, max_x, min_y, max_y, opt.width, opt.height, opt.margin};

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << opt.width
      << "\" height=\"" << opt.height << "\" viewBox=\"0 0 " << opt.width << " "
      << opt.height << "\">\n"
      << "<defs><clipPath id=\"viewport\"><rect x=\"0\" y=\"0\" width=\"" << opt.width
      << "\" height=\"" << opt.height << "\"/></clipPath></defs>\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << opt.width << "\" height=\"" << opt.height
      << "\" fill=\"#ffffff\"/>\n";
  svg << "<g clip-path=\"url(#viewport)\">\n";
  for (const auto& [apex, dirs] : wedges)
    svg << svgdetail::wedge_tag(apex, dirs, map, "fill:#d97706;fill-opacity:0.07;stroke:none");
  svg << "</g>\n";
  const char* polygon_styles[2] = {"fill:none;stroke:#1d4ed8;stroke-width:2",
                                   "fill:none;stroke:#047857;stroke-width:2"};
  for (std::size_t i = 0; i < polygons.size(); ++i)
    svg << svgdetail::polygon_tag(polygons[i], map, i == 0 ? "q" : "phat", polygon_styles[i % 2]);
  svg << "<g class=\"lattice\">\n";
  for (const auto& p : lattice_dots)
    svg << "<circle class=\"lattice-dot\" cx=\"" << svgdetail::svg_num(map.px(p[0]))
        << "\" cy=\"" << svgdetail::svg_num(map.py(p[1]))
        << "\" r=\"3\" fill=\"#9ca3af\"/>\n";
  svg << "</g>\n<g class=\"collection\">\n";
  for (const auto& p : collection_dots)
    svg << "<circle class=\"collection-dot\" cx=\"" << svgdetail::svg_num(map.px(p[0]))
        << "\" cy=\"" << svgdetail::svg_num(map.py(p[1]))
        << "\" r=\"6\" fill=\"#dc2626\"/>\n";
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace torex
