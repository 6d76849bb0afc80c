// Copyright 2026 The noc3d Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// One SVG per layer: cells with component labels, routers as squares
// (filled when 3D), hatched KOZs, and vertical links as rings tethered to
// their router by the redistribution wire.

#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "noc3d/model.hpp"

namespace noc3d {

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

inline std::string render_layer_svg(const Problem& p, const std::vector<LayerFloorplan>& fps,
                                    const std::vector<VerticalLink>& vlinks, std::size_t layer, double px_per_mm = 20.0) {
  using detail::fmt;
  const auto& fp = fps[layer];
  const double margin = 10.0;
  const double w = fp.width() * px_per_mm + 2 * margin, h = fp.height() * px_per_mm + 2 * margin;
  const Point o = fp.dims.cells() ? fp.corner(0) : Point{};
  // y grows downward in SVG; row 0 is drawn at the bottom
  auto X = [&](double x) { return margin + (x - o.x) * px_per_mm; };
  auto Y = [&](double y) { return h - margin - (y - o.y) * px_per_mm; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(w) + "\" height=\"" + fmt(h) + "\">\n";
  s += "<defs><pattern id=\"koz\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\">"
       "<path d=\"M0,6 L6,0\" stroke=\"#b22\" stroke-width=\"1\"/></pattern></defs>\n";
  s += "<title>layer " + std::to_string(layer) + " (" + detail::escape_xml(p.instance().layers[layer].node) +
       ")</title>\n";
  for (std::size_t c = 0; c < fp.dims.cells(); ++c) {
    const Point k = fp.corner(c);
    const double cw = fp.col_widths[fp.col_of(c)], ch = fp.row_heights[fp.row_of(c)];
    s += "<rect x=\"" + fmt(X(k.x)) + "\" y=\"" + fmt(Y(k.y + ch)) + "\" width=\"" + fmt(cw * px_per_mm) +
         "\" height=\"" + fmt(ch * px_per_mm) + "\" fill=\"" + (fp.occupied(c) ? "#eef3fb" : "#fafafa") +
         "\" stroke=\"#333\"/>\n";
    if (fp.koz_charge[c] > 0.0) {
      const double side = std::sqrt(fp.koz_charge[c]) * px_per_mm;
      s += "<rect x=\"" + fmt(X(k.x + cw) - side) + "\" y=\"" + fmt(Y(k.y + ch)) + "\" width=\"" + fmt(side) +
           "\" height=\"" + fmt(side) + "\" fill=\"url(#koz)\" stroke=\"#b22\"/>\n";
    }
    if (fp.occupied(c)) {
      const Point m = fp.center(c);
      const double r = 0.5 * px_per_mm;
      s += "<rect x=\"" + fmt(X(m.x) - r) + "\" y=\"" + fmt(Y(m.y) - r) + "\" width=\"" + fmt(2 * r) + "\" height=\"" +
           fmt(2 * r) + "\" fill=\"" + (is_3d(fp.router_kind[c]) ? "#246" : "#fff") + "\" stroke=\"#246\"/>\n";
      s += "<text x=\"" + fmt(X(k.x) + 4) + "\" y=\"" + fmt(Y(k.y + ch) + 14) + "\" font-size=\"12\">" +
           detail::escape_xml(p.component(*fp.cell_of[c]).id) + "</text>\n";
    }
  }
  for (const auto& v : vlinks) {
    if (v.boundary != layer && v.boundary + 1 != layer) continue;
    // the link is drawn at the partner router's position, tethered to ours
    const bool lower_side = v.boundary == layer;
    const Point mine = fp.center(lower_side ? v.lower_cell : v.upper_cell);
    const auto& other = fps[lower_side ? layer + 1 : layer - 1];
    const Point there = other.center(lower_side ? v.upper_cell : v.lower_cell);
    s += "<line x1=\"" + fmt(X(mine.x)) + "\" y1=\"" + fmt(Y(mine.y)) + "\" x2=\"" + fmt(X(there.x)) + "\" y2=\"" +
         fmt(Y(there.y)) + "\" stroke=\"#d80\" stroke-width=\"2\"/>\n";
    s += "<circle cx=\"" + fmt(X(there.x)) + "\" cy=\"" + fmt(Y(there.y)) + "\" r=\"" + fmt(0.35 * px_per_mm) +
         "\" fill=\"none\" stroke=\"#d80\" stroke-width=\"2\"><title>" + (lower_side ? "up" : "down") +
         " link, RD " + fmt(v.rd_length) + " mm</title></circle>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace noc3d
