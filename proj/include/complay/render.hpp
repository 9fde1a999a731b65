#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "complay/graph.hpp"
#include "complay/layering.hpp"

namespace complay {

struct RenderOptions {
  double layer_spacing = 70.0;
  double vertex_spacing = 52.0;
  double vertex_radius = 13.0;
  int sweeps = 4;           // alternating down/up barycenter passes
  bool show_dummies = true;

  void check() const {
    if (!(layer_spacing > 0.0) || !(vertex_spacing > 0.0) || !(vertex_radius > 0.0) || sweeps < 0)
      throw Error("RenderOptions: dimensions must be positive");
  }
};

namespace detail {

struct RenderNode {
  bool dummy = false;
  int vertex = -1;  // real vertex id
  int arc = -1;     // owning arc slot for dummies
  int layer = 0;
  int slot = 0;     // position within the layer
  double x = 0.0;
};

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s(buf);
  // trim trailing zeros but keep one decimal for stable, compact output
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace detail

// Layered drawing: layer 1 on top, one horizontal row per layer. Every arc is
// a polyline routed through one dummy point per traversed layer; reversed
// arcs are drawn bold and dashed. In-layer order comes from a fixed number of
// alternating barycenter sweeps, so the output is deterministic.
inline std::string render_svg(const DiGraph& g, const Layering& l,
                              const RenderOptions& opts = {}) {
  opts.check();
  require_valid(g, l);
  const int h = l.height;
  const int n = g.num_vertices();

  using detail::RenderNode;
  std::vector<RenderNode> nodes;
  std::vector<std::vector<int>> chain(static_cast<size_t>(g.num_arcs()));  // node ids per arc, low..high
  std::vector<std::vector<int>> layer_nodes(static_cast<size_t>(h) + 1);

  for (int v = 0; v < n; ++v) {
    RenderNode nd;
    nd.vertex = v;
    nd.layer = l.layer(v);
    layer_nodes[static_cast<size_t>(nd.layer)].push_back(static_cast<int>(nodes.size()));
    nodes.push_back(nd);
  }
  for (int a = 0; a < g.num_arcs(); ++a) {
    int lo = std::min(l.layer(g.arc(a).tail), l.layer(g.arc(a).head));
    int hi = std::max(l.layer(g.arc(a).tail), l.layer(g.arc(a).head));
    for (int k = lo + 1; k < hi; ++k) {
      RenderNode nd;
      nd.dummy = true;
      nd.arc = a;
      nd.layer = k;
      chain[static_cast<size_t>(a)].push_back(static_cast<int>(nodes.size()));
      layer_nodes[static_cast<size_t>(k)].push_back(static_cast<int>(nodes.size()));
      nodes.push_back(nd);
    }
  }

  // adjacency between consecutive layers, following each arc's chain
  std::vector<std::vector<int>> above(nodes.size());  // neighbours one layer up
  std::vector<std::vector<int>> below(nodes.size());  // neighbours one layer down
  for (int a = 0; a < g.num_arcs(); ++a) {
    int t = g.arc(a).tail, hd = g.arc(a).head;
    int low_v = l.layer(t) <= l.layer(hd) ? t : hd;
    int high_v = l.layer(t) <= l.layer(hd) ? hd : t;
    std::vector<int> path;
    path.push_back(low_v);  // real nodes share ids with vertices
    for (int id : chain[static_cast<size_t>(a)]) path.push_back(id);
    path.push_back(high_v);
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      above[static_cast<size_t>(path[i + 1])].push_back(path[i]);
      below[static_cast<size_t>(path[i])].push_back(path[i + 1]);
    }
  }

  // initial slots: vertex index order, dummies after (arc order)
  for (int k = 1; k <= h; ++k) {
    auto& row = layer_nodes[static_cast<size_t>(k)];
    for (size_t i = 0; i < row.size(); ++i) nodes[static_cast<size_t>(row[i])].slot = static_cast<int>(i);
  }

  auto sweep = [&](bool downward) {
    int from = downward ? 2 : h - 1;
    int to = downward ? h : 1;
    int step = downward ? 1 : -1;
    for (int k = from; downward ? k <= to : k >= to; k += step) {
      auto& row = layer_nodes[static_cast<size_t>(k)];
      std::vector<std::pair<double, int>> keyed;
      keyed.reserve(row.size());
      for (int id : row) {
        const auto& nb = downward ? above[static_cast<size_t>(id)] : below[static_cast<size_t>(id)];
        double key;
        if (nb.empty()) {
          key = static_cast<double>(nodes[static_cast<size_t>(id)].slot);
        } else {
          double s = 0.0;
          for (int u : nb) s += static_cast<double>(nodes[static_cast<size_t>(u)].slot);
          key = s / static_cast<double>(nb.size());
        }
        keyed.emplace_back(key, id);
      }
      std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return nodes[static_cast<size_t>(a.second)].slot < nodes[static_cast<size_t>(b.second)].slot;
      });
      for (size_t i = 0; i < keyed.size(); ++i) {
        row[i] = keyed[i].second;
        nodes[static_cast<size_t>(keyed[i].second)].slot = static_cast<int>(i);
      }
    }
  };
  for (int s = 0; s < opts.sweeps; ++s) sweep(s % 2 == 0);

  // coordinates: rows centred on the widest layer
  size_t max_row = 1;
  for (int k = 1; k <= h; ++k)
    max_row = std::max(max_row, layer_nodes[static_cast<size_t>(k)].size());
  const double margin = opts.vertex_spacing;
  const double width = margin * 2 + static_cast<double>(max_row - 1) * opts.vertex_spacing;
  const double height = margin * 2 + static_cast<double>(h - 1) * opts.layer_spacing;
  auto y_of = [&](int layer) { return margin + static_cast<double>(layer - 1) * opts.layer_spacing; };
  for (int k = 1; k <= h; ++k) {
    auto& row = layer_nodes[static_cast<size_t>(k)];
    double offset = (static_cast<double>(max_row) - static_cast<double>(row.size())) *
                    opts.vertex_spacing / 2.0;
    for (size_t i = 0; i < row.size(); ++i)
      nodes[static_cast<size_t>(row[i])].x = margin + offset + static_cast<double>(i) * opts.vertex_spacing;
  }

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::svg_num(width)
      << "\" height=\"" << detail::svg_num(height) << "\" viewBox=\"0 0 " << detail::svg_num(width)
      << ' ' << detail::svg_num(height) << "\">\n";

  // arcs first so vertices overlay them
  for (int a = 0; a < g.num_arcs(); ++a) {
    int t = g.arc(a).tail, hd = g.arc(a).head;
    bool reversed = l.layer(t) > l.layer(hd);
    std::vector<int> path;
    int low_v = l.layer(t) <= l.layer(hd) ? t : hd;
    int high_v = l.layer(t) <= l.layer(hd) ? hd : t;
    path.push_back(low_v);
    for (int id : chain[static_cast<size_t>(a)]) path.push_back(id);
    path.push_back(high_v);
    svg << "  <polyline class=\"" << (reversed ? "arc reversed" : "arc") << "\" points=\"";
    for (size_t i = 0; i < path.size(); ++i) {
      const auto& nd = nodes[static_cast<size_t>(path[i])];
      if (i) svg << ' ';
      svg << detail::svg_num(nd.x) << ',' << detail::svg_num(y_of(nd.layer));
    }
    svg << "\" fill=\"none\" stroke=\"black\" stroke-width=\"" << (reversed ? "2.6" : "1.2")
        << '"';
    if (reversed) svg << " stroke-dasharray=\"7,4\"";
    svg << "/>\n";
  }

  if (opts.show_dummies) {
    for (const auto& nd : nodes)
      if (nd.dummy)
        svg << "  <circle class=\"dummy\" cx=\"" << detail::svg_num(nd.x) << "\" cy=\""
            << detail::svg_num(y_of(nd.layer)) << "\" r=\"" << detail::svg_num(opts.vertex_radius / 4.0)
            << "\" fill=\"#888\"/>\n";
  }

  for (const auto& nd : nodes) {
    if (nd.dummy) continue;
    double y = y_of(nd.layer);
    svg << "  <circle class=\"vertex\" cx=\"" << detail::svg_num(nd.x) << "\" cy=\""
        << detail::svg_num(y) << "\" r=\"" << detail::svg_num(opts.vertex_radius)
        << "\" fill=\"white\" stroke=\"black\" stroke-width=\"1.4\"/>\n";
    const std::string& lbl = g.label(nd.vertex);
    svg << "  <text x=\"" << detail::svg_num(nd.x) << "\" y=\"" << detail::svg_num(y + 4.0)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << (lbl.empty() ? std::to_string(nd.vertex) : lbl) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace complay
