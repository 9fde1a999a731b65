#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "complay/graph.hpp"

namespace complay {

// Layer assignment: layer_of[v] in [1, height] for every vertex. height is
// the layering's bound H, not necessarily the largest layer in use.
struct Layering {
  int height = 1;
  std::vector<int> layer_of;

  int layer(int v) const { return layer_of[static_cast<size_t>(v)]; }
  friend bool operator==(const Layering&, const Layering&) = default;
};

struct LayerViolation {
  enum class Kind { SizeMismatch, LayerOutOfRange, AdjacentSameLayer };
  Kind kind;
  int index;  // vertex id for range violations, arc slot for same-layer
  std::string what;
};

// Empty result means the layering is feasible: all layers in [1, H] and no
// arc has both ends on one layer.
inline std::vector<LayerViolation> validate(const DiGraph& g, const Layering& l) {
  std::vector<LayerViolation> out;
  if (static_cast<int>(l.layer_of.size()) != g.num_vertices()) {
    out.push_back({LayerViolation::Kind::SizeMismatch, -1,
                   "layering covers " + std::to_string(l.layer_of.size()) + " of " +
                       std::to_string(g.num_vertices()) + " vertices"});
    return out;
  }
  for (int v = 0; v < g.num_vertices(); ++v) {
    int k = l.layer(v);
    if (k < 1 || k > l.height)
      out.push_back({LayerViolation::Kind::LayerOutOfRange, v,
                     "vertex " + std::to_string(v) + " on layer " + std::to_string(k) +
                         " outside [1, " + std::to_string(l.height) + "]"});
  }
  for (int i = 0; i < g.num_arcs(); ++i) {
    const Arc& a = g.arc(i);
    if (l.layer(a.tail) == l.layer(a.head))
      out.push_back({LayerViolation::Kind::AdjacentSameLayer, i,
                     "arc (" + std::to_string(a.tail) + "," + std::to_string(a.head) +
                         ") has both ends on layer " + std::to_string(l.layer(a.tail))});
  }
  return out;
}

inline bool is_valid(const DiGraph& g, const Layering& l) { return validate(g, l).empty(); }

inline void require_valid(const DiGraph& g, const Layering& l) {
  auto v = validate(g, l);
  if (!v.empty()) throw Error("invalid layering: " + v.front().what);
}

struct LayerWidth {
  double real_width = 0.0;     // sum of vertex widths on the layer
  long long dummy_count = 0;   // arcs strictly traversing the layer
};

// Width contribution of a single layer: vertices assigned to it plus one unit
// per arc whose endpoints lie strictly on both sides.
inline LayerWidth layer_width(const DiGraph& g, const Layering& l, int k) {
  require_valid(g, l);
  if (k < 1 || k > l.height) throw Error("layer index out of range");
  LayerWidth w;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (l.layer(v) == k) w.real_width += g.vertex_width(v);
  for (const Arc& a : g.arcs()) {
    int lo = std::min(l.layer(a.tail), l.layer(a.head));
    int hi = std::max(l.layer(a.tail), l.layer(a.head));
    if (lo < k && k < hi) ++w.dummy_count;
  }
  return w;
}

struct LayeringMetrics {
  int height_used = 0;          // largest occupied layer
  double width = 0.0;           // W: max over layers of real width + dummies
  double real_width = 0.0;      // W_r: max over layers of real width only
  long long total_length = 0;   // sum of |l(u) - l(v)| over arcs
  long long reversed = 0;       // arcs with l(u) > l(v)
  long long dummy_count = 0;    // sum over layers of traversing arcs
  double est_aspect_ratio = 0.0;  // W / H (H = layering bound, not height_used)
};

inline LayeringMetrics metrics(const DiGraph& g, const Layering& l) {
  require_valid(g, l);
  const int h = l.height;
  LayeringMetrics out;
  std::vector<double> real(static_cast<size_t>(h) + 2, 0.0);
  std::vector<long long> traverse_diff(static_cast<size_t>(h) + 2, 0);
  for (int v = 0; v < g.num_vertices(); ++v) {
    real[static_cast<size_t>(l.layer(v))] += g.vertex_width(v);
    out.height_used = std::max(out.height_used, l.layer(v));
  }
  for (const Arc& a : g.arcs()) {
    int lu = l.layer(a.tail), lv = l.layer(a.head);
    out.total_length += std::abs(lu - lv);
    if (lu > lv) ++out.reversed;
    int lo = std::min(lu, lv), hi = std::max(lu, lv);
    if (hi - lo > 1) {
      ++traverse_diff[static_cast<size_t>(lo) + 1];
      --traverse_diff[static_cast<size_t>(hi)];
    }
  }
  long long traversing = 0;
  for (int k = 1; k <= h; ++k) {
    traversing += traverse_diff[static_cast<size_t>(k)];
    out.dummy_count += traversing;
    out.width = std::max(out.width, real[static_cast<size_t>(k)] + static_cast<double>(traversing));
    out.real_width = std::max(out.real_width, real[static_cast<size_t>(k)]);
  }
  out.est_aspect_ratio = out.width / static_cast<double>(h);
  return out;
}

// Signed total length: sum of l(head) - l(tail) over arcs. Forward arcs
// contribute their length, reversed arcs the negative of theirs; telescopes
// to zero around directed cycles.
inline long long signed_length(const DiGraph& g, const Layering& l) {
  long long s = 0;
  for (const Arc& a : g.arcs()) s += l.layer(a.head) - l.layer(a.tail);
  return s;
}

}  // namespace complay
