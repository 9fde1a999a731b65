#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "complay/graph.hpp"

namespace complay {

// Default drawing height: smallest integer h with h >= 1.6 * sqrt(n),
// decided in integer arithmetic (25 h^2 >= 64 n) so boundary cases like
// n = 25 -> 8 never suffer floating-point round-off. Clamped to >= 2 for
// n >= 2 since any graph with an arc needs two layers.
inline int default_height(int n) {
  if (n < 1) throw Error("default_height: n must be positive");
  int h = static_cast<int>(std::ceil(1.6 * std::sqrt(static_cast<double>(n))));
  h = std::max(h, 1);
  while (25LL * h * h < 64LL * n) ++h;
  while (h > 1 && 25LL * (h - 1) * (h - 1) >= 64LL * n) --h;
  if (n >= 2) h = std::max(h, 2);
  return h;
}

namespace detail {

// Underlying undirected simple graph: orientation dropped, parallel arcs
// collapsed. Adjacency lists are sorted and deduplicated.
inline std::vector<std::vector<int>> simple_adjacency(const DiGraph& g) {
  std::vector<std::vector<int>> adj(static_cast<size_t>(g.num_vertices()));
  for (const Arc& a : g.arcs()) {
    adj[static_cast<size_t>(a.tail)].push_back(a.head);
    adj[static_cast<size_t>(a.head)].push_back(a.tail);
  }
  for (auto& nb : adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return adj;
}

inline long long simple_edge_count(const std::vector<std::vector<int>>& adj) {
  long long twice = 0;
  for (const auto& nb : adj) twice += static_cast<long long>(nb.size());
  return twice / 2;
}

}  // namespace detail

// Coloring upper bound on the chromatic number: max simple degree + 1.
inline int degree_bound(const DiGraph& g) {
  auto adj = detail::simple_adjacency(g);
  size_t max_deg = 0;
  for (const auto& nb : adj) max_deg = std::max(max_deg, nb.size());
  return static_cast<int>(max_deg) + 1;
}

struct SpectralBound {
  double lambda = 0.0;  // largest adjacency eigenvalue estimate
  int bound = 1;        // chromatic upper bound derived from it
};

// Largest adjacency eigenvalue of the underlying simple graph, estimated per
// connected component by power iteration and maximized. The iteration runs on
// A + (deg_max+1) I so the dominant eigenvalue stays simple on bipartite
// components; reported Rayleigh quotients are of A itself and increase
// monotonically from 2m/n. Components without edges contribute 0.
//
// The returned bound is the smallest integer >= 1 + lambda - tol. Because the
// chromatic number is integral and at most floor(1 + lambda*), this stays a
// valid upper bound as long as the estimate is within tol of lambda*.
inline SpectralBound spectral_bound(const DiGraph& g, double tol = 1e-9, int max_iters = -1) {
  const int n = g.num_vertices();
  if (n < 1) throw Error("spectral_bound: empty graph");
  if (max_iters < 0) max_iters = 10 * n + 1000;
  auto adj = detail::simple_adjacency(g);

  std::vector<int> comp(static_cast<size_t>(n), -1);
  int num_comps = 0;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (comp[static_cast<size_t>(s)] >= 0) continue;
    int c = num_comps++;
    stack.assign(1, s);
    comp[static_cast<size_t>(s)] = c;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[static_cast<size_t>(v)])
        if (comp[static_cast<size_t>(w)] < 0) {
          comp[static_cast<size_t>(w)] = c;
          stack.push_back(w);
        }
    }
  }

  double best = 0.0;
  std::vector<int> members;
  for (int c = 0; c < num_comps; ++c) {
    members.clear();
    for (int v = 0; v < n; ++v)
      if (comp[static_cast<size_t>(v)] == c) members.push_back(v);
    bool has_edge = false;
    size_t comp_max_deg = 0;
    for (int v : members) {
      has_edge = has_edge || !adj[static_cast<size_t>(v)].empty();
      comp_max_deg = std::max(comp_max_deg, adj[static_cast<size_t>(v)].size());
    }
    if (!has_edge) continue;

    const size_t sz = members.size();
    std::vector<int> local(static_cast<size_t>(n), -1);
    for (size_t i = 0; i < sz; ++i) local[static_cast<size_t>(members[i])] = static_cast<int>(i);
    const double shift = static_cast<double>(comp_max_deg) + 1.0;

    std::vector<double> x(sz, 1.0), ax(sz, 0.0);
    auto iterate = [&](bool perturbed) {
      if (perturbed)
        for (size_t i = 0; i < sz; ++i) x[i] = 1.0 + 0.01 * static_cast<double>(i % 7);
      double prev = -1.0;
      for (int it = 0; it < max_iters; ++it) {
        double norm2 = 0.0;
        for (double v : x) norm2 += v * v;
        if (norm2 == 0.0) return 0.0;  // stalled
        double inv = 1.0 / std::sqrt(norm2);
        for (double& v : x) v *= inv;
        double rayleigh = 0.0;
        for (size_t i = 0; i < sz; ++i) {
          double s = 0.0;
          for (int w : adj[static_cast<size_t>(members[i])])
            s += x[static_cast<size_t>(local[static_cast<size_t>(w)])];
          ax[i] = s;
          rayleigh += x[i] * s;
        }
        if (it > 0 && std::abs(rayleigh - prev) < tol) return rayleigh;
        prev = rayleigh;
        for (size_t i = 0; i < sz; ++i) x[i] = ax[i] + shift * x[i];
      }
      return prev;
    };

    double lambda = iterate(false);
    if (lambda == 0.0) lambda = iterate(true);  // deterministic retry
    best = std::max(best, lambda);
  }

  SpectralBound out;
  out.lambda = best;
  out.bound = static_cast<int>(std::ceil(1.0 + best - tol));
  out.bound = std::max(out.bound, 1);
  return out;
}

struct HeightBounds {
  int default_h = 2;
  int degree_bound = 1;
  double spectral_lambda = 0.0;
  int spectral_bound = 1;
  double perron_lower = 0.0;  // 2 m' / n over the simple underlying graph
};

inline HeightBounds compute_bounds(const DiGraph& g) {
  HeightBounds hb;
  hb.default_h = default_height(g.num_vertices());
  hb.degree_bound = degree_bound(g);
  auto sb = spectral_bound(g);
  hb.spectral_lambda = sb.lambda;
  hb.spectral_bound = sb.bound;
  auto adj = detail::simple_adjacency(g);
  hb.perron_lower =
      2.0 * static_cast<double>(detail::simple_edge_count(adj)) / static_cast<double>(g.num_vertices());
  return hb;
}

struct GreedyColoring {
  int colors = 0;
  std::vector<int> color;  // 1-based, doubles as a feasible layering
};

// First-fit coloring in smallest-last order; uses at most degeneracy+1
// colors, which is within the spectral bound. Serves as the feasibility
// certificate for a given height and as a warm start for the exact solver.
inline GreedyColoring greedy_coloring(const DiGraph& g) {
  const int n = g.num_vertices();
  auto adj = detail::simple_adjacency(g);

  // smallest-last ordering
  std::vector<int> deg(static_cast<size_t>(n));
  std::vector<bool> removed(static_cast<size_t>(n), false);
  for (int v = 0; v < n; ++v) deg[static_cast<size_t>(v)] = static_cast<int>(adj[static_cast<size_t>(v)].size());
  std::vector<int> order(static_cast<size_t>(n));
  for (int round = n - 1; round >= 0; --round) {
    int pick = -1;
    for (int v = 0; v < n; ++v)
      if (!removed[static_cast<size_t>(v)] &&
          (pick < 0 || deg[static_cast<size_t>(v)] < deg[static_cast<size_t>(pick)]))
        pick = v;
    removed[static_cast<size_t>(pick)] = true;
    order[static_cast<size_t>(round)] = pick;
    for (int w : adj[static_cast<size_t>(pick)])
      if (!removed[static_cast<size_t>(w)]) --deg[static_cast<size_t>(w)];
  }

  GreedyColoring out;
  out.color.assign(static_cast<size_t>(n), 0);
  std::vector<char> used;
  for (int v : order) {
    used.assign(static_cast<size_t>(n) + 2, 0);
    for (int w : adj[static_cast<size_t>(v)]) {
      int c = out.color[static_cast<size_t>(w)];
      if (c > 0) used[static_cast<size_t>(c)] = 1;
    }
    int c = 1;
    while (used[static_cast<size_t>(c)]) ++c;
    out.color[static_cast<size_t>(v)] = c;
    out.colors = std::max(out.colors, c);
  }
  return out;
}

}  // namespace complay
