#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace complay {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Arc {
  int tail = 0;
  int head = 0;
  friend bool operator==(const Arc&, const Arc&) = default;
};

// Directed multigraph with 0-based vertex ids. Parallel arcs are kept as
// distinct slots; self-loops are rejected on insertion (they make adjacent
// layer separation unsatisfiable). Treat as immutable once populated; const
// instances are safe to share across threads.
class DiGraph {
 public:
  DiGraph() = default;

  explicit DiGraph(int vertex_count) { reset(vertex_count); }

  void reset(int vertex_count) {
    if (vertex_count < 1) throw Error("DiGraph: vertex count must be positive");
    n_ = vertex_count;
    arcs_.clear();
    widths_.assign(static_cast<size_t>(n_), 1.0);
    labels_.assign(static_cast<size_t>(n_), std::string{});
    custom_widths_ = false;
  }

  void add_arc(int tail, int head) {
    check_vertex(tail);
    check_vertex(head);
    if (tail == head) throw Error("DiGraph: self-loop on vertex " + std::to_string(tail));
    arcs_.push_back(Arc{tail, head});
  }

  void set_vertex_width(int v, double width) {
    check_vertex(v);
    if (!(width > 0.0)) throw Error("DiGraph: vertex width must be positive");
    widths_[static_cast<size_t>(v)] = width;
    custom_widths_ = custom_widths_ || width != 1.0;
  }

  void set_label(int v, std::string label) {
    check_vertex(v);
    labels_[static_cast<size_t>(v)] = std::move(label);
  }

  int num_vertices() const { return n_; }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const Arc& arc(int i) const { return arcs_[static_cast<size_t>(i)]; }

  double vertex_width(int v) const { return widths_[static_cast<size_t>(v)]; }
  bool has_custom_widths() const { return custom_widths_; }
  double total_vertex_width() const {
    double s = 0.0;
    for (double w : widths_) s += w;
    return s;
  }

  const std::string& label(int v) const { return labels_[static_cast<size_t>(v)]; }

 private:
  void check_vertex(int v) const {
    if (v < 0 || v >= n_)
      throw Error("DiGraph: vertex id " + std::to_string(v) + " out of range [0, " +
                  std::to_string(n_) + ")");
  }

  int n_ = 0;
  std::vector<Arc> arcs_;
  std::vector<double> widths_;
  std::vector<std::string> labels_;
  bool custom_widths_ = false;
};

// Structural equality: vertex count, ordered arc list, vertex widths.
// Labels are in-memory only (the instance format has no label line).
inline bool structurally_equal(const DiGraph& a, const DiGraph& b) {
  if (a.num_vertices() != b.num_vertices() || a.num_arcs() != b.num_arcs()) return false;
  if (!(a.arcs() == b.arcs())) return false;
  for (int v = 0; v < a.num_vertices(); ++v)
    if (a.vertex_width(v) != b.vertex_width(v)) return false;
  return true;
}

namespace detail {

inline std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return std::to_string(value);
  return std::string(buf, ptr);
}

inline bool parse_int(const std::string& tok, long long& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc{} && ptr == tok.data() + tok.size();
}

inline bool parse_real(const std::string& tok, double& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc{} && ptr == tok.data() + tok.size();
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream ss(line);
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

}  // namespace detail

// Instance format: UTF-8 text. Optional first line `p <n> <m>`; `#` starts a
// comment line; `w <v> <width>` declares a vertex width; every other line is
// `tail head`. Without a header, n = 1 + max vertex id.
inline DiGraph parse_edge_list(std::istream& in) {
  struct PendingWidth {
    int vertex;
    double width;
    int line;
  };
  long long declared_n = -1;
  std::vector<Arc> arcs;
  std::vector<PendingWidth> widths;
  int max_id = -1;

  std::string line;
  int line_no = 0;
  bool saw_content = false;
  auto fail = [&](const std::string& what) {
    throw Error("line " + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto toks = detail::split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;

    if (toks[0] == "p") {
      if (saw_content || declared_n >= 0) fail("header must be the first content line");
      long long n = 0, m = 0;
      if (toks.size() != 3 || !detail::parse_int(toks[1], n) || !detail::parse_int(toks[2], m) ||
          n < 1 || m < 0)
        fail("malformed header");
      declared_n = n;
      arcs.reserve(static_cast<size_t>(m));
      continue;
    }
    saw_content = true;

    if (toks[0] == "w") {
      long long v = 0;
      double width = 0.0;
      if (toks.size() != 3 || !detail::parse_int(toks[1], v) || !detail::parse_real(toks[2], width))
        fail("malformed width line");
      if (v < 0 || (declared_n >= 0 && v >= declared_n)) fail("vertex id out of range");
      if (!(width > 0.0)) fail("vertex width must be positive");
      widths.push_back({static_cast<int>(v), width, line_no});
      max_id = std::max(max_id, static_cast<int>(v));
      continue;
    }

    long long t = 0, h = 0;
    if (toks.size() != 2 || !detail::parse_int(toks[0], t) || !detail::parse_int(toks[1], h))
      fail("malformed line");
    if (t < 0 || h < 0 || (declared_n >= 0 && (t >= declared_n || h >= declared_n)))
      fail("vertex id out of range");
    if (t == h) fail("self-loop");
    arcs.push_back(Arc{static_cast<int>(t), static_cast<int>(h)});
    max_id = std::max({max_id, static_cast<int>(t), static_cast<int>(h)});
  }

  long long n = declared_n >= 0 ? declared_n : static_cast<long long>(max_id) + 1;
  if (n < 1) throw Error("empty instance: no header and no arcs");
  DiGraph g(static_cast<int>(n));
  for (const Arc& a : arcs) g.add_arc(a.tail, a.head);
  for (const auto& pw : widths) g.set_vertex_width(pw.vertex, pw.width);
  return g;
}

inline DiGraph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

inline void write_edge_list(const DiGraph& g, std::ostream& out) {
  out << "p " << g.num_vertices() << ' ' << g.num_arcs() << '\n';
  if (g.has_custom_widths()) {
    for (int v = 0; v < g.num_vertices(); ++v)
      if (g.vertex_width(v) != 1.0)
        out << "w " << v << ' ' << detail::format_real(g.vertex_width(v)) << '\n';
  }
  for (const Arc& a : g.arcs()) out << a.tail << ' ' << a.head << '\n';
}

inline std::string write_edge_list(const DiGraph& g) {
  std::ostringstream out;
  write_edge_list(g, out);
  return out.str();
}

struct DegreeInfo {
  std::vector<int> degree;  // undirected, each incident arc counted once
  int max_degree = 0;
};

inline DegreeInfo degrees(const DiGraph& g) {
  DegreeInfo info;
  info.degree.assign(static_cast<size_t>(g.num_vertices()), 0);
  for (const Arc& a : g.arcs()) {
    ++info.degree[static_cast<size_t>(a.tail)];
    ++info.degree[static_cast<size_t>(a.head)];
  }
  for (int d : info.degree) info.max_degree = std::max(info.max_degree, d);
  return info;
}

inline bool is_acyclic(const DiGraph& g) {
  const int n = g.num_vertices();
  std::vector<std::vector<int>> out(static_cast<size_t>(n));
  std::vector<int> indeg(static_cast<size_t>(n), 0);
  for (const Arc& a : g.arcs()) {
    out[static_cast<size_t>(a.tail)].push_back(a.head);
    ++indeg[static_cast<size_t>(a.head)];
  }
  std::vector<int> queue;
  queue.reserve(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v)
    if (indeg[static_cast<size_t>(v)] == 0) queue.push_back(v);
  size_t processed = 0;
  while (processed < queue.size()) {
    int v = queue[processed++];
    for (int w : out[static_cast<size_t>(v)])
      if (--indeg[static_cast<size_t>(w)] == 0) queue.push_back(w);
  }
  return processed == static_cast<size_t>(n);
}

struct RandomGraphSpec {
  int n = 2;
  double density = 1.5;  // arcs per vertex; m = round(density * n)
  std::uint64_t seed = 0;
};

namespace detail {

// All randomness is drawn from raw mt19937_64 words so instances are
// reproducible across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_word() {
    // splitmix64; tiny, stable, and good enough for benchmark instances
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform01() { return static_cast<double>(next_word() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound); modulo bias is irrelevant at benchmark scale.
  int below(int bound) { return static_cast<int>(next_word() % static_cast<std::uint64_t>(bound)); }

 private:
  std::uint64_t state_;
};

}  // namespace detail

// Random benchmark instances: cycle over the vertices, give each a sampled
// number of outgoing arcs with uniform targets (self-loops re-rolled by
// construction), and stop once m = round(density*n) arcs exist. Graphs may be
// cyclic and may contain parallel arcs.
inline DiGraph generate_random(const RandomGraphSpec& spec) {
  if (spec.n < 2) throw Error("RandomGraphSpec: n must be at least 2");
  if (!(spec.density > 0.0)) throw Error("RandomGraphSpec: density must be positive");
  const long long target = std::llround(spec.density * spec.n);
  DiGraph g(spec.n);
  detail::Rng rng(spec.seed);
  const double p_more = spec.density / (1.0 + spec.density);  // geometric with mean = density
  long long emitted = 0;
  while (emitted < target) {
    for (int v = 0; v < spec.n && emitted < target; ++v) {
      int burst = 0;
      while (rng.uniform01() < p_more && burst < 64) ++burst;
      for (int i = 0; i < burst && emitted < target; ++i) {
        int t = rng.below(spec.n - 1);
        if (t >= v) ++t;
        g.add_arc(v, t);
        ++emitted;
      }
    }
  }
  return g;
}

}  // namespace complay
