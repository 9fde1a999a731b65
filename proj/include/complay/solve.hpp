#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <csignal>
#include <ctime>
#include <fcntl.h>
#include <sys/stat.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "complay/bounds.hpp"
#include "complay/graph.hpp"
#include "complay/layering.hpp"
#include "complay/lp_format.hpp"
#include "complay/milp.hpp"

namespace complay {

enum class SolveStatus { Optimal, Feasible, Infeasible, TimeLimit, BridgeError };
enum class Engine { Oracle, Bnb, External };
enum class ObjectiveKind { Cglp, MmlSigned, MmlAbs };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Feasible: return "Feasible";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::TimeLimit: return "TimeLimit";
    case SolveStatus::BridgeError: return "BridgeError";
  }
  return "?";
}

inline const char* to_string(Engine e) {
  switch (e) {
    case Engine::Oracle: return "oracle";
    case Engine::Bnb: return "bnb";
    case Engine::External: return "external";
  }
  return "?";
}

struct SolveConfig {
  double time_limit_seconds = 600.0;
  Engine engine = Engine::Bnb;
  std::string external_cmd;      // template with {lp} {sol} {timelimit}
  std::string work_dir;          // temp file location for the bridge
  int oracle_vertex_cap = 10;
  int bnb_vertex_cap = 25;       // advisory only
  bool exact_arithmetic = true;  // 64-bit integer objective when weights allow
  double kill_grace_seconds = 5.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  std::optional<Layering> layering;
  double wall_seconds = 0.0;
  double cpu_seconds = 0.0;
  unsigned long long nodes = 0;
  std::string message;
};

inline ObjectiveKind objective_kind_of(const VarMap& vm) {
  if (vm.kind != ModelKind::Mml) return ObjectiveKind::Cglp;
  return vm.signed_lengths ? ObjectiveKind::MmlSigned : ObjectiveKind::MmlAbs;
}

// Weighted cost of a layering, recomputed from its metrics.
inline double objective_of(const DiGraph& g, const Layering& l, ObjectiveKind kind,
                           const Weights& w) {
  LayeringMetrics mt = metrics(g, l);
  switch (kind) {
    case ObjectiveKind::Cglp:
      return w.rev * static_cast<double>(mt.reversed) + w.len * static_cast<double>(mt.total_length) +
             w.wid * mt.width;
    case ObjectiveKind::MmlSigned:
      return w.rev * static_cast<double>(mt.reversed) +
             w.len * static_cast<double>(signed_length(g, l)) + w.wid * mt.real_width;
    case ObjectiveKind::MmlAbs:
      return w.rev * static_cast<double>(mt.reversed) + w.len * static_cast<double>(mt.total_length) +
             w.wid * mt.real_width;
  }
  return 0.0;
}

namespace detail {

class StopWatch {
 public:
  StopWatch() : start_(std::chrono::steady_clock::now()), cpu_start_(thread_cpu_now()) {}

  double wall() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  double cpu() const { return thread_cpu_now() - cpu_start_; }

 private:
  static double thread_cpu_now() {
    timespec ts{};
    clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
    return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
  }
  std::chrono::steady_clock::time_point start_;
  double cpu_start_;
};

// Incremental enumeration state shared by the oracle and the exact solver.
// Arc slots are rewritten against a vertex order so that each arc is charged
// when its later endpoint gets a layer.
struct SearchGraph {
  int n = 0;
  int m = 0;
  int height = 1;
  std::vector<double> vertex_width;
  // arcs grouped by the position (in search order) of their later endpoint:
  // (other position, other_is_tail)
  std::vector<std::vector<std::pair<int, bool>>> arcs_at;
  std::vector<Arc> arcs_by_pos;  // arc endpoints as positions, original orientation

  SearchGraph(const DiGraph& g, int h, const std::vector<int>& order) {
    n = g.num_vertices();
    m = g.num_arcs();
    height = h;
    std::vector<int> pos(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pos[static_cast<size_t>(order[static_cast<size_t>(i)])] = i;
    vertex_width.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      vertex_width[static_cast<size_t>(i)] = g.vertex_width(order[static_cast<size_t>(i)]);
    arcs_at.assign(static_cast<size_t>(n), {});
    arcs_by_pos.reserve(static_cast<size_t>(m));
    for (const Arc& a : g.arcs()) {
      int pt = pos[static_cast<size_t>(a.tail)];
      int ph = pos[static_cast<size_t>(a.head)];
      arcs_by_pos.push_back({pt, ph});
      int later = std::max(pt, ph);
      bool other_is_tail = later == ph;  // the earlier endpoint is the tail
      arcs_at[static_cast<size_t>(later)].emplace_back(std::min(pt, ph), other_is_tail);
    }
  }
};

// Exact integral objective when weights and widths allow it; falls back to
// doubles otherwise. All desk-scale magnitudes stay far below 2^62.
struct Cost {
  bool integral;
  long long iv = 0;
  double dv = 0.0;

  static Cost zero(bool integral) { return Cost{integral, 0, 0.0}; }
  void add(double x) {
    if (integral)
      iv += static_cast<long long>(x);
    else
      dv += x;
  }
  double value() const { return integral ? static_cast<double>(iv) : dv; }
  bool less_than(const Cost& o) const { return integral ? iv < o.iv : dv < o.dv; }
  bool at_least(const Cost& o) const { return !less_than(o); }
};

inline bool can_use_integral(const DiGraph& g, const Weights& w, const SolveConfig& cfg) {
  if (!cfg.exact_arithmetic || !w.integral() || g.has_custom_widths()) return false;
  // overflow guard: the largest conceivable objective at these sizes
  double bound = (std::abs(w.rev) + std::abs(w.len) + std::abs(w.wid) + 1.0) *
                 (static_cast<double>(g.num_arcs() + g.num_vertices() + 1)) *
                 (static_cast<double>(g.num_vertices()) + 2.0);
  return bound < 0x1p62;
}

}  // namespace detail

// Exhaustive search over all H^n assignments, pruned only on adjacency
// conflicts. Ties broken toward the lexicographically smallest layer vector,
// so results are reproducible. Intended as the trusted oracle at small n.
inline SolveResult brute_force(const DiGraph& g, int height, ObjectiveKind kind, const Weights& w,
                               const SolveConfig& cfg = {}) {
  if (g.num_vertices() > cfg.oracle_vertex_cap)
    throw Error("brute_force: " + std::to_string(g.num_vertices()) + " vertices exceed the cap of " +
                std::to_string(cfg.oracle_vertex_cap));
  if (height < 1 || (height < 2 && g.num_arcs() > 0)) {
    SolveResult r;
    r.status = SolveStatus::Infeasible;
    r.message = "height too small for any feasible layering";
    return r;
  }

  detail::StopWatch watch;
  const int n = g.num_vertices();
  std::vector<int> identity(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) identity[static_cast<size_t>(i)] = i;
  detail::SearchGraph sg(g, height, identity);

  const bool integral = detail::can_use_integral(g, w, cfg);
  std::vector<int> layer(static_cast<size_t>(n), 0);
  std::vector<int> best;
  detail::Cost best_cost = detail::Cost::zero(integral);
  bool have_best = false;
  unsigned long long nodes = 0;

  Layering probe;
  probe.height = height;
  probe.layer_of.assign(static_cast<size_t>(n), 0);

  // depth-first over vertices in index order, layers ascending
  int depth = 0;
  std::vector<int> choice(static_cast<size_t>(n), 0);
  while (depth >= 0) {
    if (choice[static_cast<size_t>(depth)] == height) {
      choice[static_cast<size_t>(depth)] = 0;
      --depth;
      if (depth >= 0) ++choice[static_cast<size_t>(depth)];
      continue;
    }
    int k = choice[static_cast<size_t>(depth)] + 1;
    layer[static_cast<size_t>(depth)] = k;
    ++nodes;
    // arcs whose later endpoint comes after this depth are checked there
    bool conflict = false;
    for (const auto& [other, other_is_tail] : sg.arcs_at[static_cast<size_t>(depth)]) {
      (void)other_is_tail;
      if (layer[static_cast<size_t>(other)] == k) {
        conflict = true;
        break;
      }
    }
    if (conflict) {
      ++choice[static_cast<size_t>(depth)];
      continue;
    }
    if (depth + 1 < n) {
      ++depth;
      continue;
    }
    // complete assignment
    std::copy(layer.begin(), layer.end(), probe.layer_of.begin());
    detail::Cost cost = detail::Cost::zero(integral);
    cost.add(objective_of(g, probe, kind, w));
    if (!have_best || cost.less_than(best_cost)) {
      best_cost = cost;
      best = probe.layer_of;
      have_best = true;
    }
    ++choice[static_cast<size_t>(depth)];
  }

  SolveResult r;
  r.nodes = nodes;
  r.wall_seconds = watch.wall();
  r.cpu_seconds = watch.cpu();
  if (!have_best) {
    r.status = SolveStatus::Infeasible;
    return r;
  }
  r.status = SolveStatus::Optimal;
  r.layering = Layering{height, best};
  r.objective = best_cost.value();
  return r;
}

namespace detail {

// Greedy warm starts for the exact solver: a smallest-last coloring (valid
// whenever it fits in H layers) and a sequential cheapest-layer insertion.
inline std::optional<Layering> warm_start(const DiGraph& g, int height, ObjectiveKind kind,
                                          const Weights& w, const std::vector<int>& order) {
  std::optional<Layering> best;
  double best_cost = 0.0;
  auto consider = [&](const Layering& l) {
    if (!is_valid(g, l)) return;
    double c = objective_of(g, l, kind, w);
    if (!best || c < best_cost) {
      best = l;
      best_cost = c;
    }
  };

  GreedyColoring gc = greedy_coloring(g);
  if (gc.colors <= height) consider(Layering{height, gc.color});

  // sequential insertion in search order, cheapest conflict-free layer first
  {
    const int n = g.num_vertices();
    std::vector<std::vector<std::pair<int, bool>>> nbrs(static_cast<size_t>(n));
    for (const Arc& a : g.arcs()) {
      nbrs[static_cast<size_t>(a.tail)].emplace_back(a.head, true);
      nbrs[static_cast<size_t>(a.head)].emplace_back(a.tail, false);
    }
    std::vector<int> layer(static_cast<size_t>(n), 0);
    std::vector<double> load(static_cast<size_t>(height) + 1, 0.0);
    bool ok = true;
    for (int v : order) {
      int pick = -1;
      double pick_cost = 0.0;
      for (int k = 1; k <= height; ++k) {
        bool conflict = false;
        double delta = 0.0;
        for (const auto& [u, v_is_tail] : nbrs[static_cast<size_t>(v)]) {
          if (layer[static_cast<size_t>(u)] == 0) continue;
          int lu = layer[static_cast<size_t>(u)];
          if (lu == k) {
            conflict = true;
            break;
          }
          int tail_layer = v_is_tail ? k : lu;
          int head_layer = v_is_tail ? lu : k;
          delta += w.len * std::abs(tail_layer - head_layer) *
                   (kind == ObjectiveKind::MmlSigned ? 0.0 : 1.0);
          if (kind == ObjectiveKind::MmlSigned) delta += w.len * (head_layer - tail_layer);
          if (tail_layer > head_layer) delta += w.rev;
        }
        if (conflict) continue;
        delta += w.wid * (load[static_cast<size_t>(k)] + g.vertex_width(v));
        if (pick < 0 || delta < pick_cost) {
          pick = k;
          pick_cost = delta;
        }
      }
      if (pick < 0) {
        ok = false;
        break;
      }
      layer[static_cast<size_t>(v)] = pick;
      load[static_cast<size_t>(pick)] += g.vertex_width(v);
    }
    if (ok) consider(Layering{height, layer});
  }
  return best;
}

}  // namespace detail

// Exact depth-first branch and bound on the combinatorial problem itself.
// Vertices are assigned in descending-degree order; a node is pruned when the
// partial cost plus an admissible completion bound reaches the incumbent.
// The completion bound charges w_len (or the cheapest possible signed
// contribution) for every arc not yet fully placed and the current maximum
// layer load for the width term.
inline SolveResult branch_and_bound(const DiGraph& g, int height, ObjectiveKind kind,
                                    const Weights& w, const SolveConfig& cfg = {}) {
  if (height < 1 || (height < 2 && g.num_arcs() > 0)) {
    SolveResult r;
    r.status = SolveStatus::Infeasible;
    r.message = "height too small for any feasible layering";
    return r;
  }
  detail::StopWatch watch;
  const int n = g.num_vertices();
  const int m = g.num_arcs();
  const int h = height;

  DegreeInfo deg = degrees(g);
  std::vector<int> order(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return deg.degree[static_cast<size_t>(a)] > deg.degree[static_cast<size_t>(b)];
  });
  detail::SearchGraph sg(g, h, order);

  const bool integral = detail::can_use_integral(g, w, cfg);
  auto as_cost = [&](double x) {
    detail::Cost c = detail::Cost::zero(integral);
    c.add(integral ? std::llround(x) : x);
    return c;
  };

  // Per-arc floor of its final contribution, used for arcs not yet fully
  // placed. CGLP/abs: at least one unit of length. Signed: a reversed arc can
  // contribute w_rev - w_len*(H-1), whichever is smaller.
  double arc_floor_d = w.len;
  if (kind == ObjectiveKind::MmlSigned)
    arc_floor_d = std::min(w.len, w.rev - w.len * static_cast<double>(h - 1));

  const bool width_sees_dummies = kind == ObjectiveKind::Cglp;
  double total_width = g.total_vertex_width();
  double width_floor_d = std::ceil(total_width / static_cast<double>(h) - 1e-12);
  if (g.has_custom_widths()) width_floor_d = total_width / static_cast<double>(h);

  detail::Cost incumbent = detail::Cost::zero(integral);
  std::vector<int> best;
  bool have_best = false;
  auto accept = [&](const std::vector<int>& by_pos, double cost) {
    detail::Cost c = as_cost(cost);
    if (!have_best || c.less_than(incumbent)) {
      incumbent = c;
      best.assign(static_cast<size_t>(n), 0);
      for (int i = 0; i < n; ++i)
        best[static_cast<size_t>(order[static_cast<size_t>(i)])] = by_pos[static_cast<size_t>(i)];
      have_best = true;
      return true;
    }
    return false;
  };

  if (auto ws = detail::warm_start(g, h, kind, w, order)) {
    std::vector<int> by_pos(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      by_pos[static_cast<size_t>(i)] = ws->layer_of[static_cast<size_t>(order[static_cast<size_t>(i)])];
    accept(by_pos, objective_of(g, *ws, kind, w));
  }

  // incremental state along the search path
  std::vector<int> layer(static_cast<size_t>(n), 0);
  std::vector<double> load(static_cast<size_t>(h) + 2, 0.0);   // real width per layer
  std::vector<int> dummies(static_cast<size_t>(h) + 2, 0);     // committed traversals per layer
  std::vector<double> arc_cost_at(static_cast<size_t>(n), 0.0);  // delta charged at each depth
  unsigned long long nodes = 0;
  bool timed_out = false;

  double running = 0.0;  // exact cost of fully placed arcs
  int unfinished = m;    // arcs with at least one unplaced endpoint

  // cheap width lower bound: max current layer load (+dummies for CGLP)
  auto width_lb = [&]() {
    double mx = width_floor_d;
    for (int k = 1; k <= h; ++k) {
      double v = load[static_cast<size_t>(k)] +
                 (width_sees_dummies ? static_cast<double>(dummies[static_cast<size_t>(k)]) : 0.0);
      mx = std::max(mx, v);
    }
    return mx;
  };

  std::vector<int> choice(static_cast<size_t>(n), 0);
  int depth = 0;
  auto undo_assign = [&](int d) {
    int k = layer[static_cast<size_t>(d)];
    if (k == 0) return;
    load[static_cast<size_t>(k)] -= sg.vertex_width[static_cast<size_t>(d)];
    running -= arc_cost_at[static_cast<size_t>(d)];
    arc_cost_at[static_cast<size_t>(d)] = 0.0;
    for (const auto& [other, other_is_tail] : sg.arcs_at[static_cast<size_t>(d)]) {
      (void)other_is_tail;
      int lo = layer[static_cast<size_t>(other)];
      if (lo == 0) continue;
      ++unfinished;
      int a = std::min(lo, k), b = std::max(lo, k);
      for (int t = a + 1; t < b; ++t) --dummies[static_cast<size_t>(t)];
    }
    layer[static_cast<size_t>(d)] = 0;
  };

  while (depth >= 0) {
    if ((nodes & 1023ULL) == 0 && watch.wall() > cfg.time_limit_seconds) {
      timed_out = true;
      break;
    }
    if (choice[static_cast<size_t>(depth)] == h) {
      choice[static_cast<size_t>(depth)] = 0;
      undo_assign(depth);
      --depth;
      if (depth >= 0) {
        undo_assign(depth);
        ++choice[static_cast<size_t>(depth)];
      }
      continue;
    }
    undo_assign(depth);  // clear any previous choice at this depth
    int k = choice[static_cast<size_t>(depth)] + 1;
    ++nodes;

    // adjacency + incremental arc cost
    bool conflict = false;
    double delta = 0.0;
    for (const auto& [other, other_is_tail] : sg.arcs_at[static_cast<size_t>(depth)]) {
      int lo = layer[static_cast<size_t>(other)];
      if (lo == 0) continue;
      if (lo == k) {
        conflict = true;
        break;
      }
      int tail_layer = other_is_tail ? lo : k;
      int head_layer = other_is_tail ? k : lo;
      if (kind == ObjectiveKind::MmlSigned)
        delta += w.len * static_cast<double>(head_layer - tail_layer);
      else
        delta += w.len * static_cast<double>(std::abs(head_layer - tail_layer));
      if (tail_layer > head_layer) delta += w.rev;
    }
    if (conflict) {
      ++choice[static_cast<size_t>(depth)];
      continue;
    }

    // commit the assignment
    layer[static_cast<size_t>(depth)] = k;
    load[static_cast<size_t>(k)] += sg.vertex_width[static_cast<size_t>(depth)];
    arc_cost_at[static_cast<size_t>(depth)] = delta;
    running += delta;
    int completed_here = 0;
    for (const auto& [other, other_is_tail] : sg.arcs_at[static_cast<size_t>(depth)]) {
      (void)other_is_tail;
      int lo = layer[static_cast<size_t>(other)];
      if (lo == 0) continue;
      ++completed_here;
      int a = std::min(lo, k), b = std::max(lo, k);
      for (int t = a + 1; t < b; ++t) ++dummies[static_cast<size_t>(t)];
    }
    unfinished -= completed_here;

    // admissible completion bound; undo_assign on the next visit to this
    // depth restores unfinished and the dummy overlay
    double lb = running + arc_floor_d * static_cast<double>(unfinished) + w.wid * width_lb();
    if (have_best && as_cost(lb).at_least(incumbent)) {
      ++choice[static_cast<size_t>(depth)];
      continue;
    }

    if (depth + 1 < n) {
      ++depth;
      continue;
    }

    // leaf: exact objective (width needs the true dummy overlay)
    Layering full;
    full.height = h;
    full.layer_of.assign(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i)
      full.layer_of[static_cast<size_t>(order[static_cast<size_t>(i)])] = layer[static_cast<size_t>(i)];
    accept(layer, objective_of(g, full, kind, w));
    ++choice[static_cast<size_t>(depth)];
  }

  SolveResult r;
  r.nodes = nodes;
  r.wall_seconds = watch.wall();
  r.cpu_seconds = watch.cpu();
  if (timed_out) {
    r.status = SolveStatus::TimeLimit;
    if (have_best) {
      r.layering = Layering{h, best};
      r.objective = incumbent.value();
    }
    return r;
  }
  if (!have_best) {
    r.status = SolveStatus::Infeasible;
    return r;
  }
  r.status = SolveStatus::Optimal;
  r.layering = Layering{h, best};
  r.objective = incumbent.value();
  return r;
}

namespace detail {

struct RunOutcome {
  int exit_code = -1;
  bool timed_out = false;
  std::string output;
};

// Runs `sh -c cmd` with combined output captured; the whole process group is
// killed once the deadline passes.
inline RunOutcome run_command(const std::string& cmd, const std::filesystem::path& capture_file,
                              double time_limit, double grace) {
  RunOutcome out;
  pid_t pid = fork();
  if (pid < 0) {
    out.output = "fork failed";
    return out;
  }
  if (pid == 0) {
    setpgid(0, 0);
    int fd = ::open(capture_file.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd >= 0) {
      dup2(fd, 1);
      dup2(fd, 2);
      ::close(fd);
    }
    execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::duration<double>(time_limit + grace);
  int status = 0;
  for (;;) {
    pid_t done = waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (done < 0) {
      out.output = "waitpid failed";
      return out;
    }
    if (std::chrono::steady_clock::now() > deadline) {
      kill(-pid, SIGKILL);
      waitpid(pid, &status, 0);
      out.timed_out = true;
      break;
    }
    usleep(10000);
  }
  if (WIFEXITED(status)) out.exit_code = WEXITSTATUS(status);
  std::ifstream in(capture_file);
  std::ostringstream ss;
  ss << in.rdbuf();
  out.output = ss.str();
  if (out.output.size() > 4000) out.output.resize(4000);
  return out;
}

inline std::string substitute_placeholders(std::string tmpl, const std::string& lp,
                                           const std::string& sol, double timelimit) {
  auto replace_all = [](std::string& s, const std::string& from, const std::string& to) {
    size_t at = 0;
    while ((at = s.find(from, at)) != std::string::npos) {
      s.replace(at, from.size(), to);
      at += to.size();
    }
  };
  char tl[32];
  std::snprintf(tl, sizeof(tl), "%g", timelimit);
  replace_all(tmpl, "{lp}", lp);
  replace_all(tmpl, "{sol}", sol);
  replace_all(tmpl, "{timelimit}", tl);
  return tmpl;
}

}  // namespace detail

// External MIP solver bridge. Writes the model as an LP file, runs the
// configured command, and parses the solution file as whitespace-separated
// `name value` lines (`#`/`*` comments and an `objective <v>` line allowed).
// The reported objective is always recomputed from the decoded layering;
// solver-printed objectives are never trusted.
inline SolveResult invoke_external(const DiGraph& g, const MilpModel& model, const VarMap& vm,
                                   const Weights& w, const SolveConfig& cfg) {
  SolveResult r;
  detail::StopWatch watch;
  auto fail = [&](std::string msg) {
    r.status = SolveStatus::BridgeError;
    r.message = std::move(msg);
    r.wall_seconds = watch.wall();
    r.cpu_seconds = watch.cpu();
    return r;
  };
  if (cfg.external_cmd.empty()) return fail("no external solver command configured");

  namespace fs = std::filesystem;
  fs::path base = cfg.work_dir.empty() ? fs::temp_directory_path() : fs::path(cfg.work_dir);
  std::error_code ec;
  fs::create_directories(base, ec);
  std::string tmpl = (base / "complay-XXXXXX").string();
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  if (!mkdtemp(buf.data())) return fail("cannot create temp directory under " + base.string());
  fs::path dir(buf.data());
  fs::path lp_path = dir / "model.lp";
  fs::path sol_path = dir / "model.sol";
  fs::path log_path = dir / "solver.log";
  auto cleanup = [&] { fs::remove_all(dir, ec); };

  {
    std::ofstream out(lp_path);
    write_lp(model, out);
    if (!out) {
      cleanup();
      return fail("cannot write LP file");
    }
  }

  std::string cmd = detail::substitute_placeholders(cfg.external_cmd, lp_path.string(),
                                                    sol_path.string(), cfg.time_limit_seconds);
  detail::RunOutcome run =
      detail::run_command(cmd, log_path, cfg.time_limit_seconds, cfg.kill_grace_seconds);
  if (run.timed_out) {
    cleanup();
    r.status = SolveStatus::TimeLimit;
    r.message = "solver killed after exceeding the time limit";
    r.wall_seconds = watch.wall();
    r.cpu_seconds = watch.cpu();
    return r;
  }
  if (run.exit_code != 0) {
    std::string msg = "solver exited with code " + std::to_string(run.exit_code);
    if (!run.output.empty()) msg += ": " + run.output;
    cleanup();
    return fail(msg);
  }

  std::ifstream sol(sol_path);
  if (!sol) {
    cleanup();
    return fail("solver produced no solution file");
  }
  std::vector<double> values(model.vars.size(), 0.0);
  std::string line;
  int line_no = 0;
  while (std::getline(sol, line)) {
    ++line_no;
    auto toks = detail::split_ws(line);
    if (toks.empty() || toks[0][0] == '#' || toks[0][0] == '*') continue;
    if (toks.size() == 2 && toks[0] == "objective") {
      double ignored = 0.0;
      if (!detail::parse_real(toks[1], ignored)) {
        cleanup();
        return fail("solution line " + std::to_string(line_no) + ": bad objective value");
      }
      continue;
    }
    double value = 0.0;
    if (toks.size() != 2 || !detail::parse_real(toks[1], value)) {
      cleanup();
      return fail("solution line " + std::to_string(line_no) + ": expected 'name value'");
    }
    int id = model.var_index(toks[0]);
    if (id < 0) {
      cleanup();
      return fail("solution line " + std::to_string(line_no) + ": unknown variable " + toks[0]);
    }
    values[static_cast<size_t>(id)] = value;
  }

  Layering l;
  try {
    l = decode_and_validate(g, vm, values);
  } catch (const Error& e) {
    cleanup();
    return fail(e.what());
  }
  cleanup();
  r.status = SolveStatus::Optimal;
  r.layering = l;
  r.objective = objective_of(g, l, objective_kind_of(vm), w);
  r.wall_seconds = watch.wall();
  r.cpu_seconds = watch.cpu();
  return r;
}

}  // namespace complay
