#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "complay/graph.hpp"
#include "complay/layering.hpp"

namespace complay {

// Objective weights for reversed arcs, arc length, and drawing width.
// Defaults follow the evaluation setup: w_rev = m * H so an arc is reversed
// only when height or cycles force it, w_len = w_wid = 1.
struct Weights {
  double rev = 1.0;
  double len = 1.0;
  double wid = 1.0;

  static Weights defaults(int num_arcs, int height) {
    return Weights{static_cast<double>(num_arcs) * static_cast<double>(height), 1.0, 1.0};
  }

  bool integral() const {
    auto is_int = [](double v) { return std::floor(v) == v && std::abs(v) < 0x1p53; };
    return is_int(rev) && is_int(len) && is_int(wid);
  }
};

enum class VarKind { Binary, Continuous };
enum class Sense { LE, EQ, GE };

struct MilpVariable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = 0.0;
};

struct MilpConstraint {
  std::string name;
  std::vector<std::pair<int, double>> terms;  // (variable id, coefficient)
  Sense sense = Sense::LE;
  double rhs = 0.0;
};

struct MilpObjective {
  std::vector<std::pair<int, double>> terms;
  double offset = 0.0;  // constant added to the minimized expression
};

// Solver-agnostic linear model. Minimization only.
struct MilpModel {
  std::vector<MilpVariable> vars;
  std::vector<MilpConstraint> rows;
  MilpObjective objective;

  int add_binary(std::string name) {
    vars.push_back({std::move(name), VarKind::Binary, 0.0, 1.0});
    return static_cast<int>(vars.size()) - 1;
  }

  int add_continuous(std::string name, double lower, double upper) {
    vars.push_back({std::move(name), VarKind::Continuous, lower, upper});
    return static_cast<int>(vars.size()) - 1;
  }

  void add_row(std::string name, std::vector<std::pair<int, double>> terms, Sense sense,
               double rhs) {
    rows.push_back({std::move(name), std::move(terms), sense, rhs});
  }

  int var_index(const std::string& name) const {
    for (int i = 0; i < static_cast<int>(vars.size()); ++i)
      if (vars[static_cast<size_t>(i)].name == name) return i;
    return -1;
  }

  // Structural sanity: every term references a declared variable, binaries
  // are {0,1}.
  void check_well_formed() const {
    const int nv = static_cast<int>(vars.size());
    for (const auto& v : vars)
      if (v.kind == VarKind::Binary && (v.lower != 0.0 || v.upper != 1.0))
        throw Error("binary variable " + v.name + " with non-{0,1} bounds");
    auto check_terms = [&](const std::vector<std::pair<int, double>>& ts) {
      for (const auto& [id, c] : ts) {
        (void)c;
        if (id < 0 || id >= nv) throw Error("constraint references undeclared variable");
      }
    };
    for (const auto& row : rows) check_terms(row.terms);
    check_terms(objective.terms);
  }
};

enum class ModelKind { Ext, Cgl, Mml };

inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Ext: return "EXT";
    case ModelKind::Cgl: return "CGL";
    case ModelKind::Mml: return "MML";
  }
  return "?";
}

// Role-indexed variable lookup. Layer indices are 1-based throughout:
//   x[v][k-1]                assignment indicator l(v) = k          (EXT)
//   y_below[v][k - y_k0()]   order indicator l(v) < k               (CGL/MML)
//   y_above[v][k-1]          order indicator l(v) > k  (unreduced CGL only)
//   r[a]                     arc slot a reversed
//   z[a][k-2]                arc slot a causes a dummy on layer k, k in [2,H-1]
//   l_abs[a]                 absolute length of arc slot a          (MML, abs variant)
// In the reduced ordering models y_below starts at k = 2 (l(v) < 1 is
// identically false) and l(v) < H+1 is identically true.
struct VarMap {
  ModelKind kind = ModelKind::Cgl;
  bool reduced = true;
  bool signed_lengths = false;  // MML objective variant
  int n = 0;
  int height = 1;
  int var_count = 0;

  std::vector<std::vector<int>> x;
  std::vector<std::vector<int>> y_below;
  std::vector<std::vector<int>> y_above;
  std::vector<int> r;
  std::vector<std::vector<int>> z;
  std::vector<int> l_abs;
  int width_var = -1;

  int y_k0() const { return reduced ? 2 : 1; }

  int y_below_id(int v, int k) const {
    return y_below[static_cast<size_t>(v)][static_cast<size_t>(k - y_k0())];
  }
};

struct BuildResult {
  MilpModel model;
  VarMap vmap;
};

namespace detail {

inline std::string arc_var_name(const char* prefix, const DiGraph& g, int slot,
                                std::map<std::string, int>& used) {
  const Arc& a = g.arc(slot);
  std::string base =
      std::string(prefix) + "_" + std::to_string(a.tail) + "_" + std::to_string(a.head);
  int& count = used[base];
  ++count;
  if (count == 1) return base;
  return base + "_" + std::to_string(count);  // parallel arc slots stay distinguishable
}

// Accumulates one linear row; constant terms fold into the right-hand side.
class RowBuilder {
 public:
  void add(int var, double coeff) {
    if (var >= 0 && coeff != 0.0) terms_.emplace_back(var, coeff);
  }
  void add_const(double c) { constant_ += c; }

  void emit(MilpModel& model, std::string name, Sense sense, double rhs) {
    // merge duplicate variable ids so each row references a variable once
    std::sort(terms_.begin(), terms_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<int, double>> merged;
    for (const auto& t : terms_) {
      if (!merged.empty() && merged.back().first == t.first)
        merged.back().second += t.second;
      else
        merged.push_back(t);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const auto& t) { return t.second == 0.0; }),
                 merged.end());
    model.add_row(std::move(name), std::move(merged), sense, rhs - constant_);
    terms_.clear();
    constant_ = 0.0;
  }

 private:
  std::vector<std::pair<int, double>> terms_;
  double constant_ = 0.0;
};

inline void check_build_pre(const DiGraph& g, int height) {
  if (height < 1) throw Error("model height must be positive");
  if (height < 2 && g.num_arcs() > 0)
    throw Error("height 1 cannot separate adjacent vertices; need H >= 2");
}

inline void declare_arc_vars(MilpModel& model, VarMap& vm, const DiGraph& g, int height,
                             bool with_z) {
  std::map<std::string, int> used;
  vm.r.reserve(static_cast<size_t>(g.num_arcs()));
  for (int a = 0; a < g.num_arcs(); ++a)
    vm.r.push_back(model.add_continuous(arc_var_name("r", g, a, used), 0.0, 1.0));
  if (with_z && height >= 3) {
    used.clear();
    vm.z.assign(static_cast<size_t>(g.num_arcs()), {});
    for (int a = 0; a < g.num_arcs(); ++a) {
      std::string base = arc_var_name("z", g, a, used);
      for (int k = 2; k <= height - 1; ++k)
        vm.z[static_cast<size_t>(a)].push_back(
            model.add_continuous(base + "_" + std::to_string(k), 0.0, 1.0));
    }
  } else if (with_z) {
    vm.z.assign(static_cast<size_t>(g.num_arcs()), {});
  }
}

}  // namespace detail

// Assignment-based formulation. Binary x_{v,k} places v on layer k; r and z
// stay continuous in [0,1], their integrality is implied. The objective's
// length term counts dummies (length minus one per arc), so a constant
// w_len * m is added to make the model optimum equal the weighted
// (rev, len, W) cost of the optimal layering.
inline BuildResult build_ext(const DiGraph& g, int height, const Weights& w, bool anchor) {
  detail::check_build_pre(g, height);
  const int n = g.num_vertices();
  const int m = g.num_arcs();
  const int h = height;

  BuildResult out;
  MilpModel& model = out.model;
  VarMap& vm = out.vmap;
  vm.kind = ModelKind::Ext;
  vm.n = n;
  vm.height = h;

  vm.x.assign(static_cast<size_t>(n), {});
  for (int v = 0; v < n; ++v)
    for (int k = 1; k <= h; ++k)
      vm.x[static_cast<size_t>(v)].push_back(
          model.add_binary("x_" + std::to_string(v) + "_" + std::to_string(k)));
  detail::declare_arc_vars(model, vm, g, h, /*with_z=*/true);
  vm.width_var = model.add_continuous("W", 0.0, std::numeric_limits<double>::infinity());
  vm.var_count = static_cast<int>(model.vars.size());

  auto x = [&](int v, int k) { return vm.x[static_cast<size_t>(v)][static_cast<size_t>(k - 1)]; };

  for (int a = 0; a < m; ++a) model.objective.terms.emplace_back(vm.r[static_cast<size_t>(a)], w.rev);
  for (int a = 0; a < m; ++a)
    for (int id : vm.z[static_cast<size_t>(a)]) model.objective.terms.emplace_back(id, w.len);
  model.objective.terms.emplace_back(vm.width_var, w.wid);
  model.objective.offset = w.len * static_cast<double>(m);

  detail::RowBuilder row;

  // each vertex gets exactly one layer
  for (int v = 0; v < n; ++v) {
    for (int k = 1; k <= h; ++k) row.add(x(v, k), 1.0);
    row.emit(model, "asg_" + std::to_string(v), Sense::EQ, 1.0);
  }
  // adjacent vertices on different layers
  for (int a = 0; a < m; ++a)
    for (int k = 1; k <= h; ++k) {
      row.add(x(g.arc(a).tail, k), 1.0);
      row.add(x(g.arc(a).head, k), 1.0);
      row.emit(model, "ns_" + std::to_string(a) + "_" + std::to_string(k), Sense::LE, 1.0);
    }
  // r forced to 1 when the tail sits above the head
  for (int a = 0; a < m; ++a)
    for (int k = 1; k <= h; ++k) {
      row.add(x(g.arc(a).tail, k), 1.0);
      for (int l = k; l <= h; ++l) row.add(x(g.arc(a).head, l), -1.0);
      row.add(vm.r[static_cast<size_t>(a)], -1.0);
      row.emit(model, "rev_" + std::to_string(a) + "_" + std::to_string(k), Sense::LE, 0.0);
    }
  // width caps: boundary layers carry no dummies
  for (int k : {1, h}) {
    for (int v = 0; v < n; ++v) row.add(x(v, k), g.vertex_width(v));
    row.add(vm.width_var, -1.0);
    row.emit(model, "wid_" + std::to_string(k), Sense::LE, 0.0);
    if (h == 1) break;
  }
  for (int k = 2; k <= h - 1; ++k) {
    for (int v = 0; v < n; ++v) row.add(x(v, k), g.vertex_width(v));
    for (int a = 0; a < m; ++a) row.add(vm.z[static_cast<size_t>(a)][static_cast<size_t>(k - 2)], 1.0);
    row.add(vm.width_var, -1.0);
    row.emit(model, "wid_" + std::to_string(k), Sense::LE, 0.0);
  }
  // dummy linking, both orientations
  for (int a = 0; a < m; ++a)
    for (int k = 2; k <= h - 1; ++k) {
      int zid = vm.z[static_cast<size_t>(a)][static_cast<size_t>(k - 2)];
      for (int l = 1; l < k; ++l) row.add(x(g.arc(a).head, l), 1.0);
      for (int l = 1; l <= k; ++l) row.add(x(g.arc(a).tail, l), -1.0);
      row.add(zid, -1.0);
      row.emit(model, "dm1_" + std::to_string(a) + "_" + std::to_string(k), Sense::LE, 0.0);
      for (int l = 1; l < k; ++l) row.add(x(g.arc(a).tail, l), 1.0);
      for (int l = 1; l <= k; ++l) row.add(x(g.arc(a).head, l), -1.0);
      row.add(zid, -1.0);
      row.emit(model, "dm2_" + std::to_string(a) + "_" + std::to_string(k), Sense::LE, 0.0);
    }
  if (anchor) {
    for (int v = 0; v < n; ++v) row.add(x(v, 1), 1.0);
    row.emit(model, "anchor", Sense::GE, 1.0);
  }
  model.check_well_formed();
  return out;
}

namespace detail {

// Shared CGL/MML construction over the reduced ordering variables
// y_below[v][k] = [l(v) < k], k in [2, H]. The companion indicators
// [l(v) > k] are 1 - y_below[v][k+1] with y_below[v][1] == 0 and
// y_below[v][H+1] == 1 folded in as constants.
inline BuildResult build_ordering_model(const DiGraph& g, int height, const Weights& w,
                                        bool anchor, bool with_dummies, bool signed_lengths,
                                        bool abs_length_vars) {
  check_build_pre(g, height);
  const int n = g.num_vertices();
  const int m = g.num_arcs();
  const int h = height;

  BuildResult out;
  MilpModel& model = out.model;
  VarMap& vm = out.vmap;
  vm.kind = with_dummies ? ModelKind::Cgl : ModelKind::Mml;
  vm.signed_lengths = signed_lengths;
  vm.n = n;
  vm.height = h;

  vm.y_below.assign(static_cast<size_t>(n), {});
  for (int v = 0; v < n; ++v)
    for (int k = 2; k <= h; ++k)
      vm.y_below[static_cast<size_t>(v)].push_back(
          model.add_binary("y_" + std::to_string(v) + "_" + std::to_string(k)));
  declare_arc_vars(model, vm, g, h, /*with_z=*/with_dummies);
  vm.width_var =
      model.add_continuous(with_dummies ? "W" : "Wr", 0.0, std::numeric_limits<double>::infinity());
  if (abs_length_vars) {
    std::map<std::string, int> used;
    for (int a = 0; a < m; ++a)
      vm.l_abs.push_back(model.add_continuous(arc_var_name("l", g, a, used), 0.0,
                                              std::numeric_limits<double>::infinity()));
  }
  vm.var_count = static_cast<int>(model.vars.size());

  // yb(v,k) as a (var, coeff-or-constant) pair: k <= 1 is the constant 0,
  // k >= H+1 the constant 1.
  auto yb_var = [&](int v, int k) -> int {
    if (k <= 1 || k >= h + 1) return -1;
    return vm.y_below_id(v, k);
  };
  auto yb_const = [&](int k) -> double { return k >= h + 1 ? 1.0 : 0.0; };

  detail::RowBuilder row;
  auto add_yb = [&](int v, int k, double coeff) {
    int id = yb_var(v, k);
    if (id >= 0)
      row.add(id, coeff);
    else
      row.add_const(coeff * yb_const(k));
  };

  // objective
  for (int a = 0; a < m; ++a) model.objective.terms.emplace_back(vm.r[static_cast<size_t>(a)], w.rev);
  if (with_dummies) {
    for (int a = 0; a < m; ++a)
      for (int id : vm.z[static_cast<size_t>(a)]) model.objective.terms.emplace_back(id, w.len);
    model.objective.offset = w.len * static_cast<double>(m);
  } else if (signed_lengths) {
    // sum over arcs of l(head) - l(tail), expressed through the y indicators;
    // net coefficient of y_below[v][k] is w_len * (outdeg(v) - indeg(v))
    std::vector<long long> net(static_cast<size_t>(n), 0);
    for (const Arc& a : g.arcs()) {
      ++net[static_cast<size_t>(a.tail)];
      --net[static_cast<size_t>(a.head)];
    }
    for (int v = 0; v < n; ++v)
      if (net[static_cast<size_t>(v)] != 0)
        for (int k = 2; k <= h; ++k)
          model.objective.terms.emplace_back(vm.y_below_id(v, k),
                                             w.len * static_cast<double>(net[static_cast<size_t>(v)]));
  } else {
    for (int a = 0; a < m; ++a) model.objective.terms.emplace_back(vm.l_abs[static_cast<size_t>(a)], w.len);
  }
  model.objective.terms.emplace_back(vm.width_var, w.wid);

  // monotone order indicators: below k implies below k+1
  for (int v = 0; v < n; ++v)
    for (int k = 2; k <= h - 1; ++k) {
      add_yb(v, k, 1.0);
      add_yb(v, k + 1, -1.0);
      row.emit(model, "trn_" + std::to_string(v) + "_" + std::to_string(k), Sense::LE, 0.0);
    }

  // arc consistency: r = 0 forces the tail strictly below the head, r = 1
  // strictly above. Jointly the two families forbid shared layers.
  for (int a = 0; a < m; ++a) {
    const int u = g.arc(a).tail, v = g.arc(a).head;
    const int rid = vm.r[static_cast<size_t>(a)];
    for (int k = 1; k <= h; ++k) {
      // forward case: l(v) <= k implies l(u) < k unless reversed
      add_yb(v, k + 1, 1.0);
      add_yb(u, k, -1.0);
      row.add(rid, -1.0);
      row.emit(model, "fc_" + std::to_string(a) + "_" + std::to_string(k), Sense::LE, 0.0);
      // reversed case: l(u) <= k implies l(v) < k when r = 1
      add_yb(u, k + 1, 1.0);
      add_yb(v, k, -1.0);
      row.add(rid, 1.0);
      row.emit(model, "rc_" + std::to_string(a) + "_" + std::to_string(k), Sense::LE, 1.0);
    }
  }

  if (with_dummies) {
    // dummy linking for both orientations of a traversing arc
    for (int a = 0; a < m; ++a) {
      const int u = g.arc(a).tail, v = g.arc(a).head;
      for (int k = 2; k <= h - 1; ++k) {
        int zid = vm.z[static_cast<size_t>(a)][static_cast<size_t>(k - 2)];
        add_yb(v, k, 1.0);
        add_yb(u, k + 1, -1.0);
        row.add(zid, -1.0);
        row.emit(model, "dm1_" + std::to_string(a) + "_" + std::to_string(k), Sense::LE, 0.0);
        add_yb(u, k, 1.0);
        add_yb(v, k + 1, -1.0);
        row.add(zid, -1.0);
        row.emit(model, "dm2_" + std::to_string(a) + "_" + std::to_string(k), Sense::LE, 0.0);
      }
    }
  } else if (abs_length_vars) {
    // absolute arc lengths: l_a >= |sum_k yb(u,k) - yb(v,k)|
    for (int a = 0; a < m; ++a) {
      const int u = g.arc(a).tail, v = g.arc(a).head;
      for (int sign : {+1, -1}) {
        for (int k = 2; k <= h; ++k) {
          add_yb(u, k, sign * 1.0);
          add_yb(v, k, sign * -1.0);
        }
        row.add(vm.l_abs[static_cast<size_t>(a)], -1.0);
        row.emit(model,
                 std::string(sign > 0 ? "al1_" : "al2_") + std::to_string(a), Sense::LE, 0.0);
      }
    }
  }

  // width caps; layer-k membership is yb(v,k+1) - yb(v,k)
  for (int k = 1; k <= h; ++k) {
    const bool interior = with_dummies && k >= 2 && k <= h - 1;
    for (int v = 0; v < n; ++v) {
      add_yb(v, k + 1, g.vertex_width(v));
      add_yb(v, k, -g.vertex_width(v));
    }
    if (interior)
      for (int a = 0; a < m; ++a) row.add(vm.z[static_cast<size_t>(a)][static_cast<size_t>(k - 2)], 1.0);
    row.add(vm.width_var, -1.0);
    row.emit(model, "wid_" + std::to_string(k), Sense::LE, 0.0);
  }

  // at least one vertex on layer 1
  if (anchor && h >= 2) {
    for (int v = 0; v < n; ++v) add_yb(v, 2, 1.0);
    row.emit(model, "anchor", Sense::GE, 1.0);
  }
  model.check_well_formed();
  return out;
}

}  // namespace detail

// Ordering-based formulation, built in reduced form: only the "below"
// indicators are materialized, the boundary fixings and coupling equalities
// are substituted away.
inline BuildResult build_cgl(const DiGraph& g, int height, const Weights& w, bool anchor) {
  return detail::build_ordering_model(g, height, w, anchor, /*with_dummies=*/true,
                                      /*signed_lengths=*/false, /*abs_length_vars=*/false);
}

// Min+max length variant: no dummy variables, width counts real vertices
// only. With signed_lengths the objective maximizes reversed-arc lengths via
// the signed sum; otherwise explicit absolute-length variables are added.
inline BuildResult build_mml(const DiGraph& g, int height, const Weights& w, bool anchor,
                             bool signed_lengths) {
  return detail::build_ordering_model(g, height, w, anchor, /*with_dummies=*/false,
                                      signed_lengths, /*abs_length_vars=*/!signed_lengths);
}

// Unreduced ordering model kept for differential testing: both indicator
// families are explicit together with their boundary and coupling rows.
inline BuildResult build_cgl_unreduced(const DiGraph& g, int height, const Weights& w,
                                       bool anchor) {
  detail::check_build_pre(g, height);
  const int n = g.num_vertices();
  const int m = g.num_arcs();
  const int h = height;

  BuildResult out;
  MilpModel& model = out.model;
  VarMap& vm = out.vmap;
  vm.kind = ModelKind::Cgl;
  vm.reduced = false;
  vm.n = n;
  vm.height = h;

  vm.y_below.assign(static_cast<size_t>(n), {});
  vm.y_above.assign(static_cast<size_t>(n), {});
  for (int v = 0; v < n; ++v)
    for (int k = 1; k <= h; ++k)
      vm.y_below[static_cast<size_t>(v)].push_back(
          model.add_binary("yb_" + std::to_string(v) + "_" + std::to_string(k)));
  for (int v = 0; v < n; ++v)
    for (int k = 1; k <= h; ++k)
      vm.y_above[static_cast<size_t>(v)].push_back(
          model.add_binary("ya_" + std::to_string(v) + "_" + std::to_string(k)));
  detail::declare_arc_vars(model, vm, g, h, /*with_z=*/true);
  vm.width_var = model.add_continuous("W", 0.0, std::numeric_limits<double>::infinity());
  vm.var_count = static_cast<int>(model.vars.size());

  auto yb = [&](int v, int k) { return vm.y_below[static_cast<size_t>(v)][static_cast<size_t>(k - 1)]; };
  auto ya = [&](int v, int k) { return vm.y_above[static_cast<size_t>(v)][static_cast<size_t>(k - 1)]; };

  for (int a = 0; a < m; ++a) model.objective.terms.emplace_back(vm.r[static_cast<size_t>(a)], w.rev);
  for (int a = 0; a < m; ++a)
    for (int id : vm.z[static_cast<size_t>(a)]) model.objective.terms.emplace_back(id, w.len);
  model.objective.terms.emplace_back(vm.width_var, w.wid);
  model.objective.offset = w.len * static_cast<double>(m);

  detail::RowBuilder row;
  for (int v = 0; v < n; ++v) {
    row.add(yb(v, 1), 1.0);
    row.emit(model, "b1_" + std::to_string(v), Sense::EQ, 0.0);
    row.add(ya(v, h), 1.0);
    row.emit(model, "aH_" + std::to_string(v), Sense::EQ, 0.0);
    for (int k = 1; k <= h - 1; ++k) {
      row.add(ya(v, k), 1.0);
      row.add(yb(v, k + 1), 1.0);
      row.emit(model, "cp_" + std::to_string(v) + "_" + std::to_string(k), Sense::EQ, 1.0);
    }
    for (int k = 1; k <= h - 2; ++k) {
      row.add(ya(v, k + 1), 1.0);
      row.add(ya(v, k), -1.0);
      row.emit(model, "trn_" + std::to_string(v) + "_" + std::to_string(k), Sense::LE, 0.0);
    }
  }
  for (int a = 0; a < m; ++a) {
    const int u = g.arc(a).tail, v = g.arc(a).head;
    const int rid = vm.r[static_cast<size_t>(a)];
    for (int k = 1; k <= h; ++k) {
      row.add(yb(u, k), -1.0);
      row.add(ya(v, k), -1.0);
      row.add(rid, -1.0);
      row.emit(model, "fc_" + std::to_string(a) + "_" + std::to_string(k), Sense::LE, -1.0);
      row.add(ya(u, k), -1.0);
      row.add(yb(v, k), -1.0);
      row.add(rid, 1.0);
      row.emit(model, "rc_" + std::to_string(a) + "_" + std::to_string(k), Sense::LE, 0.0);
    }
    for (int k = 2; k <= h - 1; ++k) {
      int zid = vm.z[static_cast<size_t>(a)][static_cast<size_t>(k - 2)];
      row.add(ya(u, k), 1.0);
      row.add(yb(v, k), 1.0);
      row.add(zid, -1.0);
      row.emit(model, "dm1_" + std::to_string(a) + "_" + std::to_string(k), Sense::LE, 1.0);
      row.add(ya(v, k), 1.0);
      row.add(yb(u, k), 1.0);
      row.add(zid, -1.0);
      row.emit(model, "dm2_" + std::to_string(a) + "_" + std::to_string(k), Sense::LE, 1.0);
    }
  }
  for (int k = 1; k <= h; ++k) {
    double total = 0.0;
    for (int v = 0; v < n; ++v) {
      total += g.vertex_width(v);
      row.add(yb(v, k), -g.vertex_width(v));
      row.add(ya(v, k), -g.vertex_width(v));
    }
    if (k >= 2 && k <= h - 1)
      for (int a = 0; a < m; ++a) row.add(vm.z[static_cast<size_t>(a)][static_cast<size_t>(k - 2)], 1.0);
    row.add(vm.width_var, -1.0);
    row.emit(model, "wid_" + std::to_string(k), Sense::LE, -total);
  }
  if (anchor) {
    for (int v = 0; v < n; ++v) row.add(ya(v, 1), 1.0);
    row.emit(model, "anchor", Sense::LE, static_cast<double>(n - 1));
  }
  model.check_well_formed();
  return out;
}

// Full variable assignment for a feasible layering. Width variables take the
// layering's actual (real or dummy-inclusive) width, length variables the
// actual lengths, so the resulting point is feasible and objective-minimal
// among assignments extending this layering.
inline std::vector<double> encode_layering(const DiGraph& g, const VarMap& vm, const Layering& l) {
  require_valid(g, l);
  if (l.height != vm.height || static_cast<int>(l.layer_of.size()) != vm.n)
    throw Error("encode_layering: layering shape does not match model");
  std::vector<double> vals(static_cast<size_t>(vm.var_count), 0.0);

  if (vm.kind == ModelKind::Ext) {
    for (int v = 0; v < vm.n; ++v)
      vals[static_cast<size_t>(vm.x[static_cast<size_t>(v)][static_cast<size_t>(l.layer(v) - 1)])] = 1.0;
  } else {
    for (int v = 0; v < vm.n; ++v)
      for (int k = vm.y_k0(); k <= vm.height; ++k)
        vals[static_cast<size_t>(vm.y_below_id(v, k))] = l.layer(v) < k ? 1.0 : 0.0;
    if (!vm.reduced)
      for (int v = 0; v < vm.n; ++v)
        for (int k = 1; k <= vm.height; ++k)
          vals[static_cast<size_t>(vm.y_above[static_cast<size_t>(v)][static_cast<size_t>(k - 1)])] =
              l.layer(v) > k ? 1.0 : 0.0;
  }
  for (int a = 0; a < g.num_arcs(); ++a) {
    int lu = l.layer(g.arc(a).tail), lv = l.layer(g.arc(a).head);
    vals[static_cast<size_t>(vm.r[static_cast<size_t>(a)])] = lu > lv ? 1.0 : 0.0;
    if (!vm.z.empty())
      for (int k = 2; k <= vm.height - 1; ++k) {
        bool traverses = std::min(lu, lv) < k && k < std::max(lu, lv);
        vals[static_cast<size_t>(vm.z[static_cast<size_t>(a)][static_cast<size_t>(k - 2)])] =
            traverses ? 1.0 : 0.0;
      }
    if (!vm.l_abs.empty())
      vals[static_cast<size_t>(vm.l_abs[static_cast<size_t>(a)])] = std::abs(lu - lv);
  }
  LayeringMetrics mt = metrics(g, l);
  vals[static_cast<size_t>(vm.width_var)] = vm.kind == ModelKind::Mml ? mt.real_width : mt.width;
  return vals;
}

struct CheckResult {
  bool feasible = true;
  double objective = 0.0;
  int first_violated_row = -1;
};

// Exact row-by-row evaluation of an assignment. Coefficients and encoded
// values are integral in the unit-width default setup, so sums are exact in
// doubles; eps covers custom real-valued vertex widths.
inline CheckResult check_assignment(const MilpModel& model, const std::vector<double>& values,
                                    double eps = 1e-9) {
  if (values.size() != model.vars.size())
    throw Error("check_assignment: value count does not match model");
  CheckResult out;
  for (size_t i = 0; i < model.vars.size(); ++i) {
    const MilpVariable& v = model.vars[i];
    if (values[i] < v.lower - eps || values[i] > v.upper + eps) {
      out.feasible = false;
      out.first_violated_row = -1;
      return out;
    }
  }
  for (int r = 0; r < static_cast<int>(model.rows.size()); ++r) {
    const MilpConstraint& row = model.rows[static_cast<size_t>(r)];
    double lhs = 0.0;
    for (const auto& [id, c] : row.terms) lhs += c * values[static_cast<size_t>(id)];
    bool ok = row.sense == Sense::LE   ? lhs <= row.rhs + eps
              : row.sense == Sense::GE ? lhs >= row.rhs - eps
                                       : std::abs(lhs - row.rhs) <= eps;
    if (!ok) {
      out.feasible = false;
      out.first_violated_row = r;
      return out;
    }
  }
  out.objective = model.objective.offset;
  for (const auto& [id, c] : model.objective.terms) out.objective += c * values[static_cast<size_t>(id)];
  return out;
}

// Layer assignment back out of a variable assignment. Throws when binaries
// are not within tol of integral or the assignment pattern is inconsistent.
inline Layering decode_solution(const VarMap& vm, const std::vector<double>& values,
                                double tol = 1e-6) {
  if (static_cast<int>(values.size()) != vm.var_count)
    throw Error("decode_solution: value count does not match model");
  auto as_bit = [&](int id) {
    double v = values[static_cast<size_t>(id)];
    double r = std::round(v);
    if (std::abs(v - r) > tol || (r != 0.0 && r != 1.0))
      throw Error("decode_solution: non-integral binary value " + std::to_string(v));
    return r == 1.0;
  };

  Layering l;
  l.height = vm.height;
  l.layer_of.assign(static_cast<size_t>(vm.n), 0);
  if (vm.kind == ModelKind::Ext) {
    for (int v = 0; v < vm.n; ++v) {
      int assigned = -1;
      for (int k = 1; k <= vm.height; ++k)
        if (as_bit(vm.x[static_cast<size_t>(v)][static_cast<size_t>(k - 1)])) {
          if (assigned >= 0) throw Error("decode_solution: vertex assigned to two layers");
          assigned = k;
        }
      if (assigned < 0) throw Error("decode_solution: vertex assigned to no layer");
      l.layer_of[static_cast<size_t>(v)] = assigned;
    }
  } else {
    for (int v = 0; v < vm.n; ++v) {
      int below = 0;
      for (int k = vm.y_k0(); k <= vm.height; ++k)
        if (as_bit(vm.y_below_id(v, k))) ++below;
      l.layer_of[static_cast<size_t>(v)] = vm.height - below;
      if (l.layer_of[static_cast<size_t>(v)] < 1)
        throw Error("decode_solution: order indicators out of range");
    }
  }
  return l;
}

// Bridge-facing variant: additionally insists the decoded layering is
// feasible for the instance (anything else signals a solver or bridge fault).
inline Layering decode_and_validate(const DiGraph& g, const VarMap& vm,
                                    const std::vector<double>& values, double tol = 1e-6) {
  Layering l = decode_solution(vm, values, tol);
  auto violations = validate(g, l);
  if (!violations.empty())
    throw Error("decoded layering is infeasible: " + violations.front().what);
  return l;
}

}  // namespace complay
