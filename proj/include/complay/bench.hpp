#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "complay/bounds.hpp"
#include "complay/graph.hpp"
#include "complay/layering.hpp"
#include "complay/milp.hpp"
#include "complay/solve.hpp"

namespace complay {

struct BenchRow {
  std::string instance;
  int n = 0;
  int m = 0;
  std::string model;
  std::string engine;
  std::string status;
  double time_s = 0.0;
  bool has_metrics = false;
  double width = 0.0;
  double real_width = 0.0;
  long long len = 0;
  long long rev = 0;
  double est_ar = 0.0;
};

struct BenchConfig {
  std::vector<ModelKind> models{ModelKind::Cgl};
  Engine engine = Engine::Bnb;
  double time_limit_seconds = 600.0;
  int jobs = 1;
  bool report_time = true;  // false freezes the time_s column to 0.000
  std::optional<int> height_override;
  std::optional<Weights> weights_override;
  std::string external_cmd;
  std::string work_dir;
  int oracle_vertex_cap = 10;
  bool anchor = true;  // used by the external path
};

namespace detail {

inline std::string fmt_double(double v, const char* fmt = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return std::string(buf);
}

inline BenchRow bench_one(const std::filesystem::path& file, ModelKind model,
                          const BenchConfig& cfg) {
  BenchRow row;
  row.instance = file.filename().string();
  row.model = to_string(model);
  row.engine = to_string(cfg.engine);
  DiGraph g;
  try {
    std::ifstream in(file);
    if (!in) throw Error("cannot open file");
    g = parse_edge_list(in);
  } catch (const Error&) {
    row.status = "Error";
    return row;
  }
  row.n = g.num_vertices();
  row.m = g.num_arcs();

  const int h = cfg.height_override.value_or(default_height(g.num_vertices()));
  const Weights w = cfg.weights_override.value_or(Weights::defaults(g.num_arcs(), h));
  const ObjectiveKind kind =
      model == ModelKind::Mml ? ObjectiveKind::MmlSigned : ObjectiveKind::Cglp;

  SolveConfig scfg;
  scfg.time_limit_seconds = cfg.time_limit_seconds;
  scfg.engine = cfg.engine;
  scfg.external_cmd = cfg.external_cmd;
  scfg.work_dir = cfg.work_dir;
  scfg.oracle_vertex_cap = cfg.oracle_vertex_cap;

  SolveResult res;
  try {
    switch (cfg.engine) {
      case Engine::Oracle:
        res = brute_force(g, h, kind, w, scfg);
        break;
      case Engine::Bnb:
        res = branch_and_bound(g, h, kind, w, scfg);
        break;
      case Engine::External: {
        BuildResult built = model == ModelKind::Ext ? build_ext(g, h, w, cfg.anchor)
                            : model == ModelKind::Cgl
                                ? build_cgl(g, h, w, cfg.anchor)
                                : build_mml(g, h, w, cfg.anchor, /*signed_lengths=*/true);
        res = invoke_external(g, built.model, built.vmap, w, scfg);
        break;
      }
    }
  } catch (const Error&) {
    row.status = "Error";
    return row;
  }

  row.status = to_string(res.status);
  row.time_s = res.wall_seconds;
  if (res.layering) {
    LayeringMetrics mt = metrics(g, *res.layering);  // never trust solver output
    row.has_metrics = true;
    row.width = mt.width;
    row.real_width = mt.real_width;
    row.len = mt.total_length;
    row.rev = mt.reversed;
    row.est_ar = mt.est_aspect_ratio;
  }
  return row;
}

}  // namespace detail

// Solves every instance in a directory with every requested model. Rows come
// back in (instance, model) order no matter how many workers ran; a broken
// instance yields an Error row and the batch continues.
inline std::vector<BenchRow> run_bench(const std::filesystem::path& dir, const BenchConfig& cfg) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    if (!name.empty() && name[0] != '.') files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  struct Task {
    fs::path file;
    ModelKind model;
  };
  std::vector<Task> tasks;
  for (const auto& f : files)
    for (ModelKind mk : cfg.models) tasks.push_back({f, mk});

  std::vector<BenchRow> rows(tasks.size());
  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    for (size_t i = 0; i < tasks.size(); ++i)
      rows[i] = detail::bench_one(tasks[i].file, tasks[i].model, cfg);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<size_t>(jobs));
    for (int t = 0; t < jobs; ++t)
      workers.emplace_back([&] {
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= tasks.size()) return;
          rows[i] = detail::bench_one(tasks[i].file, tasks[i].model, cfg);
        }
      });
    for (auto& th : workers) th.join();
  }
  if (!cfg.report_time)
    for (auto& r : rows) r.time_s = 0.0;
  return rows;
}

inline constexpr const char* kBenchCsvHeader = "instance,n,m,model,engine,status,time_s,W,Wr,len,rev,est_ar";

inline std::string rows_to_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << kBenchCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.instance << ',' << r.n << ',' << r.m << ',' << r.model << ',' << r.engine << ','
        << r.status << ',' << detail::fmt_double(r.time_s, "%.3f") << ',';
    if (r.has_metrics) {
      out << detail::fmt_double(r.width) << ',' << detail::fmt_double(r.real_width) << ',' << r.len
          << ',' << r.rev << ',' << detail::fmt_double(r.est_ar);
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
  return out.str();
}

struct BinStat {
  int lo = 0;  // inclusive
  int hi = 0;  // exclusive
  std::string model;
  int count = 0;
  double n_mean = 0, n_sd = 0;
  double m_mean = 0, m_sd = 0;
  double w_mean = 0, w_sd = 0;
  double len_mean = 0, len_sd = 0;
  double rev_mean = 0, rev_sd = 0;
};

struct Summary {
  int bin_width = 15;
  int origin = 15;
  std::vector<BinStat> bins;  // sorted by (lo, model)
};

namespace detail {

struct Accum {
  std::vector<double> vals;
  void add(double v) { vals.push_back(v); }
  double mean() const {
    if (vals.empty()) return 0.0;
    double s = 0.0;
    for (double v : vals) s += v;
    return s / static_cast<double>(vals.size());
  }
  // population standard deviation; the convention is recorded in every output
  double sd() const {
    if (vals.empty()) return 0.0;
    double mu = mean(), s = 0.0;
    for (double v : vals) s += (v - mu) * (v - mu);
    return std::sqrt(s / static_cast<double>(vals.size()));
  }
};

inline long long floor_div(long long a, long long b) {
  long long q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

}  // namespace detail

// Bins rows by vertex count ([origin + i*w, origin + (i+1)*w)) and reports
// per bin and model the instance count plus mean / population-sd of n, m, W,
// total length, and reversed arcs. Rows without metrics are skipped.
inline Summary summarize(const std::vector<BenchRow>& rows, int bin_width = 15, int origin = 15) {
  if (rows.empty()) throw Error("summarize: no rows");
  if (bin_width < 1) throw Error("summarize: bin width must be positive");
  struct Key {
    long long bin;
    std::string model;
    bool operator<(const Key& o) const {
      return bin != o.bin ? bin < o.bin : model < o.model;
    }
  };
  struct Cell {
    detail::Accum n, m, w, len, rev;
  };
  std::map<Key, Cell> cells;
  for (const auto& r : rows) {
    if (!r.has_metrics) continue;
    long long bin = detail::floor_div(r.n - origin, bin_width);
    Cell& c = cells[Key{bin, r.model}];
    c.n.add(r.n);
    c.m.add(r.m);
    c.w.add(r.width);
    c.len.add(static_cast<double>(r.len));
    c.rev.add(static_cast<double>(r.rev));
  }
  Summary s;
  s.bin_width = bin_width;
  s.origin = origin;
  for (const auto& [key, cell] : cells) {
    BinStat b;
    b.lo = origin + static_cast<int>(key.bin) * bin_width;
    b.hi = b.lo + bin_width;
    b.model = key.model;
    b.count = static_cast<int>(cell.n.vals.size());
    b.n_mean = cell.n.mean();
    b.n_sd = cell.n.sd();
    b.m_mean = cell.m.mean();
    b.m_sd = cell.m.sd();
    b.w_mean = cell.w.mean();
    b.w_sd = cell.w.sd();
    b.len_mean = cell.len.mean();
    b.len_sd = cell.len.sd();
    b.rev_mean = cell.rev.mean();
    b.rev_sd = cell.rev.sd();
    s.bins.push_back(std::move(b));
  }
  return s;
}

inline std::string summary_to_csv(const Summary& s) {
  std::ostringstream out;
  out << "# std-dev convention: population (divide by N)\n";
  out << "bin_lo,bin_hi,I,model,n_mean,n_sd,m_mean,m_sd,W_mean,W_sd,len_mean,len_sd,rev_mean,rev_sd\n";
  for (const auto& b : s.bins) {
    out << b.lo << ',' << b.hi << ',' << b.count << ',' << b.model << ','
        << detail::fmt_double(b.n_mean, "%.1f") << ',' << detail::fmt_double(b.n_sd, "%.1f") << ','
        << detail::fmt_double(b.m_mean, "%.1f") << ',' << detail::fmt_double(b.m_sd, "%.1f") << ','
        << detail::fmt_double(b.w_mean, "%.1f") << ',' << detail::fmt_double(b.w_sd, "%.1f") << ','
        << detail::fmt_double(b.len_mean, "%.1f") << ',' << detail::fmt_double(b.len_sd, "%.1f")
        << ',' << detail::fmt_double(b.rev_mean, "%.1f") << ','
        << detail::fmt_double(b.rev_sd, "%.1f") << '\n';
  }
  return out.str();
}

// Aligned text table in the layout of the appendix-style summary: one block
// per vertex-count bin, one line per model.
inline std::string summary_to_text(const Summary& s) {
  std::ostringstream out;
  out << "node_counts      I  n_avg         e_avg         model  W_avg         EL_avg         RE_avg\n";
  out << "(std-dev in brackets, population convention)\n";
  auto cell = [](double mean, double sd) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.1f [%.1f]", mean, sd);
    return std::string(buf);
  };
  auto pad = [](std::string v, size_t width) {
    if (v.size() < width) v.append(width - v.size(), ' ');
    return v;
  };
  for (const auto& b : s.bins) {
    char label[32];
    std::snprintf(label, sizeof(label), "[%d, %d)", b.lo, b.hi);
    out << pad(label, 15) << ' ' << pad(std::to_string(b.count), 4) << ' '
        << pad(cell(b.n_mean, b.n_sd), 13) << ' ' << pad(cell(b.m_mean, b.m_sd), 13) << ' '
        << pad(b.model, 6) << ' ' << pad(cell(b.w_mean, b.w_sd), 13) << ' '
        << pad(cell(b.len_mean, b.len_sd), 14) << ' ' << cell(b.rev_mean, b.rev_sd) << '\n';
  }
  return out.str();
}

}  // namespace complay
