#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "complay/bounds.hpp"
#include "complay/graph.hpp"
#include "complay/layering.hpp"
#include "complay/milp.hpp"
#include "complay/solve.hpp"

namespace complay {

using Json = nlohmann::json;

inline Json layering_to_json(const Layering& l) {
  return Json{{"H", l.height}, {"layers", l.layer_of}};
}

inline Layering layering_from_json(const Json& j) {
  Layering l;
  if (!j.contains("H") || !j.contains("layers"))
    throw Error("layering JSON needs fields 'H' and 'layers'");
  l.height = j.at("H").get<int>();
  l.layer_of = j.at("layers").get<std::vector<int>>();
  return l;
}

inline Json metrics_to_json(const LayeringMetrics& m) {
  return Json{{"height_used", m.height_used}, {"W", m.width},          {"Wr", m.real_width},
              {"len", m.total_length},        {"rev", m.reversed},     {"dummies", m.dummy_count},
              {"est_ar", m.est_aspect_ratio}};
}

inline Json bounds_to_json(const HeightBounds& b) {
  return Json{{"default_h", b.default_h},
              {"degree_bound", b.degree_bound},
              {"spectral_lambda", b.spectral_lambda},
              {"spectral_bound", b.spectral_bound},
              {"perron_lower", b.perron_lower}};
}

// Debug export of the paper-symbol -> variable-name tables.
inline Json varmap_to_json(const MilpModel& model, const VarMap& vm) {
  auto name = [&](int id) { return model.vars[static_cast<size_t>(id)].name; };
  auto table2 = [&](const std::vector<std::vector<int>>& t) {
    Json out = Json::array();
    for (const auto& row : t) {
      Json r = Json::array();
      for (int id : row) r.push_back(name(id));
      out.push_back(r);
    }
    return out;
  };
  Json j{{"kind", to_string(vm.kind)},
         {"reduced", vm.reduced},
         {"n", vm.n},
         {"H", vm.height},
         {"width_var", vm.width_var >= 0 ? name(vm.width_var) : ""}};
  if (!vm.x.empty()) j["x"] = table2(vm.x);
  if (!vm.y_below.empty()) j["y_below"] = table2(vm.y_below);
  if (!vm.y_above.empty()) j["y_above"] = table2(vm.y_above);
  Json r = Json::array();
  for (int id : vm.r) r.push_back(name(id));
  j["r"] = r;
  if (!vm.z.empty()) j["z"] = table2(vm.z);
  if (!vm.l_abs.empty()) {
    Json lj = Json::array();
    for (int id : vm.l_abs) lj.push_back(name(id));
    j["l"] = lj;
  }
  return j;
}

}  // namespace complay
