#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "lrbound/errors.hpp"
#include "lrbound/model.hpp"

namespace lrbound {

// Model files are JSON keyed by interaction labels; entry order is
// irrelevant.  See README for the schema.
inline ModelSpec model_from_json(const nlohmann::json& j) {
  ModelSpec spec;
  if (!j.is_object()) fail(Errc::invalid_field, "model file must be a JSON object");

  std::string sc = j.value("system_class", "bounded");
  if (sc == "bounded")
    spec.system_class = SystemClass::bounded;
  else if (sc == "commutator-bounded")
    spec.system_class = SystemClass::commutator_bounded;
  else
    fail(Errc::invalid_field, "system_class '" + sc + "'");

  std::string gk = j.value("graph_kind", "lattice");
  if (gk == "lattice")
    spec.graph_kind = GraphKind::lattice;
  else if (gk == "homogeneous-isotropic")
    spec.graph_kind = GraphKind::homogeneous_isotropic;
  else
    fail(Errc::invalid_field, "graph_kind '" + gk + "'");

  if (!j.contains("interactions") || !j["interactions"].is_array())
    fail(Errc::invalid_field, "interactions: expected an array");
  for (const auto& it : j["interactions"]) {
    if (!it.contains("label") || !it["label"].is_string())
      fail(Errc::invalid_field, "interactions[].label");
    if (!it.contains("coupling") || !it["coupling"].is_number())
      fail(Errc::invalid_field, "interactions[].coupling");
    spec.interactions.push_back(
        {it["label"].get<std::string>(), it["coupling"].get<double>()});
  }
  const int m = spec.type_count();
  spec.table.assign(static_cast<std::size_t>(m) * m, Transition{});

  if (!j.contains("transitions") || !j["transitions"].is_array())
    fail(Errc::invalid_field, "transitions: expected an array");
  std::vector<char> seen(static_cast<std::size_t>(m) * m, 0);
  for (const auto& tj : j["transitions"]) {
    for (const char* key : {"from", "to"})
      if (!tj.contains(key) || !tj[key].is_string())
        fail(Errc::invalid_field, std::string("transitions[].") + key);
    int from = spec.find_label(tj["from"].get<std::string>());
    int to = spec.find_label(tj["to"].get<std::string>());
    if (from < 0)
      fail(Errc::invalid_field,
           "transitions[].from: unknown label '" + tj["from"].get<std::string>() + "'");
    if (to < 0)
      fail(Errc::invalid_field,
           "transitions[].to: unknown label '" + tj["to"].get<std::string>() + "'");
    if (seen[static_cast<std::size_t>(from) * m + to])
      fail(Errc::invalid_field, "duplicate transition " +
                                    tj["from"].get<std::string>() + "->" +
                                    tj["to"].get<std::string>());
    seen[static_cast<std::size_t>(from) * m + to] = 1;

    Transition tr;
    if (!tj.contains("n") || !tj["n"].is_number_integer())
      fail(Errc::invalid_field, "transitions[].n: expected an integer");
    tr.n = tj["n"].get<int>();
    if (!tj.contains("D") || !tj["D"].is_number())
      fail(Errc::invalid_field, "transitions[].D: expected a number");
    tr.distance = tj["D"].get<double>();
    if (tj.contains("K")) {
      if (!tj["K"].is_number()) fail(Errc::invalid_field, "transitions[].K");
      tr.commutator_bound = tj["K"].get<double>();
    }
    spec.transition(from, to) = tr;
  }
  return spec;
}

inline ModelSpec load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open model file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::invalid_field, "model file '" + path + "': " + e.what());
  }
  return validate(model_from_json(j));
}

}  // namespace lrbound
