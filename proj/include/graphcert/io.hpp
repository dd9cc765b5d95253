#pragma once

#include <fstream>

#include <json.hpp>

#include "graphcert/adversary.hpp"
#include "graphcert/selftest.hpp"

namespace graphcert {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline void check_schema(const json& j) {
  if (!j.contains("schema") || j["schema"] != kSchemaVersion)
    throw validation_error("unsupported or missing schema version");
}

// ---------------------------------------------------------------- graphs

inline json to_json(const Graph& g) {
  json j;
  j["vertices"] = g.vertices();
  json es = json::array();
  for (const auto& e : g.edges()) es.push_back({e.first, e.second});
  j["edges"] = es;
  return j;
}

inline Graph graph_from_json(const json& j) {
  std::vector<Vertex> vs = j.at("vertices").get<std::vector<Vertex>>();
  std::vector<Edge> es;
  for (const auto& e : j.at("edges"))
    es.push_back(make_edge(e.at(0).get<Vertex>(), e.at(1).get<Vertex>()));
  return Graph(std::move(vs), std::move(es));
}

inline json to_json(const InflatedGraph& ig) {
  json j;
  j["schema"] = kSchemaVersion;
  j["base"] = to_json(ig.base());
  j["d"] = ig.d();
  j["graph"] = to_json(ig.graph());
  json chains = json::array();
  for (const auto& [e, chain] : ig.chains()) {
    json c;
    c["edge"] = {e.first, e.second};
    c["vertices"] = chain;
    chains.push_back(c);
  }
  j["chains"] = chains;
  return j;
}

inline InflatedGraph inflated_from_json(const json& j) {
  check_schema(j);
  Graph base = graph_from_json(j.at("base"));
  Graph graph = graph_from_json(j.at("graph"));
  int d = j.at("d").get<int>();
  std::map<Edge, std::vector<Vertex>> chains;
  for (const auto& c : j.at("chains")) {
    Edge e = make_edge(c.at("edge").at(0).get<Vertex>(),
                       c.at("edge").at(1).get<Vertex>());
    chains[e] = c.at("vertices").get<std::vector<Vertex>>();
  }
  return InflatedGraph::from_parts(std::move(base), d, std::move(graph),
                                   std::move(chains));
}

// ------------------------------------------------------------ experiments

inline std::string setting_code(const Setting& s) {
  std::string b = basis_name(s.basis);
  return s.marginal ? "M" + b : b;
}

inline Setting setting_from_code(std::string c) {
  Setting s;
  if (!c.empty() && c[0] == 'M') {
    s.marginal = true;
    c = c.substr(1);
  }
  if (c == "X")
    s.basis = Basis::X;
  else if (c == "Y")
    s.basis = Basis::Y;
  else if (c == "Z")
    s.basis = Basis::Z;
  else if (c == "RZ")
    s.basis = Basis::Rz;
  else
    throw validation_error("bad setting code: " + c);
  return s;
}

inline json to_json(const Measurement& m) {
  json j;
  j["label"] = m.label;
  json settings = json::array();
  for (const auto& [v, s] : m.settings) settings.push_back({v, setting_code(s)});
  j["settings"] = settings;
  j["support"] = m.support;
  j["target"] = m.target;
  if (m.rz_vertex) j["rz_vertex"] = *m.rz_vertex;
  return j;
}

inline Measurement measurement_from_json(const json& j) {
  Measurement m;
  m.label = j.at("label").get<std::string>();
  for (const auto& s : j.at("settings"))
    m.settings[s.at(0).get<Vertex>()] =
        setting_from_code(s.at(1).get<std::string>());
  m.support = j.at("support").get<std::vector<Vertex>>();
  m.target = j.at("target").get<double>();
  if (j.contains("rz_vertex")) m.rz_vertex = j["rz_vertex"].get<Vertex>();
  return m;
}

inline json to_json(const ReferenceExperiment& re) {
  json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = kind_name(re.kind);
  j["d"] = re.comm_d;
  j["state_graph"] = to_json(re.state_graph);
  if (re.inflation) j["inflation"] = to_json(*re.inflation);
  json ms = json::array();
  for (const auto& m : re.measurements) ms.push_back(to_json(m));
  j["measurements"] = ms;
  json defl = json::array();
  for (const auto& [v, b] : re.deflation_settings)
    defl.push_back({v, std::string(1, letter_char(b))});
  j["deflation"] = defl;
  json meta;
  if (!re.cycle.empty()) meta["cycle"] = re.cycle;
  if (re.star_center >= 0) {
    meta["star_center"] = re.star_center;
    meta["star_leaves"] = re.star_leaves;
  }
  if (re.v_l >= 0) meta["v_l"] = re.v_l;
  if (re.v_c >= 0) meta["v_c"] = re.v_c;
  if (re.v_r >= 0) meta["v_r"] = re.v_r;
  if (re.v_m >= 0) meta["v_m"] = re.v_m;
  meta["pair_special"] = re.re3_pair_special;
  j["meta"] = meta;
  return j;
}

inline ReferenceExperiment re_from_json(const json& j) {
  check_schema(j);
  ReferenceExperiment re;
  re.kind = kind_from_name(j.at("kind").get<std::string>());
  re.comm_d = j.at("d").get<int>();
  re.state_graph = graph_from_json(j.at("state_graph"));
  if (j.contains("inflation")) re.inflation = inflated_from_json(j["inflation"]);
  for (const auto& m : j.at("measurements"))
    re.measurements.push_back(measurement_from_json(m));
  for (const auto& dsetting : j.at("deflation")) {
    std::string letter = dsetting.at(1).get<std::string>();
    PauliLetter l = letter == "X"   ? PauliLetter::X
                    : letter == "Y" ? PauliLetter::Y
                                    : PauliLetter::Z;
    re.deflation_settings[dsetting.at(0).get<Vertex>()] = l;
  }
  const json& meta = j.at("meta");
  if (meta.contains("cycle")) re.cycle = meta["cycle"].get<std::vector<Vertex>>();
  if (meta.contains("star_center")) {
    re.star_center = meta["star_center"].get<Vertex>();
    re.star_leaves = meta["star_leaves"].get<std::vector<Vertex>>();
  }
  if (meta.contains("v_l")) re.v_l = meta["v_l"].get<Vertex>();
  if (meta.contains("v_c")) re.v_c = meta["v_c"].get<Vertex>();
  if (meta.contains("v_r")) re.v_r = meta["v_r"].get<Vertex>();
  if (meta.contains("v_m")) re.v_m = meta["v_m"].get<Vertex>();
  re.re3_pair_special = meta.value("pair_special", false);
  return re;
}

// ----------------------------------------------------------------- reports

inline json to_json(const SelfTestReport& r) {
  json j;
  j["schema"] = kSchemaVersion;
  j["epsilon"] = r.epsilon;
  j["delta_bound"] = r.delta_bound;
  j["delta_measured"] = r.delta_measured;
  j["isometry_fidelity"] = r.isometry_fidelity;
  j["branch_probability"] = r.branch_probability;
  json anc;
  for (auto& [v, x] : r.anticommutator_norms) anc[std::to_string(v)] = x;
  j["anticommutator_norms"] = anc;
  j["script_residuals"] = r.script_residuals;
  json oc;
  for (auto& [v, x] : r.outcomes) oc[std::to_string(v)] = x;
  j["outcomes"] = oc;
  json pm;
  for (auto& [label, tv] : r.per_measurement)
    pm[label] = {{"target", tv.first}, {"measured", tv.second}};
  j["per_measurement"] = pm;
  j["verdict"] = r.pass ? "pass" : "fail";
  return j;
}

inline json to_json(const ParitySystem& sys, const Gf2Result& gf2) {
  json j;
  j["schema"] = kSchemaVersion;
  j["num_variables"] = sys.variables.size();
  j["num_constraints"] = sys.constraints.size();
  json vars = json::array();
  for (const auto& v : sys.variables) vars.push_back({v.vertex, v.view});
  j["variables"] = vars;
  json cs = json::array();
  for (const auto& c : sys.constraints)
    cs.push_back({{"label", c.label}, {"vars", c.vars}, {"parity", c.parity}});
  j["constraints"] = cs;
  j["feasible"] = gf2.feasible;
  if (gf2.feasible)
    j["assignment"] = gf2.assignment;
  else {
    json cert = json::array();
    for (int ci : gf2.certificate) cert.push_back(sys.constraints[ci].label);
    j["certificate"] = cert;
    j["certificate_indices"] = gf2.certificate;
  }
  return j;
}

// -------------------------------------------------------------------- files

inline json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw validation_error("cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw validation_error("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

inline void save_json(const json& j, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw validation_error("cannot open " + path + " for writing");
  f << j.dump(2) << "\n";
}

}  // namespace graphcert
