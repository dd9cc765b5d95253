#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "graphcert/stabilizer.hpp"

namespace graphcert {

enum class Basis : std::uint8_t { X, Y, Z, Rz };

inline std::string basis_name(Basis b) {
  switch (b) {
    case Basis::X: return "X";
    case Basis::Y: return "Y";
    case Basis::Z: return "Z";
    case Basis::Rz: return "RZ";
  }
  return "?";
}

inline Basis basis_from_letter(PauliLetter l) {
  switch (l) {
    case PauliLetter::X: return Basis::X;
    case PauliLetter::Y: return Basis::Y;
    case PauliLetter::Z: return Basis::Z;
    default: throw validation_error("identity has no measurement basis");
  }
}

/// Per-vertex input. `marginal` records an input that is delivered and
/// broadcast but whose outcome is discarded.
struct Setting {
  Basis basis = Basis::X;
  bool marginal = false;
};

struct ObservableTerm {
  double coeff;
  PauliString op;
};

/// One full measurement together with the submeasurement it certifies: the
/// support holds the vertices whose outcomes enter the correlation, every
/// other vertex still receives an input.
struct Measurement {
  std::string label;
  std::map<Vertex, Setting> settings;
  std::vector<Vertex> support;
  double target = 0.0;
  std::optional<Vertex> rz_vertex;

  bool deterministic() const { return target == 1.0 || target == -1.0; }

  /// Pauli expansion of the submeasurement observable. An Rz site contributes
  /// (X + Y)/sqrt(2), so the observable is a two-term combination there.
  std::vector<ObservableTerm> observable_terms(const Graph& state_graph) const {
    PauliString base(state_graph.num_vertices());
    for (Vertex v : support) {
      if (rz_vertex && v == *rz_vertex) continue;
      base.set_letter(state_graph.index(v),
                      static_cast<PauliLetter>(
                          static_cast<int>(settings.at(v).basis) + 1));
    }
    if (!rz_vertex) return {{1.0, base}};
    double w = 1.0 / std::sqrt(2.0);
    PauliString with_x = base, with_y = base;
    with_x.set_letter(state_graph.index(*rz_vertex), PauliLetter::X);
    with_y.set_letter(state_graph.index(*rz_vertex), PauliLetter::Y);
    return {{w, with_x}, {w, with_y}};
  }
};

enum class REKind { re0, re1, re2, re3, re4, re5 };

inline std::string kind_name(REKind k) {
  switch (k) {
    case REKind::re0: return "re0";
    case REKind::re1: return "re1";
    case REKind::re2: return "re2";
    case REKind::re3: return "re3";
    case REKind::re4: return "re4";
    case REKind::re5: return "re5";
  }
  return "?";
}

inline REKind kind_from_name(const std::string& s) {
  if (s == "re0") return REKind::re0;
  if (s == "re1") return REKind::re1;
  if (s == "re2") return REKind::re2;
  if (s == "re3") return REKind::re3;
  if (s == "re4") return REKind::re4;
  if (s == "re5") return REKind::re5;
  throw validation_error("unknown reference experiment kind: " + s);
}

struct ReferenceExperiment {
  REKind kind = REKind::re0;
  Graph state_graph;                       // graph whose graph state is prepared
  std::optional<InflatedGraph> inflation;  // present for RE 1-3
  int comm_d = 0;                          // classical communication distance
  std::vector<Measurement> measurements;
  std::map<Vertex, PauliLetter> deflation_settings;  // chain vertices only

  // kind-specific anchors
  std::vector<Vertex> cycle;          // RE 1 / RE 4 base triangle
  Vertex star_center = -1;            // RE 2 / RE 5
  std::vector<Vertex> star_leaves;    // RE 2 / RE 5
  Vertex v_l = -1, v_c = -1, v_r = -1;  // RE 0 line, RE 3 pair
  Vertex v_m = -1;                    // RE 3 middle chain vertex
  bool re3_pair_special = false;      // base graph is exactly one edge

  const Measurement& find(const std::string& label) const {
    for (const auto& m : measurements)
      if (m.label == label) return m;
    throw validation_error("no measurement labeled " + label);
  }
};

/// Everything vertex u learns in measurement m: its own input plus the inputs
/// broadcast from its distance-d neighborhood, keyed by vertex id.
inline std::string input_view(const ReferenceExperiment& re, const Measurement& m,
                              Vertex u) {
  std::ostringstream os;
  os << basis_name(m.settings.at(u).basis);
  for (Vertex w : re.state_graph.neighborhood(u, re.comm_d))
    os << "|" << w << ":" << basis_name(m.settings.at(w).basis);
  return os.str();
}

namespace detail_re {

using PadFn = std::function<Basis(Vertex)>;

inline Measurement make_measurement(const Graph& sg, std::string label,
                                    const PauliString& op, const PadFn& pad,
                                    std::optional<Vertex> rz = std::nullopt) {
  Measurement m;
  m.label = std::move(label);
  m.rz_vertex = rz;
  for (Vertex v : sg.vertices()) {
    PauliLetter l = op.letter(sg.index(v));
    if (rz && v == *rz) {
      m.settings[v] = {Basis::Rz, false};
      m.support.push_back(v);
    } else if (l != PauliLetter::I) {
      m.settings[v] = {basis_from_letter(l), false};
      m.support.push_back(v);
    } else {
      m.settings[v] = {pad(v), true};
    }
  }
  return m;
}

inline void set_oracle_target(const StabilizerTableau& tab, const Graph& sg,
                              Measurement& m, double expected, double tol) {
  double value = 0;
  for (const auto& t : m.observable_terms(sg))
    value += t.coeff * tab.expectation(t.op);
  if (std::abs(value - expected) > tol)
    throw std::logic_error("target validation failed for " + m.label +
                           ": oracle " + std::to_string(value) + ", expected " +
                           std::to_string(expected));
  m.target = value;
}

inline PadFn pad_x() {
  return [](Vertex) { return Basis::X; };
}

/// X padding with Y on the listed vertices (the if-identity exception used by
/// RE 2 around v_c and RE 3 around v_m).
inline PadFn pad_x_with_y(std::vector<Vertex> ys) {
  return [ys = std::move(ys)](Vertex v) {
    return std::find(ys.begin(), ys.end(), v) != ys.end() ? Basis::Y : Basis::X;
  };
}

}  // namespace detail_re

// -------------------------------------------------------------------------
// RE 0: line of three vertices, no communication (d = 0).

inline ReferenceExperiment build_re0(const Graph& g, const Line3& line) {
  if (!g.has_edge(line.left, line.center) || !g.has_edge(line.center, line.right) ||
      g.has_edge(line.left, line.right))
    throw validation_error("line is not an induced path of three vertices");

  ReferenceExperiment re;
  re.kind = REKind::re0;
  re.state_graph = g;
  re.comm_d = 0;
  re.v_l = line.left;
  re.v_c = line.center;
  re.v_r = line.right;

  StabilizerTableau tab = tableau_from_graph(g);
  auto pad = detail_re::pad_x();

  for (Vertex u : g.vertices()) {
    auto m = detail_re::make_measurement(g, "g[" + std::to_string(u) + "]",
                                         generator(g, u), pad);
    detail_re::set_oracle_target(tab, g, m, 1.0, 0.0);
    re.measurements.push_back(std::move(m));
  }
  for (Vertex v : g.neighbors(line.center)) {
    PauliString op = generator(g, line.center) * generator(g, v);
    auto m = detail_re::make_measurement(g, "M[" + std::to_string(v) + "]", op, pad);
    detail_re::set_oracle_target(tab, g, m, 1.0, 0.0);
    re.measurements.push_back(std::move(m));
  }
  PauliString op = generator(g, line.left) * generator(g, line.center) *
                   generator(g, line.right);
  auto m = detail_re::make_measurement(g, "M[vc]", op, pad);
  detail_re::set_oracle_target(tab, g, m, -1.0, 0.0);
  re.measurements.push_back(std::move(m));
  return re;
}

// -------------------------------------------------------------------------
// RE 1: odd induced circular subgraph of the base graph.

inline ReferenceExperiment build_re1(const InflatedGraph& ig,
                                     const std::vector<Vertex>& cycle) {
  if (cycle.size() < 3 || cycle.size() % 2 == 0)
    throw validation_error("RE 1 needs an odd cycle of length >= 3");
  const Graph& base = ig.base();
  for (std::size_t i = 0; i < cycle.size(); ++i)
    for (std::size_t j = i + 1; j < cycle.size(); ++j) {
      bool adjacent = (j == i + 1) || (i == 0 && j == cycle.size() - 1);
      if (base.has_edge(cycle[i], cycle[j]) != adjacent)
        throw validation_error("cycle is not induced in the base graph");
    }

  ReferenceExperiment re;
  re.kind = REKind::re1;
  re.state_graph = ig.graph();
  re.inflation = ig;
  re.comm_d = ig.d();
  re.cycle = cycle;

  const Graph& sg = ig.graph();
  StabilizerTableau tab = tableau_from_graph(sg);
  auto pad = detail_re::pad_x();

  std::map<Vertex, PauliString> f;
  for (Vertex u : base.vertices()) f.emplace(u, inflated_generator(ig, u));

  for (Vertex u : base.vertices()) {
    auto m = detail_re::make_measurement(sg, "f[" + std::to_string(u) + "]",
                                         f.at(u), pad);
    detail_re::set_oracle_target(tab, sg, m, 1.0, 0.0);
    re.measurements.push_back(std::move(m));
  }

  PauliString c_vc = PauliString::identity(sg.num_vertices());
  for (Vertex v : cycle) c_vc = c_vc * f.at(v);
  {
    auto m = detail_re::make_measurement(sg, "C_Vc", c_vc, pad);
    detail_re::set_oracle_target(tab, sg, m, -1.0, 0.0);
    re.measurements.push_back(std::move(m));
  }

  for (Vertex u : cycle) {
    PauliString cu = h_operator(ig, u, cycle);
    for (Vertex v : cycle)
      if (v != u) cu = cu * f.at(v);
    for (Basis b : {Basis::X, Basis::Z}) {
      auto m = detail_re::make_measurement(
          sg, "C[" + std::to_string(u) + "](" + basis_name(b) + ")", cu, pad);
      if (!m.settings.at(u).marginal)
        throw std::logic_error("C_u unexpectedly supported on its own vertex");
      m.settings[u] = {b, true};
      detail_re::set_oracle_target(tab, sg, m, 1.0, 0.0);
      re.measurements.push_back(std::move(m));
    }
  }

  for (auto& [e, chain] : ig.chains())
    for (Vertex v : chain) re.deflation_settings[v] = PauliLetter::X;
  return re;
}

// -------------------------------------------------------------------------
// RE 2: induced star subgraph (two-leaf and many-leaf variants).

inline ReferenceExperiment build_re2(const InflatedGraph& ig, const Star& star) {
  const Graph& base = ig.base();
  if (star.leaves.size() < 2)
    throw validation_error("RE 2 needs at least two leaves");
  for (std::size_t i = 0; i < star.leaves.size(); ++i) {
    if (!base.has_edge(star.center, star.leaves[i]))
      throw validation_error("leaf is not adjacent to the star center");
    for (std::size_t j = i + 1; j < star.leaves.size(); ++j)
      if (base.has_edge(star.leaves[i], star.leaves[j]))
        throw validation_error("star leaves must be pairwise non-adjacent");
  }

  ReferenceExperiment re;
  re.kind = REKind::re2;
  re.state_graph = ig.graph();
  re.inflation = ig;
  re.comm_d = ig.d();
  re.star_center = star.center;

  const Graph& sg = ig.graph();
  StabilizerTableau tab = tableau_from_graph(sg);
  auto pad = detail_re::pad_x();
  std::vector<Vertex> center_nbrs = sg.neighbors(star.center);
  auto pad_y = detail_re::pad_x_with_y(center_nbrs);

  std::map<Vertex, PauliString> f;
  for (Vertex u : base.vertices()) f.emplace(u, inflated_generator(ig, u));

  for (Vertex u : base.vertices()) {
    auto m = detail_re::make_measurement(sg, "f[" + std::to_string(u) + "]",
                                         f.at(u), pad);
    detail_re::set_oracle_target(tab, sg, m, 1.0, 0.0);
    re.measurements.push_back(std::move(m));
  }
  {
    auto m = detail_re::make_measurement(sg, "f~[vc]", f.at(star.center), pad_y);
    detail_re::set_oracle_target(tab, sg, m, 1.0, 0.0);
    re.measurements.push_back(std::move(m));
  }

  bool two_leaf = base.degree(star.center) == 2;
  if (!two_leaf) {
    if (star.leaves.size() < 3)
      throw validation_error(
          "RE 2 with more than two center neighbors needs three independent "
          "leaves");
    std::vector<Vertex> v3(star.leaves.begin(), star.leaves.begin() + 3);
    re.star_leaves = v3;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) {
        PauliString op = generator(sg, star.center) * f.at(v3[i]) * f.at(v3[j]) *
                         h_operator(ig, star.center, {v3[i], v3[j]});
        auto m = detail_re::make_measurement(
            sg,
            "C[" + std::to_string(v3[i]) + "," + std::to_string(v3[j]) + "]", op,
            pad_y);
        detail_re::set_oracle_target(tab, sg, m, -1.0, 0.0);
        re.measurements.push_back(std::move(m));
      }
  } else {
    Vertex v1 = star.leaves[0], v2 = star.leaves[1];
    re.star_leaves = {v1, v2};
    {
      PauliString op =
          generator(sg, star.center) * f.at(v1) * h_operator(ig, star.center, {v1});
      auto m = detail_re::make_measurement(sg, "C[" + std::to_string(v1) + "]",
                                           op, pad_y);
      detail_re::set_oracle_target(tab, sg, m, 1.0, 0.0);
      re.measurements.push_back(std::move(m));
    }
    {
      PauliString op =
          generator(sg, star.center) * f.at(v2) * h_operator(ig, star.center, {v2});
      auto m = detail_re::make_measurement(sg, "C[" + std::to_string(v2) + "]",
                                           op, pad_y);
      detail_re::set_oracle_target(tab, sg, m, 1.0, 0.0);
      re.measurements.push_back(std::move(m));
    }
    {
      PauliString op = generator(sg, star.center) * f.at(v1) * f.at(v2);
      auto m = detail_re::make_measurement(sg, "Cc", op, pad_y);
      detail_re::set_oracle_target(tab, sg, m, -1.0, 0.0);
      re.measurements.push_back(std::move(m));
    }
    PauliString c2 = f.at(v1) * f.at(v2) * h_operator(ig, star.center, {});
    for (Basis b : {Basis::X, Basis::Y}) {
      auto m = detail_re::make_measurement(sg, "C2(" + basis_name(b) + ")", c2,
                                           pad_y);
      if (!m.settings.at(star.center).marginal)
        throw std::logic_error("C_2 unexpectedly supported on the star center");
      m.settings[star.center] = {b, true};
      detail_re::set_oracle_target(tab, sg, m, 1.0, 0.0);
      re.measurements.push_back(std::move(m));
    }
  }

  for (auto& [e, chain] : ig.chains())
    for (Vertex v : chain) re.deflation_settings[v] = PauliLetter::X;
  return re;
}

// -------------------------------------------------------------------------
// RE 3: neighboring vertex pair, CHSH-style correlations through the middle
// chain vertex v_m.

inline ReferenceExperiment build_re3(const InflatedGraph& ig, Vertex v_l,
                                     Vertex v_r) {
  const Graph& base = ig.base();
  if (!base.has_edge(v_l, v_r))
    throw validation_error("RE 3 needs an edge of the base graph");
  if (ig.d() < 1) throw validation_error("RE 3 needs inflation distance >= 1");

  ReferenceExperiment re;
  re.kind = REKind::re3;
  re.state_graph = ig.graph();
  re.inflation = ig;
  re.comm_d = ig.d();
  re.v_l = v_l;
  re.v_r = v_r;
  re.re3_pair_special = base.num_vertices() == 2;

  const int d = ig.d();
  const Graph& sg = ig.graph();
  StabilizerTableau tab = tableau_from_graph(sg);
  Vertex v_m = ig.chain_vertex_from(v_l, v_r, d);
  re.v_m = v_m;
  std::vector<Vertex> vm_nbrs = sg.neighbors(v_m);
  auto pad_y = detail_re::pad_x_with_y(vm_nbrs);

  std::map<Vertex, PauliString> f;
  for (Vertex u : base.vertices()) f.emplace(u, inflated_generator(ig, u));

  for (Vertex u : base.vertices()) {
    if (u == v_l || u == v_r) continue;
    auto m = detail_re::make_measurement(sg, "f[" + std::to_string(u) + "]",
                                         f.at(u), pad_y);
    detail_re::set_oracle_target(tab, sg, m, 1.0, 0.0);
    re.measurements.push_back(std::move(m));
  }

  PauliString gm = generator(sg, v_m);
  auto gm_pow = [&](int e) {
    return (e % 2 == 1) ? gm : PauliString::identity(sg.num_vertices());
  };

  // tilde-f products on the pair chain; positions are counted from `a`
  auto tilde_e = [&](Vertex a, Vertex b) {
    PauliString p = generator(sg, a) * h_operator(ig, a, {b});
    for (int s = 1; s <= d / 2; ++s)
      p = p * generator(sg, ig.chain_vertex_from(a, b, 2 * s));
    return p;
  };
  auto tilde_o = [&](Vertex a, Vertex b) {
    PauliString p = h_operator(ig, a, {b});
    for (int s = 1; s <= (d + 1) / 2; ++s)
      p = p * generator(sg, ig.chain_vertex_from(a, b, 2 * s - 1));
    return p;
  };

  PauliString p1 = gm_pow(d + 1) * f.at(v_r);
  PauliString p2 = gm_pow(d) * f.at(v_l);
  PauliString p3 = gm_pow(d) * tilde_e(v_l, v_r) * tilde_e(v_r, v_l);
  PauliString p4 = gm_pow(d + 1) * tilde_o(v_l, v_r) * tilde_o(v_r, v_l);

  std::size_t im = sg.index(v_m);
  if (p1.letter(im) != PauliLetter::X || p2.letter(im) != PauliLetter::X ||
      p3.letter(im) != PauliLetter::Y || p4.letter(im) != PauliLetter::Y)
    throw std::logic_error("unexpected middle-vertex letters in RE 3 operators");

  double s1 = (d % 2 == 1) ? 1.0 : -1.0;   // (-1)^(d+1)
  double s2 = -s1;                          // (-1)^d
  double inv = 1.0 / std::sqrt(2.0);

  {
    auto m = detail_re::make_measurement(sg, "P1", p1, pad_y);
    detail_re::set_oracle_target(tab, sg, m, s1, 0.0);
    re.measurements.push_back(std::move(m));
  }
  {
    auto m = detail_re::make_measurement(sg, "P2", p2, pad_y);
    detail_re::set_oracle_target(tab, sg, m, s2, 0.0);
    re.measurements.push_back(std::move(m));
  }
  const PauliString* ops[4] = {&p1, &p2, &p3, &p4};
  double targets[4] = {s1 * inv, s2 * inv, inv, inv};
  for (int i = 0; i < 4; ++i) {
    auto m = detail_re::make_measurement(sg, "I" + std::to_string(i + 1),
                                         *ops[i], pad_y, v_m);
    detail_re::set_oracle_target(tab, sg, m, targets[i], 1e-12);
    re.measurements.push_back(std::move(m));
  }

  for (auto& [e, chain] : ig.chains())
    for (Vertex v : chain) re.deflation_settings[v] = PauliLetter::X;
  if (re.re3_pair_special)
    for (Vertex w : vm_nbrs)
      if (ig.is_chain(w)) re.deflation_settings[w] = PauliLetter::Y;
  return re;
}

}  // namespace graphcert
