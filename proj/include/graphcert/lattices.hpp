#pragma once

#include <array>
#include <numeric>

#include "graphcert/experiments.hpp"

namespace graphcert {

inline Graph make_circle(int n) {
  if (n < 3) throw validation_error("circle needs at least 3 vertices");
  std::vector<Vertex> vs(n);
  std::iota(vs.begin(), vs.end(), 0);
  std::vector<Edge> es;
  for (int i = 0; i < n; ++i) es.push_back(make_edge(i, (i + 1) % n));
  return Graph(vs, es);
}

/// Reads a circle of 6d+3 vertices as the d-inflation of a triangle whose
/// power vertices sit at positions shift, shift+(2d+1), shift+2(2d+1).
inline InflatedGraph interpret_circle_as_inflation(const Graph& circle, int d,
                                                   int shift) {
  int n = static_cast<int>(circle.num_vertices());
  if (n != 6 * d + 3) throw validation_error("circle length must be 6d+3");
  if (shift < 0 || shift > 2 * d)
    throw validation_error("shift must lie in [0, 2d]");
  int step = 2 * d + 1;
  std::vector<Vertex> power = {shift, shift + step, shift + 2 * step};
  Graph base(power, {make_edge(power[0], power[1]), make_edge(power[1], power[2]),
                     make_edge(power[0], power[2])});
  std::map<Edge, std::vector<Vertex>> chains;
  auto arc = [&](Vertex from, Vertex to, int dir) {
    std::vector<Vertex> c;
    for (int v = (from + dir + n) % n; v != to; v = (v + dir + n) % n)
      c.push_back(v);
    return c;
  };
  chains[make_edge(power[0], power[1])] = arc(power[0], power[1], +1);
  chains[make_edge(power[1], power[2])] = arc(power[1], power[2], +1);
  // third edge runs the long way around through the wrap, counted from the
  // canonical first endpoint
  chains[make_edge(power[0], power[2])] = arc(power[0], power[2], -1);
  return InflatedGraph::from_parts(std::move(base), d, circle, std::move(chains));
}

namespace detail_re {

/// Measurement whose padding letters follow a precomputed pattern. Pattern
/// entries on support vertices are sanity checks, not overrides.
inline Measurement make_patterned(const Graph& sg, std::string label,
                                  const PauliString& op,
                                  const std::map<Vertex, Basis>& pattern) {
  auto pad = [&pattern](Vertex v) {
    auto it = pattern.find(v);
    return it == pattern.end() ? Basis::X : it->second;
  };
  Measurement m = make_measurement(sg, std::move(label), op, pad);
  for (Vertex v : m.support) {
    auto it = pattern.find(v);
    if (it != pattern.end() && m.settings.at(v).basis != it->second)
      throw std::logic_error("pattern conflicts with support letters in " +
                             m.label);
  }
  return m;
}

}  // namespace detail_re

// -------------------------------------------------------------------------
// RE 4: full self-test of the odd circular graph state on 6d+3 vertices.
// The 2d+1 shifted RE 1 families supply anticommutation at the power
// vertices of every inflation reading; the alternating-pattern measurements
// transport it to alternating-view observables and certify the plain
// stabilizers g'_u.

inline ReferenceExperiment build_re4_circle(int n_base, int d) {
  if (n_base != 6 * d + 3)
    throw validation_error("RE 4 needs a circle of exactly 6d+3 vertices");
  Graph circle = make_circle(n_base);
  const int n = n_base;
  const int step = 2 * d + 1;

  ReferenceExperiment re;
  re.kind = REKind::re4;
  re.state_graph = circle;
  re.comm_d = d;
  re.cycle = {0, step, 2 * step};

  for (int s = 0; s < step; ++s) {
    InflatedGraph ig = interpret_circle_as_inflation(circle, d, s);
    ReferenceExperiment sub = build_re1(ig, ig.base().vertices());
    for (auto& m : sub.measurements) {
      m.label = "s" + std::to_string(s) + ":" + m.label;
      re.measurements.push_back(std::move(m));
    }
  }

  StabilizerTableau tab = tableau_from_graph(circle);
  auto at = [&](Vertex u, int off) { return ((u + off) % n + n) % n; };

  for (int u = 0; u < n; ++u) {
    InflatedGraph ig = interpret_circle_as_inflation(circle, d, u % step);
    PauliString fu = inflated_generator(ig, u);
    Vertex wm = at(u, -step), wp = at(u, step);

    // power vertex u keeps an all-X view; its base neighbors measure Z inside
    // alternating-pattern views
    std::map<Vertex, Basis> px;
    for (Vertex w : {wm, wp})
      for (int k = 0; k <= d; ++k)
        for (int sgn : {-1, 1})
          px[at(w, sgn * k)] = (k % 2 == 0) ? Basis::Z : Basis::X;
    re.measurements.push_back(detail_re::make_patterned(
        circle, "altZ[" + std::to_string(u) + "]", fu, px));
    detail_re::set_oracle_target(tab, circle, re.measurements.back(), 1.0, 0.0);

    // u keeps an alternating view; the counterclockwise neighbor supplies the
    // all-X-view Z observable the propagation step pairs with
    std::map<Vertex, Basis> pz;
    for (int k = 1; k <= d; ++k)
      for (int sgn : {-1, 1}) pz[at(u, sgn * k)] = (k % 2 == 0) ? Basis::X : Basis::Z;
    for (int k = 0; k <= d; ++k)
      for (int sgn : {-1, 1})
        pz[at(wp, sgn * k)] = (k % 2 == 0) ? Basis::Z : Basis::X;
    for (int k = 1; k <= d; ++k)
      for (int sgn : {-1, 1}) pz[at(wm, sgn * k)] = Basis::X;
    re.measurements.push_back(detail_re::make_patterned(
        circle, "altX[" + std::to_string(u) + "]", fu, pz));
    detail_re::set_oracle_target(tab, circle, re.measurements.back(), 1.0, 0.0);

    // globally alternating inputs certify the plain generator g'_u
    std::map<Vertex, Basis> pa;
    for (int k = 1; k <= 3 * d + 1; ++k)
      for (int sgn : {-1, 1}) pa[at(u, sgn * k)] = (k % 2 == 0) ? Basis::X : Basis::Z;
    re.measurements.push_back(detail_re::make_patterned(
        circle, "alt[" + std::to_string(u) + "]", generator(circle, u), pa));
    detail_re::set_oracle_target(tab, circle, re.measurements.back(), 1.0, 0.0);
  }
  return re;
}

// -------------------------------------------------------------------------
// Honeycomb torus in brick coordinates: cell (r, c) holds sublattice sites
// A and B; A(r,c) neighbors B(r,c), B(r-1,c), B(r,c-1).

struct HoneycombTorus {
  int rows = 0, cols = 0;
  Graph graph;

  static Vertex id(int rows, int cols, int r, int c, int s) {
    r = ((r % rows) + rows) % rows;
    c = ((c % cols) + cols) % cols;
    return 2 * (r * cols + c) + s;
  }
  Vertex vertex(int r, int c, int s) const { return id(rows, cols, r, c, s); }
  int sublattice(Vertex v) const { return v & 1; }
};

inline HoneycombTorus make_honeycomb_torus(int rows, int cols) {
  if (rows < 2 || cols < 2) throw validation_error("torus needs rows, cols >= 2");
  HoneycombTorus t;
  t.rows = rows;
  t.cols = cols;
  std::vector<Vertex> vs(2 * rows * cols);
  std::iota(vs.begin(), vs.end(), 0);
  std::vector<Edge> es;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      Vertex a = t.vertex(r, c, 0);
      es.push_back(make_edge(a, t.vertex(r, c, 1)));
      es.push_back(make_edge(a, t.vertex(r - 1, c, 1)));
      es.push_back(make_edge(a, t.vertex(r, c - 1, 1)));
    }
  t.graph = Graph(vs, es);
  return t;
}

/// True when the ball of the given radius around v matches the infinite
/// honeycomb, i.e. no torus wrap is visible. Detected by lifting the BFS to
/// unwrapped coordinates and looking for a vertex reached under two lifts.
inline bool honeycomb_ball_is_tree_like(const HoneycombTorus& t, Vertex v,
                                        int radius) {
  struct Lift {
    int r, c, s;
  };
  std::map<Vertex, Lift> lift;
  auto unwrap_neighbors = [&](const Lift& l) {
    std::vector<Lift> out;
    if (l.s == 0) {
      out.push_back({l.r, l.c, 1});
      out.push_back({l.r - 1, l.c, 1});
      out.push_back({l.r, l.c - 1, 1});
    } else {
      out.push_back({l.r, l.c, 0});
      out.push_back({l.r + 1, l.c, 0});
      out.push_back({l.r, l.c + 1, 0});
    }
    return out;
  };
  Lift start{(v / 2) / t.cols, (v / 2) % t.cols, v & 1};
  lift[v] = start;
  std::deque<std::pair<Lift, int>> q{{start, 0}};
  while (!q.empty()) {
    auto [l, dd] = q.front();
    q.pop_front();
    if (dd == radius) continue;
    for (const Lift& nl : unwrap_neighbors(l)) {
      Vertex w = t.vertex(nl.r, nl.c, nl.s);
      auto it = lift.find(w);
      if (it == lift.end()) {
        lift[w] = nl;
        q.push_back({nl, dd + 1});
      } else if (it->second.r != nl.r || it->second.c != nl.c ||
                 it->second.s != nl.s) {
        return false;
      }
    }
  }
  return true;
}

/// The tripoint star around v_c = A(0,0): three zig-zag arms of length 2d+1.
/// arm[k][i-1] is the vertex at graph distance i from v_c.
struct TripointStar {
  Vertex center;
  std::array<std::vector<Vertex>, 3> arms;
};

inline TripointStar tripoint_star(const HoneycombTorus& t, int d) {
  TripointStar s;
  s.center = t.vertex(0, 0, 0);
  int len = 2 * d + 1;
  auto build = [&](auto next) {
    std::vector<Vertex> arm;
    int r = 0, c = 0, sub = 0;
    for (int i = 0; i < len; ++i) {
      next(r, c, sub);
      arm.push_back(t.vertex(r, c, sub));
    }
    return arm;
  };
  // east: A(r,c) -> B(r,c) -> A(r,c+1) -> ...
  s.arms[0] = build([](int& r, int& c, int& sub) {
    if (sub == 0) {
      sub = 1;
    } else {
      sub = 0;
      ++c;
    }
    (void)r;
  });
  // north: A(r,c) -> B(r-1,c) -> A(r-1,c) -> ...
  s.arms[1] = build([](int& r, int& c, int& sub) {
    if (sub == 0) {
      sub = 1;
      --r;
    } else {
      sub = 0;
    }
    (void)c;
  });
  // southwest: A(r,c) -> B(r,c-1) -> A(r+1,c-1) -> ...
  s.arms[2] = build([](int& r, int& c, int& sub) {
    if (sub == 0) {
      sub = 1;
      --c;
    } else {
      sub = 0;
      ++r;
    }
  });
  return s;
}

// -------------------------------------------------------------------------
// RE 5: honeycomb cluster state on a torus. Global alternating measurements
// certify every generator; an embedded star RE (|N(v_c)| = 3) on the
// tripoint star supplies the anticommutation seed.

inline ReferenceExperiment build_re5_honeycomb(int rows, int cols, int d) {
  HoneycombTorus torus = make_honeycomb_torus(rows, cols);
  const Graph& sg = torus.graph;

  TripointStar star = tripoint_star(torus, d);
  if (!honeycomb_ball_is_tree_like(torus, star.center, 3 * d + 2))
    throw validation_error(
        "torus too small: distance-d views around the tripoint star overlap");

  ReferenceExperiment re;
  re.kind = REKind::re5;
  re.state_graph = sg;
  re.comm_d = d;
  re.star_center = star.center;
  for (auto& arm : star.arms) re.star_leaves.push_back(arm.back());

  StabilizerTableau tab = tableau_from_graph(sg);
  auto dists = sg.distances_from(star.center);

  // star-adapted stabilizer products: the honeycomb generators at a star
  // power vertex and at the even arm positions seen from it
  auto arm_positions_from = [&](int arm, bool from_center) {
    std::vector<Vertex> evens;
    int len = 2 * d + 1;
    for (int s = 1; s <= d; ++s) {
      int pos = from_center ? 2 * s : len - 2 * s;  // distance from v_c
      evens.push_back(star.arms[arm][pos - 1]);
    }
    return evens;
  };
  auto f_hat = [&](Vertex w) {
    PauliString p = generator(sg, w);
    for (int a = 0; a < 3; ++a) {
      bool from_center = (w == star.center);
      if (!from_center && star.arms[a].back() != w) continue;
      for (Vertex e : arm_positions_from(a, from_center))
        p = p * generator(sg, e);
      if (!from_center) break;
    }
    return p;
  };
  auto h_hat = [&](const std::vector<Vertex>& excluded_leaves) {
    PauliString p = PauliString::identity(sg.num_vertices());
    for (int a = 0; a < 3; ++a) {
      Vertex leaf = star.arms[a].back();
      if (std::find(excluded_leaves.begin(), excluded_leaves.end(), leaf) !=
          excluded_leaves.end())
        continue;
      for (Vertex e : arm_positions_from(a, true)) p = p * generator(sg, e);
    }
    return p;
  };

  std::vector<Vertex> star_power = {star.center, star.arms[0].back(),
                                    star.arms[1].back(), star.arms[2].back()};

  // global alternating measurements; every generator and every star product
  // is a submeasurement of one of them
  for (int side = 0; side < 2; ++side) {
    std::map<Vertex, Basis> pattern;
    for (Vertex v : sg.vertices())
      pattern[v] = (torus.sublattice(v) == side) ? Basis::X : Basis::Z;
    std::string pre = "alt" + std::to_string(side + 1) + ":";
    for (Vertex u : sg.vertices()) {
      if (torus.sublattice(u) != side) continue;
      re.measurements.push_back(detail_re::make_patterned(
          sg, pre + "g[" + std::to_string(u) + "]", generator(sg, u), pattern));
      detail_re::set_oracle_target(tab, sg, re.measurements.back(), 1.0, 0.0);
    }
    for (Vertex w : star_power) {
      if (torus.sublattice(w) != side) continue;
      re.measurements.push_back(detail_re::make_patterned(
          sg, pre + "f[" + std::to_string(w) + "]", f_hat(w), pattern));
      detail_re::set_oracle_target(tab, sg, re.measurements.back(), 1.0, 0.0);
    }
  }

  // embedded star RE on the tripoint star
  auto pad = detail_re::pad_x();
  auto pad_y = detail_re::pad_x_with_y(sg.neighbors(star.center));
  for (Vertex w : star_power) {
    auto m = detail_re::make_measurement(sg, "hex:f[" + std::to_string(w) + "]",
                                         f_hat(w), pad);
    detail_re::set_oracle_target(tab, sg, m, 1.0, 0.0);
    re.measurements.push_back(std::move(m));
  }
  {
    auto m = detail_re::make_measurement(sg, "hex:f~[vc]", f_hat(star.center),
                                         pad_y);
    detail_re::set_oracle_target(tab, sg, m, 1.0, 0.0);
    re.measurements.push_back(std::move(m));
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      Vertex vi = star.arms[i].back(), vj = star.arms[j].back();
      PauliString op = generator(sg, star.center) * f_hat(vi) * f_hat(vj) *
                       h_hat({vi, vj});
      auto m = detail_re::make_measurement(
          sg, "hex:C[" + std::to_string(vi) + "," + std::to_string(vj) + "]", op,
          pad_y);
      detail_re::set_oracle_target(tab, sg, m, -1.0, 0.0);
      re.measurements.push_back(std::move(m));
    }

  // corner-vertex measurements that hand the anticommutation to the
  // alternating-view observables
  Vertex v0 = star.arms[0].back();
  {
    std::map<Vertex, Basis> pattern;
    for (Vertex v : sg.vertices()) {
      int k = dists[sg.index(v)];
      if (k <= d && k >= 0) pattern[v] = (k % 2 == 0) ? Basis::Z : Basis::X;
    }
    re.measurements.push_back(detail_re::make_patterned(
        sg, "hexMX[" + std::to_string(v0) + "]", f_hat(v0), pattern));
    detail_re::set_oracle_target(tab, sg, re.measurements.back(), 1.0, 0.0);
  }
  {
    PauliString fc = f_hat(star.center);
    auto in_support = [&](Vertex v) {
      return fc.letter(sg.index(v)) != PauliLetter::I;
    };
    auto dv0 = sg.distances_from(v0);
    std::map<Vertex, Basis> pattern;
    for (Vertex v : sg.vertices()) {
      int k = dists[sg.index(v)];
      if (k <= d && k >= 0) pattern[v] = (k % 2 == 0) ? Basis::X : Basis::Z;
    }
    for (auto& arm : {star.arms[1], star.arms[2]}) {
      auto dl = sg.distances_from(arm.back());
      for (Vertex v : sg.vertices()) {
        int k = dl[sg.index(v)];
        if (k <= d && k >= 0) pattern[v] = (k % 2 == 0) ? Basis::Z : Basis::X;
      }
    }
    // around v0 everything pads X, but the product's own fringe letters stand
    for (Vertex v : sg.vertices()) {
      int k = dv0[sg.index(v)];
      if (k >= 1 && k <= d && !in_support(v)) pattern[v] = Basis::X;
    }
    pattern[v0] = Basis::Z;
    re.measurements.push_back(detail_re::make_patterned(
        sg, "hexMZ[" + std::to_string(v0) + "]", fc, pattern));
    detail_re::set_oracle_target(tab, sg, re.measurements.back(), 1.0, 0.0);
  }

  return re;
}

}  // namespace graphcert
