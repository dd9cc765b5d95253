#include <cctype>

#include <catch2/catch_amalgamated.hpp>

#include "graphcert/lattices.hpp"
#include "graphcert/simulate.hpp"

using namespace graphcert;

namespace {
// one character per vertex in canonical order; marginal inputs in lowercase
std::string letters_of(const Measurement& m, const Graph& sg) {
  std::string s;
  for (Vertex v : sg.vertices()) {
    const Setting& st = m.settings.at(v);
    char c = (st.basis == Basis::Rz) ? 'R' : "XYZ"[static_cast<int>(st.basis)];
    if (st.marginal) c = static_cast<char>(std::tolower(c));
    s.push_back(c);
  }
  return s;
}
}  // namespace

TEST_CASE("RE 0 on the path of three") {
  Graph path3 = build_graph({1, 2, 3}, {{1, 2}, {2, 3}});
  auto line = find_line_of_three(path3);
  REQUIRE(line.has_value());
  auto re = build_re0(path3, *line);
  REQUIRE(re.comm_d == 0);
  REQUIRE(re.measurements.size() == 6);  // 3 generators + 2 M_v + M_vc
  REQUIRE(re.find("M[vc]").target == -1.0);
  for (Vertex u : path3.vertices())
    REQUIRE(re.find("g[" + std::to_string(u) + "]").target == 1.0);
  for (Vertex v : {1, 3})
    REQUIRE(re.find("M[" + std::to_string(v) + "]").target == 1.0);

  // M_vc = Y X Y on the pure path; M_v = Y Y Z pattern
  REQUIRE(letters_of(re.find("M[vc]"), path3) == "YXY");
  REQUIRE(letters_of(re.find("M[1]"), path3) == "YYZ");
  REQUIRE(letters_of(re.find("M[3]"), path3) == "ZYY");

  Graph tri = build_graph({1, 2, 3}, {{1, 2}, {2, 3}, {1, 3}});
  REQUIRE_THROWS_AS(build_re0(tri, Line3{1, 2, 3}), validation_error);
}

TEST_CASE("RE 1 on the inflated triangle") {
  Graph tri = build_graph({1, 2, 3}, {{1, 2}, {2, 3}, {1, 3}});
  InflatedGraph ig = inflate(tri, 1);
  auto re = build_re1(ig, {1, 2, 3});
  REQUIRE(re.measurements.size() == 10);
  REQUIRE(re.find("C_Vc").target == -1.0);
  for (Vertex u : tri.vertices()) {
    REQUIRE(re.find("f[" + std::to_string(u) + "]").target == 1.0);
    REQUIRE(re.find("C[" + std::to_string(u) + "](X)").target == 1.0);
    REQUIRE(re.find("C[" + std::to_string(u) + "](Z)").target == 1.0);
  }

  // C_Vc is the all-X measurement with every vertex in support
  const Measurement& cvc = re.find("C_Vc");
  REQUIRE(cvc.support.size() == 9);
  for (auto& [v, s] : cvc.settings) REQUIRE(s.basis == Basis::X);

  // the marginalized vertex differs between the (X) and (Z) variants only
  const Measurement& c1x = re.find("C[1](X)");
  const Measurement& c1z = re.find("C[1](Z)");
  REQUIRE(c1x.support == c1z.support);
  REQUIRE(c1x.settings.at(1).marginal);
  REQUIRE(c1x.settings.at(1).basis == Basis::X);
  REQUIRE(c1z.settings.at(1).basis == Basis::Z);
  // C_1 has Y on the two cycle neighbors of 1
  REQUIRE(c1x.settings.at(2).basis == Basis::Y);
  REQUIRE(c1x.settings.at(3).basis == Basis::Y);

  // deflation is all-X on the six chain vertices
  REQUIRE(re.deflation_settings.size() == 6);
  for (auto& [v, b] : re.deflation_settings) REQUIRE(b == PauliLetter::X);

  REQUIRE_THROWS_AS(build_re1(ig, std::vector<Vertex>{1, 2}), validation_error);
  Graph c4 = build_graph({1, 2, 3, 4}, {{1, 2}, {2, 3}, {3, 4}, {1, 4}});
  REQUIRE_THROWS_AS(build_re1(inflate(c4, 1), std::vector<Vertex>{1, 2, 3, 4}),
                    validation_error);

  // build-time targets agree with the dense backend as well
  auto corr = simulate_correlations(re);
  for (const auto& m : re.measurements)
    REQUIRE(corr.at(m.label) == Catch::Approx(m.target).margin(1e-12));
}

TEST_CASE("RE 2 star variants") {
  Graph claw = build_graph({0, 1, 2, 3}, {{0, 1}, {0, 2}, {0, 3}});
  InflatedGraph ig = inflate(claw, 1);
  auto star = find_induced_star(claw);
  auto re = build_re2(ig, *star);
  REQUIRE(re.measurements.size() == 8);  // 4 f, 1 f~, 3 C pairs
  for (auto& pair_label : {"C[1,2]", "C[1,3]", "C[2,3]"})
    REQUIRE(re.find(pair_label).target == -1.0);
  REQUIRE(re.find("f~[vc]").target == 1.0);

  // f~ pads Y at the center's nearest neighbors, X elsewhere off support
  const Measurement& ft = re.find("f~[vc]");
  const Measurement& f0 = re.find("f[0]");
  REQUIRE(ft.support == f0.support);
  for (Vertex w : ig.graph().neighbors(0)) {
    REQUIRE(ft.settings.at(w).marginal);
    REQUIRE(ft.settings.at(w).basis == Basis::Y);
    REQUIRE(f0.settings.at(w).basis == Basis::X);
  }

  // C_{v_i v_j}: the excluded arm's first chain vertex is marginal Y
  const Measurement& c12 = re.find("C[1,2]");
  Vertex first_chain_3 = ig.chain_vertex_from(0, 3, 1);
  REQUIRE(c12.settings.at(first_chain_3).marginal);
  REQUIRE(c12.settings.at(first_chain_3).basis == Basis::Y);
  REQUIRE(c12.settings.at(3).basis == Basis::Z);
  REQUIRE_FALSE(c12.settings.at(3).marginal);

  // two-leaf branch on the path of three
  Graph path3 = build_graph({1, 2, 3}, {{1, 2}, {2, 3}});
  auto re2 = build_re2(inflate(path3, 1), *find_induced_star(path3));
  REQUIRE(re2.measurements.size() == 9);
  REQUIRE(re2.find("Cc").target == -1.0);
  REQUIRE(re2.find("C[1]").target == 1.0);
  REQUIRE(re2.find("C[3]").target == 1.0);
  REQUIRE(re2.find("C2(X)").target == 1.0);
  REQUIRE(re2.find("C2(Y)").target == 1.0);
  // C2 marginalizes the center with X and Y input variants
  REQUIRE(re2.find("C2(X)").settings.at(2).marginal);
  REQUIRE(re2.find("C2(X)").settings.at(2).basis == Basis::X);
  REQUIRE(re2.find("C2(Y)").settings.at(2).basis == Basis::Y);

  REQUIRE_THROWS_AS(build_re2(ig, Star{0, {1}}), validation_error);
  Graph paw = build_graph({0, 1, 2, 3}, {{0, 1}, {0, 2}, {1, 2}, {0, 3}});
  REQUIRE_THROWS_AS(build_re2(inflate(paw, 1), Star{0, {1, 2}}), validation_error);
}

TEST_CASE("RE 3 operators match the tensor-product catalog") {
  Graph pair = build_graph({0, 1}, {{0, 1}});

  // d = 1: vertex order (v_l, v_r, 1, 2); P1 = Z X at position 1, P2 carries
  // the O = Y letter on v_l
  {
    InflatedGraph ig = inflate(pair, 1);
    auto re = build_re3(ig, 0, 1);
    const Graph& sg = ig.graph();
    REQUIRE(re.v_m == ig.chain_vertex_from(0, 1, 1));
    REQUIRE(letters_of(re.find("P1"), sg) == "ZXXy");
    REQUIRE(letters_of(re.find("P2"), sg) == "YZXY");
    REQUIRE(letters_of(re.find("I1"), sg) == "ZXRy");
    REQUIRE(letters_of(re.find("I2"), sg) == "YZRY");
    REQUIRE(letters_of(re.find("I3"), sg) == "YXRy");
    REQUIRE(letters_of(re.find("I4"), sg) == "ZZRY");
    REQUIRE(re.find("P1").target == 1.0);
    REQUIRE(re.find("P2").target == -1.0);
    double inv = 1.0 / std::sqrt(2.0);
    REQUIRE(re.find("I1").target == Catch::Approx(inv).margin(1e-12));
    REQUIRE(re.find("I2").target == Catch::Approx(-inv).margin(1e-12));
    REQUIRE(re.find("I3").target == Catch::Approx(inv).margin(1e-12));
    REQUIRE(re.find("I4").target == Catch::Approx(inv).margin(1e-12));
    // deflation: X at v_m, Y at its chain neighbor
    REQUIRE(re.deflation_settings.at(re.v_m) == PauliLetter::X);
    REQUIRE(re.deflation_settings.at(ig.chain_vertex_from(0, 1, 2)) ==
            PauliLetter::Y);
  }

  // d = 2: P1 = Z_{v_l} Y_1 X_2 Y_3 X_{v_r} per the catalog; targets flip sign
  {
    InflatedGraph ig = inflate(pair, 2);
    auto re = build_re3(ig, 0, 1);
    const Graph& sg = ig.graph();
    // vertex order: v_l, v_r, then chain positions 1..4
    REQUIRE(letters_of(re.find("P1"), sg) == "ZXYXYx");
    REQUIRE(letters_of(re.find("P2"), sg) == "XZyXyX");
    REQUIRE(re.find("P1").target == -1.0);
    REQUIRE(re.find("P2").target == 1.0);
    double inv = 1.0 / std::sqrt(2.0);
    REQUIRE(re.find("I1").target == Catch::Approx(-inv).margin(1e-12));
    REQUIRE(re.find("I2").target == Catch::Approx(inv).margin(1e-12));
    REQUIRE(re.find("I3").target == Catch::Approx(inv).margin(1e-12));
    REQUIRE(re.find("I4").target == Catch::Approx(inv).margin(1e-12));
  }

  // d = 4 catalog row: P3 letters X,X,Y,Y,X,X on support (v_l,2,4,5,7,v_r)
  {
    InflatedGraph ig = inflate(pair, 4);
    auto re = build_re3(ig, 0, 1);
    const Graph& sg = ig.graph();
    const Measurement& i3 = re.find("I3");
    auto pos = [&](int r) { return ig.chain_vertex_from(0, 1, r); };
    REQUIRE(i3.settings.at(0).basis == Basis::X);  // O = X for d > 1
    REQUIRE(i3.settings.at(pos(2)).basis == Basis::X);
    REQUIRE(i3.settings.at(pos(4)).basis == Basis::Rz);
    REQUIRE(i3.settings.at(pos(5)).basis == Basis::Y);
    REQUIRE(i3.settings.at(pos(7)).basis == Basis::X);
    REQUIRE(i3.settings.at(1).basis == Basis::X);
    REQUIRE(i3.settings.at(pos(1)).marginal);
    // padding is Y exactly at the neighbors of v_m
    REQUIRE(i3.settings.at(pos(3)).marginal);
    REQUIRE(i3.settings.at(pos(3)).basis == Basis::Y);
    const Measurement& i4 = re.find("I4");
    REQUIRE(i4.settings.at(pos(5)).marginal);
    REQUIRE(i4.settings.at(pos(5)).basis == Basis::Y);
  }

  REQUIRE_THROWS_AS(build_re3(inflate(pair, 0), 0, 1), validation_error);
  Graph two = build_graph({0, 1, 2}, {{0, 1}, {1, 2}});
  REQUIRE_THROWS_AS(build_re3(inflate(two, 1), 0, 2), validation_error);
}

TEST_CASE("RE 3 on a larger base keeps f measurements for spectators") {
  Graph path3 = build_graph({1, 2, 3}, {{1, 2}, {2, 3}});
  InflatedGraph ig = inflate(path3, 1);
  auto re = build_re3(ig, 1, 2);
  REQUIRE_FALSE(re.re3_pair_special);
  REQUIRE(re.find("f[3]").target == 1.0);
  // no Y deflation outside the pure-pair case
  for (auto& [v, b] : re.deflation_settings) REQUIRE(b == PauliLetter::X);
  auto corr = simulate_correlations(re);
  for (const auto& m : re.measurements)
    REQUIRE(corr.at(m.label) == Catch::Approx(m.target).margin(1e-12));
}

TEST_CASE("input views") {
  Graph path3 = build_graph({1, 2, 3}, {{1, 2}, {2, 3}});
  auto re0 = build_re0(path3, *find_line_of_three(path3));
  // d = 0: the view is the local setting only
  REQUIRE(input_view(re0, re0.find("g[1]"), 1) == "X");
  REQUIRE(input_view(re0, re0.find("g[2]"), 1) == "Z");

  Graph tri = build_graph({1, 2, 3}, {{1, 2}, {2, 3}, {1, 3}});
  auto re1 = build_re1(inflate(tri, 1), {1, 2, 3});
  // identical distance-1 surroundings produce identical tokens
  REQUIRE(input_view(re1, re1.find("f[1]"), 1) ==
          input_view(re1, re1.find("C_Vc"), 1));
  REQUIRE(input_view(re1, re1.find("f[2]"), 1) ==
          input_view(re1, re1.find("f[3]"), 1));
  // the marginal variants change the views of the chain vertices next to u
  InflatedGraph ig = inflate(tri, 1);
  Vertex a1 = ig.chain_vertex_from(1, 2, 1);
  REQUIRE(input_view(re1, re1.find("C[1](Z)"), a1) ==
          input_view(re1, re1.find("f[2]"), a1));
  REQUIRE(input_view(re1, re1.find("C[1](X)"), a1) !=
          input_view(re1, re1.find("C[1](Z)"), a1));
}

TEST_CASE("RE 4 on the 9-circle") {
  auto re = build_re4_circle(9, 1);
  REQUIRE(re.state_graph.num_vertices() == 9);
  // 3 shifts x 10 RE-1 measurements + 3 families per vertex
  REQUIRE(re.measurements.size() == 3 * 10 + 3 * 9);
  for (const auto& m : re.measurements) REQUIRE(m.deterministic());
  REQUIRE(re.find("s0:C_Vc").target == -1.0);
  REQUIRE(re.find("alt[0]").target == 1.0);
  REQUIRE(re.find("altX[4]").target == 1.0);
  REQUIRE(re.find("altZ[4]").target == 1.0);

  // the alternating-pattern submeasurement certifies X_u Z_{u+-1}
  const Measurement& alt0 = re.find("alt[0]");
  REQUIRE(alt0.support == std::vector<Vertex>{0, 1, 8});
  REQUIRE(alt0.settings.at(0).basis == Basis::X);
  REQUIRE(alt0.settings.at(1).basis == Basis::Z);
  REQUIRE(alt0.settings.at(8).basis == Basis::Z);

  // the altZ view at u equals the view u sees inside the shifted RE 1
  REQUIRE(input_view(re, re.find("altZ[0]"), 0) ==
          input_view(re, re.find("s0:f[0]"), 0));

  REQUIRE_THROWS_AS(build_re4_circle(7, 1), validation_error);

  auto corr = simulate_correlations(re);
  for (const auto& m : re.measurements)
    REQUIRE(corr.at(m.label) == Catch::Approx(m.target).margin(1e-12));
}

TEST_CASE("RE 5 on the honeycomb torus") {
  auto re = build_re5_honeycomb(6, 6, 1);
  REQUIRE(re.state_graph.num_vertices() == 72);
  for (const auto& m : re.measurements) REQUIRE(m.deterministic());

  // every generator appears as a submeasurement of one alternating family
  std::size_t g_count = 0;
  for (const auto& m : re.measurements)
    if (m.label.find(":g[") != std::string::npos) ++g_count;
  REQUIRE(g_count == 72);

  for (auto& pair_label : {"hex:C[", "hex:f~[vc]"})
    (void)pair_label;
  REQUIRE(re.find("hex:f~[vc]").target == 1.0);
  int c_pairs = 0;
  for (const auto& m : re.measurements)
    if (m.label.rfind("hex:C[", 0) == 0) {
      REQUIRE(m.target == -1.0);
      ++c_pairs;
    }
  REQUIRE(c_pairs == 3);
  REQUIRE(re.find("hexMX[" + std::to_string(re.star_leaves[0]) + "]").target ==
          1.0);
  REQUIRE(re.find("hexMZ[" + std::to_string(re.star_leaves[0]) + "]").target ==
          1.0);

  // the torus must be large enough for the views around the tripoint star
  REQUIRE_THROWS_AS(build_re5_honeycomb(3, 3, 1), validation_error);
}

TEST_CASE("every power vertex sees two different settings across measurements") {
  Graph tri = build_graph({1, 2, 3}, {{1, 2}, {2, 3}, {1, 3}});
  for (const auto& re :
       {build_re1(inflate(tri, 1), {1, 2, 3}),
        build_re2(inflate(build_graph({0, 1, 2, 3}, {{0, 1}, {0, 2}, {0, 3}}), 1),
                  Star{0, {1, 2, 3}}),
        build_re3(inflate(build_graph({0, 1}, {{0, 1}}), 1), 0, 1)}) {
    for (Vertex u : re.inflation->base().vertices()) {
      std::set<Basis> seen;
      for (const auto& m : re.measurements)
        if (!m.settings.at(u).marginal) seen.insert(m.settings.at(u).basis);
      REQUIRE(seen.size() >= 2);
    }
  }
}
