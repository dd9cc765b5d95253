#include <catch2/catch_amalgamated.hpp>

#include "graphcert/stabilizer.hpp"
#include "oracles.hpp"

using namespace graphcert;

namespace {
PauliString random_pauli(std::mt19937& rng, std::size_t n) {
  PauliString p(n);
  for (std::size_t i = 0; i < n; ++i)
    p.set_letter(i, static_cast<PauliLetter>(rng() % 4));
  return p;
}
}  // namespace

TEST_CASE("single-qubit multiplication table") {
  auto X = PauliString::parse("X");
  auto Y = PauliString::parse("Y");
  auto Z = PauliString::parse("Z");
  REQUIRE((X * Z).str() == "-iY");
  REQUIRE((Z * X).str() == "+iY");
  REQUIRE((X * Y).str() == "+iZ");
  REQUIRE((Y * Z).str() == "+iX");
  REQUIRE((X * X).str() == "+I");
  REQUIRE((Y * Y).str() == "+I");

  // p*p = identity for any hermitian single string
  std::mt19937 rng(3);
  for (int t = 0; t < 200; ++t) {
    PauliString p = random_pauli(rng, 5);
    REQUIRE(p.hermitian());
    PauliString sq = p * p;
    REQUIRE(sq.str() == "+IIIII");
  }
}

TEST_CASE("multiply agrees with dense Kronecker products") {
  std::mt19937 rng(17);
  for (int t = 0; t < 300; ++t) {
    std::size_t n = 1 + rng() % 3;
    PauliString p = random_pauli(rng, n), q = random_pauli(rng, n);
    auto lhs = test_oracle::dense_matrix(p * q);
    auto rhs =
        test_oracle::matmul(test_oracle::dense_matrix(p), test_oracle::dense_matrix(q));
    REQUIRE(test_oracle::mat_close(lhs, rhs, 1e-12));
  }
  // a few wider checks
  for (int t = 0; t < 25; ++t) {
    PauliString p = random_pauli(rng, 6), q = random_pauli(rng, 6);
    auto lhs = test_oracle::dense_matrix(p * q);
    auto rhs =
        test_oracle::matmul(test_oracle::dense_matrix(p), test_oracle::dense_matrix(q));
    REQUIRE(test_oracle::mat_close(lhs, rhs, 1e-12));
  }
}

TEST_CASE("multiply is associative and phase-exact on 10^4 random triples") {
  std::mt19937 rng(23);
  for (int t = 0; t < 10000; ++t) {
    std::size_t n = 1 + rng() % 6;
    PauliString p = random_pauli(rng, n), q = random_pauli(rng, n),
                r = random_pauli(rng, n);
    PauliString a = (p * q) * r;
    PauliString b = p * (q * r);
    REQUIRE(a == b);
  }
  PauliString p(2), q(3);
  REQUIRE_THROWS_AS(p * q, validation_error);
}

TEST_CASE("commutation matches the dense commutator") {
  auto X = PauliString::parse("X");
  auto Z = PauliString::parse("Z");
  REQUIRE_FALSE(X.commutes_with(Z));
  REQUIRE(PauliString::parse("XX").commutes_with(PauliString::parse("ZZ")));

  std::mt19937 rng(29);
  for (int t = 0; t < 400; ++t) {
    std::size_t n = 1 + rng() % 3;
    PauliString p = random_pauli(rng, n), q = random_pauli(rng, n);
    auto pq = test_oracle::matmul(test_oracle::dense_matrix(p),
                                  test_oracle::dense_matrix(q));
    auto qp = test_oracle::matmul(test_oracle::dense_matrix(q),
                                  test_oracle::dense_matrix(p));
    bool dense_commute = test_oracle::mat_close(pq, qp, 1e-12);
    REQUIRE(p.commutes_with(q) == dense_commute);
  }
}

TEST_CASE("text round trip") {
  std::mt19937 rng(31);
  for (int t = 0; t < 500; ++t) {
    PauliString p = random_pauli(rng, 1 + rng() % 8);
    if (rng() % 2) p = p * random_pauli(rng, p.num_sites());
    REQUIRE(PauliString::parse(p.str()) == p);
  }
  REQUIRE(PauliString::parse("+XIZZY").str() == "+XIZZY");
  REQUIRE_THROWS_AS(PauliString::parse("+AB"), validation_error);
}

TEST_CASE("graph state generators") {
  Graph tri = build_graph({1, 2, 3}, {{1, 2}, {2, 3}, {1, 3}});
  REQUIRE(generator(tri, 1).str() == "+XZZ");
  REQUIRE(generator(tri, 2).str() == "+ZXZ");
  Graph single = build_graph({7}, {});
  REQUIRE(generator(single, 7).str() == "+X");
  Graph path3 = build_graph({1, 2, 3}, {{1, 2}, {2, 3}});
  REQUIRE(generator(path3, 2).str() == "+ZXZ");
  REQUIRE_THROWS_AS(generator(tri, 9), validation_error);
}

TEST_CASE("inflated generator: product and closed form agree") {
  Graph tri = build_graph({1, 2, 3}, {{1, 2}, {2, 3}, {1, 3}});
  for (int d : {0, 1, 2, 3}) {
    InflatedGraph ig = inflate(tri, d);
    for (Vertex u : tri.vertices()) {
      PauliString f = inflated_generator(ig, u);  // asserts the two routes
      if (d == 0) REQUIRE(f == generator(ig.graph(), u));
    }
  }

  // Fig. 3 graph: u = 4, d = 2. X on 4 and even chain vertices of its two
  // incident edges, Z on its power neighbors 1 and 3.
  Graph fig2 = build_graph({1, 2, 3, 4}, {{1, 2}, {1, 4}, {2, 3}, {3, 4}});
  InflatedGraph ig = inflate(fig2, 2);
  PauliString f4 = inflated_generator(ig, 4);
  const Graph& sg = ig.graph();
  REQUIRE(f4.letter(sg.index(4)) == PauliLetter::X);
  REQUIRE(f4.letter(sg.index(1)) == PauliLetter::Z);
  REQUIRE(f4.letter(sg.index(3)) == PauliLetter::Z);
  REQUIRE(f4.letter(sg.index(2)) == PauliLetter::I);
  for (Vertex v : {1, 3}) {
    for (int s = 1; s <= 2; ++s) {
      REQUIRE(f4.letter(sg.index(ig.chain_vertex_from(4, v, 2 * s))) ==
              PauliLetter::X);
      REQUIRE(f4.letter(sg.index(ig.chain_vertex_from(4, v, 2 * s - 1))) ==
              PauliLetter::I);
    }
  }
  REQUIRE_THROWS_AS(inflated_generator(ig, ig.chain({1, 2})[0]),
                    validation_error);

  // triangle d=1, u=1: X1 Z2 Z3 with X on the position-2 chain vertices
  InflatedGraph t1 = inflate(tri, 1);
  PauliString f1 = inflated_generator(t1, 1);
  const Graph& tg = t1.graph();
  REQUIRE(f1.letter(tg.index(1)) == PauliLetter::X);
  REQUIRE(f1.letter(tg.index(2)) == PauliLetter::Z);
  REQUIRE(f1.letter(tg.index(3)) == PauliLetter::Z);
  REQUIRE(f1.letter(tg.index(t1.chain_vertex_from(1, 2, 2))) == PauliLetter::X);
  REQUIRE(f1.letter(tg.index(t1.chain_vertex_from(1, 3, 2))) == PauliLetter::X);

  // f_u commutes with every inflated-graph generator
  for (Vertex u : tri.vertices()) {
    PauliString f = inflated_generator(t1, u);
    for (Vertex v : tg.vertices()) REQUIRE(f.commutes_with(generator(tg, v)));
  }
}

TEST_CASE("h operator") {
  Graph claw = build_graph({0, 1, 2, 3}, {{0, 1}, {0, 2}, {0, 3}});
  InflatedGraph ig = inflate(claw, 1);
  const Graph& sg = ig.graph();

  PauliString all_excluded = h_operator(ig, 0, {1, 2, 3});
  REQUIRE(all_excluded == PauliString::identity(sg.num_vertices()));

  // h with nothing excluded matches f_u / g'_u rearranged
  PauliString h0 = h_operator(ig, 0, {});
  REQUIRE(inflated_generator(ig, 0) == generator(sg, 0) * h0);

  // star d=1: excluding one arm leaves the even-chain X pattern with Z on the
  // other leaves
  PauliString h = h_operator(ig, 0, {1});
  for (Vertex leaf : {2, 3}) {
    REQUIRE(h.letter(sg.index(ig.chain_vertex_from(0, leaf, 2))) ==
            PauliLetter::X);
    REQUIRE(h.letter(sg.index(leaf)) == PauliLetter::Z);
  }
  REQUIRE(h.letter(sg.index(1)) == PauliLetter::I);
  REQUIRE(h.letter(sg.index(0)) == PauliLetter::I);
  PauliString href = generator(sg, ig.chain_vertex_from(0, 2, 2)) *
                     generator(sg, ig.chain_vertex_from(0, 3, 2));
  REQUIRE(h == href);
}

TEST_CASE("stabilizer tableau expectations") {
  Graph tri = build_graph({1, 2, 3}, {{1, 2}, {2, 3}, {1, 3}});
  StabilizerTableau tab = tableau_from_graph(tri);
  REQUIRE(tab.generators().size() == 3);
  REQUIRE(tab.expectation(generator(tri, 1)) == 1);
  REQUIRE(tab.expectation(generator(tri, 1) * generator(tri, 2)) == 1);
  REQUIRE(tab.expectation(PauliString::parse("XII")) == 0);
  REQUIRE(tab.expectation(PauliString::parse("XXX")) == -1);
  REQUIRE(tab.expectation(PauliString::parse("-XXX")) == 1);
  REQUIRE_THROWS_AS(tab.expectation(PauliString::parse("+iXII")),
                    validation_error);

  Graph single = build_graph({1}, {});
  StabilizerTableau ts = tableau_from_graph(single);
  REQUIRE(ts.expectation(PauliString::parse("X")) == 1);
  REQUIRE(ts.expectation(PauliString::parse("Z")) == 0);

  InflatedGraph it = inflate(tri, 1);
  StabilizerTableau ti = tableau_from_graph(it.graph());
  REQUIRE(ti.generators().size() == 9);
  for (Vertex u : tri.vertices())
    REQUIRE(ti.expectation(inflated_generator(it, u)) == 1);
}
