#include <catch2/catch_amalgamated.hpp>

#include "graphcert/inflate.hpp"
#include "oracles.hpp"

using namespace graphcert;

TEST_CASE("build_graph canonicalizes and validates") {
  Graph tri = build_graph({1, 2, 3}, {{2, 1}, {2, 3}, {3, 1}});
  REQUIRE(tri.num_edges() == 3);
  REQUIRE(tri.edges()[0] == Edge{1, 2});
  REQUIRE(tri.has_edge(3, 1));

  Graph single = build_graph({1}, {});
  REQUIRE(single.num_vertices() == 1);
  REQUIRE(single.connected());

  REQUIRE_THROWS_AS(build_graph({1, 2}, {{1, 1}}), validation_error);
  REQUIRE_THROWS_AS(build_graph({1, 1}, {}), validation_error);
  REQUIRE_THROWS_AS(build_graph({1, 2}, {{1, 3}}), validation_error);
}

TEST_CASE("neighborhood by radius") {
  Graph tri = build_graph({1, 2, 3}, {{1, 2}, {2, 3}, {1, 3}});
  REQUIRE(tri.neighborhood(1, 1) == std::vector<Vertex>{2, 3});
  REQUIRE(tri.neighborhood(1, 0).empty());
  REQUIRE_THROWS_AS(tri.neighborhood(9, 1), validation_error);

  Graph path5 = build_graph({1, 2, 3, 4, 5}, {{1, 2}, {2, 3}, {3, 4}, {4, 5}});
  auto nb = path5.neighborhood(3, 2);
  REQUIRE(nb == std::vector<Vertex>{1, 2, 4, 5});
  // BFS oracle
  for (Vertex u : path5.vertices()) {
    for (int r = 0; r <= 4; ++r) {
      auto mine = path5.neighborhood(u, r);
      auto ref = test_oracle::bfs_ball(path5, u, r);
      REQUIRE(mine == ref);
    }
  }

  InflatedGraph ig = inflate(tri, 1);
  Vertex power = 1;
  auto ball = ig.graph().neighborhood(power, 1);
  REQUIRE(ball.size() == 2);
  for (Vertex v : ball) REQUIRE(ig.is_chain(v));
}

TEST_CASE("inflation counts and chain labels") {
  Graph tri = build_graph({1, 2, 3}, {{1, 2}, {2, 3}, {1, 3}});
  InflatedGraph ig = inflate(tri, 1);
  REQUIRE(ig.graph().num_vertices() == 9);
  REQUIRE(ig.graph().num_edges() == 9);

  Graph fig2 = build_graph({1, 2, 3, 4}, {{1, 2}, {1, 4}, {2, 3}, {3, 4}});
  InflatedGraph ig2 = inflate(fig2, 2);
  REQUIRE(ig2.graph().num_vertices() == 4 + 16);
  REQUIRE(ig2.graph().num_edges() == 5 * 4);

  InflatedGraph trivial = inflate(tri, 0);
  REQUIRE(trivial.graph().num_vertices() == tri.num_vertices());
  REQUIRE(trivial.graph().num_edges() == tri.num_edges());

  // d=4 chain labels per position
  Graph pair = build_graph({0, 1}, {{0, 1}});
  InflatedGraph p4 = inflate(pair, 4);
  const auto& chain = p4.chain({0, 1});
  REQUIRE(chain.size() == 8);
  auto l1 = p4.chain_label(chain[0]);
  REQUIRE(l1.r == 1);
  REQUIRE(l1.parity == ChainParity::odd);
  REQUIRE(l1.side == ChainSide::left);
  auto l5 = p4.chain_label(chain[4]);
  REQUIRE(l5.r == 5);
  REQUIRE(l5.parity == ChainParity::odd);
  REQUIRE(l5.side == ChainSide::right);
  InflatedGraph p1 = inflate(pair, 1);
  auto l2 = p1.chain_label(p1.chain({0, 1})[1]);
  REQUIRE(l2.parity == ChainParity::even);
  REQUIRE(l2.side == ChainSide::right);
  REQUIRE_THROWS_AS(p1.chain_label(0), validation_error);

  // labels partition each chain into d left/right and d odd/even
  for (int d : {1, 2, 3}) {
    InflatedGraph ig_d = inflate(tri, d);
    for (auto& [e, ch] : ig_d.chains()) {
      int left = 0, odd = 0;
      for (Vertex v : ch) {
        auto lab = ig_d.chain_label(v);
        left += lab.side == ChainSide::left;
        odd += lab.parity == ChainParity::odd;
      }
      REQUIRE(left == d);
      REQUIRE(odd == d);
    }
  }
}

TEST_CASE("inflate then contract recovers random graphs") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + static_cast<int>(rng() % 7);
    std::vector<Vertex> vs(n);
    std::iota(vs.begin(), vs.end(), 1);
    std::vector<Edge> es;
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        if (rng() % 3 == 0) es.push_back({i, j});
    // keep it connected enough: chain fallback
    for (int i = 1; i < n; ++i) es.push_back({i, i + 1});
    Graph g(vs, es);
    for (int d : {1, 2, 3}) {
      InflatedGraph ig = inflate(g, d);
      REQUIRE(ig.graph().num_vertices() ==
              g.num_vertices() + 2 * static_cast<std::size_t>(d) * g.num_edges());
      REQUIRE(ig.graph().num_edges() ==
              (2 * static_cast<std::size_t>(d) + 1) * g.num_edges());
      Graph back = ig.contract_chains();
      REQUIRE(back.vertices() == g.vertices());
      REQUIRE(back.edges() == g.edges());
    }
  }
}

TEST_CASE("find_odd_cycle") {
  Graph tri = build_graph({1, 2, 3}, {{1, 2}, {2, 3}, {1, 3}});
  auto c = find_odd_cycle(tri);
  REQUIRE(c.has_value());
  REQUIRE(*c == std::vector<Vertex>{1, 2, 3});

  Graph c4 = build_graph({1, 2, 3, 4}, {{1, 2}, {2, 3}, {3, 4}, {1, 4}});
  REQUIRE_FALSE(find_odd_cycle(c4).has_value());

  Graph fig2 = build_graph({1, 2, 3, 4}, {{1, 2}, {1, 4}, {2, 3}, {3, 4}});
  REQUIRE_FALSE(find_odd_cycle(fig2).has_value());

  // returned cycles are induced: cross-check against brute-force enumeration
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 3 + static_cast<int>(rng() % 5);
    std::vector<Vertex> vs(n);
    std::iota(vs.begin(), vs.end(), 0);
    std::vector<Edge> es;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng() % 2 == 0) es.push_back({i, j});
    Graph g(vs, es);
    auto mine = find_odd_cycle(g);
    auto brute = test_oracle::smallest_induced_odd_cycle(g);
    REQUIRE(mine.has_value() == brute.has_value());
    if (mine) {
      REQUIRE(mine->size() == brute->size());
      REQUIRE(test_oracle::is_induced_cycle(g, *mine));
    }
  }
}

TEST_CASE("find_induced_star and find_line_of_three") {
  Graph path3 = build_graph({1, 2, 3}, {{1, 2}, {2, 3}});
  auto s = find_induced_star(path3);
  REQUIRE(s.has_value());
  REQUIRE(s->center == 2);
  REQUIRE(s->leaves == std::vector<Vertex>{1, 3});

  Graph tri = build_graph({1, 2, 3}, {{1, 2}, {2, 3}, {1, 3}});
  REQUIRE_FALSE(find_induced_star(tri).has_value());

  Graph claw = build_graph({0, 1, 2, 3}, {{0, 1}, {0, 2}, {0, 3}});
  auto cs = find_induced_star(claw);
  REQUIRE(cs.has_value());
  REQUIRE(cs->center == 0);
  REQUIRE(cs->leaves.size() == 3);

  auto line = find_line_of_three(path3);
  REQUIRE(line.has_value());
  REQUIRE(line->left == 1);
  REQUIRE(line->center == 2);
  REQUIRE(line->right == 3);
  REQUIRE_FALSE(find_line_of_three(tri).has_value());
  auto cl = find_line_of_three(claw);
  REQUIRE(cl.has_value());
  REQUIRE(cl->center == 0);
  REQUIRE(cl->left == 1);
  REQUIRE(cl->right == 2);
}
