#pragma once

#include <iostream>
#include <map>

#include "graphcert/graph.hpp"

namespace graphcert {

enum class ChainParity { odd, even };
enum class ChainSide { left, right };

/// Position metadata of a chain vertex: base edge, 1-based position r counted
/// from the edge's canonical first endpoint, parity and side.
struct ChainLabel {
  Edge edge;
  int r = 0;
  ChainParity parity = ChainParity::odd;
  ChainSide side = ChainSide::left;
};

/// d-inflation of a base graph: every base edge is replaced by a path of 2d
/// fresh chain vertices. Chain vertex ids are allocated above the largest
/// base id, in canonical edge order, so the construction is reproducible.
class InflatedGraph {
 public:
  InflatedGraph() = default;

  InflatedGraph(const Graph& base, int d) : base_(base), d_(d) {
    if (d < 0) throw validation_error("inflation distance must be >= 0");
    if (!base.connected())
      std::cerr << "graphcert: warning: inflating a disconnected graph\n";

    std::vector<Vertex> verts = base.vertices();
    std::vector<Edge> edges;
    Vertex next = verts.empty() ? 0 : verts.back() + 1;
    for (const Edge& e : base.edges()) {
      std::vector<Vertex> chain;
      for (int r = 1; r <= 2 * d; ++r) chain.push_back(next++);
      verts.insert(verts.end(), chain.begin(), chain.end());
      Vertex prev = e.first;
      for (Vertex c : chain) {
        edges.push_back(make_edge(prev, c));
        prev = c;
      }
      edges.push_back(make_edge(prev, e.second));
      chains_[e] = chain;
    }
    graph_ = Graph(std::move(verts), std::move(edges));
    for (auto& [e, chain] : chains_)
      for (int r = 1; r <= 2 * d; ++r) pos_[chain[r - 1]] = {e, r};
  }

  /// Wraps an existing graph as an inflation, e.g. a circle of 6d+3 vertices
  /// read as the d-inflated triangle. Chains must list 2d vertices per base
  /// edge, ordered from the edge's canonical first endpoint.
  static InflatedGraph from_parts(Graph base, int d, Graph graph,
                                  std::map<Edge, std::vector<Vertex>> chains) {
    InflatedGraph ig;
    ig.base_ = std::move(base);
    ig.d_ = d;
    ig.graph_ = std::move(graph);
    ig.chains_ = std::move(chains);
    if (ig.chains_.size() != ig.base_.num_edges())
      throw validation_error("chain table does not match base edges");
    for (auto& [e, chain] : ig.chains_) {
      if (static_cast<int>(chain.size()) != 2 * d)
        throw validation_error("chain length must be 2d");
      Vertex prev = e.first;
      for (Vertex c : chain) {
        if (!ig.graph_.has_edge(prev, c))
          throw validation_error("chain is not a path in the inflated graph");
        prev = c;
      }
      if (!ig.graph_.has_edge(prev, e.second))
        throw validation_error("chain does not reach the far endpoint");
      for (int r = 1; r <= 2 * d; ++r) ig.pos_[chain[r - 1]] = {e, r};
    }
    std::size_t expect =
        ig.base_.num_vertices() + 2 * static_cast<std::size_t>(d) * ig.base_.num_edges();
    if (ig.graph_.num_vertices() != expect)
      throw validation_error("inflated vertex count mismatch");
    return ig;
  }

  const Graph& base() const { return base_; }
  const Graph& graph() const { return graph_; }
  int d() const { return d_; }

  bool is_power(Vertex v) const { return base_.has_vertex(v); }
  bool is_chain(Vertex v) const { return pos_.count(v) > 0; }

  const std::map<Edge, std::vector<Vertex>>& chains() const { return chains_; }

  const std::vector<Vertex>& chain(const Edge& e) const {
    auto it = chains_.find(make_edge(e.first, e.second));
    if (it == chains_.end()) throw validation_error("no such base edge");
    return it->second;
  }

  /// Chain vertex at position r counted from endpoint `from` (1..2d).
  Vertex chain_vertex_from(Vertex from, Vertex to, int r) const {
    Edge e = make_edge(from, to);
    const auto& ch = chain(e);
    int rr = (from == e.first) ? r : 2 * d_ + 1 - r;
    if (rr < 1 || rr > 2 * d_) throw validation_error("chain position out of range");
    return ch[static_cast<std::size_t>(rr - 1)];
  }

  ChainLabel chain_label(Vertex v) const {
    auto it = pos_.find(v);
    if (it == pos_.end())
      throw validation_error("vertex " + std::to_string(v) + " is not a chain vertex");
    auto [e, r] = it->second;
    ChainLabel lab;
    lab.edge = e;
    lab.r = r;
    lab.parity = (r % 2 == 1) ? ChainParity::odd : ChainParity::even;
    lab.side = (r <= d_) ? ChainSide::left : ChainSide::right;
    return lab;
  }

  /// Rebuilds the base graph from the inflated structure and chain tables,
  /// without consulting the stored base.
  Graph contract_chains() const {
    std::vector<Vertex> verts;
    for (Vertex v : graph_.vertices())
      if (!is_chain(v)) verts.push_back(v);
    std::vector<Edge> edges;
    if (d_ == 0) {
      edges = graph_.edges();
    } else {
      for (auto& [e, chain] : chains_) {
        const auto& nb_first = graph_.neighbors(chain.front());
        const auto& nb_last = graph_.neighbors(chain.back());
        Vertex a = -1, b = -1;
        for (Vertex w : nb_first)
          if (!is_chain(w)) a = w;
        for (Vertex w : nb_last)
          if (!is_chain(w)) b = w;
        edges.push_back(make_edge(a, b));
      }
    }
    return Graph(std::move(verts), std::move(edges));
  }

 private:
  Graph base_;
  int d_ = 0;
  Graph graph_;
  std::map<Edge, std::vector<Vertex>> chains_;
  std::map<Vertex, std::pair<Edge, int>> pos_;
};

inline InflatedGraph inflate(const Graph& g, int d) { return InflatedGraph(g, d); }

}  // namespace graphcert
