#pragma once

#include "graphcert/inflate.hpp"
#include "graphcert/pauli.hpp"

namespace graphcert {

/// Graph-state generator g_u = X_u (x) Z^{N(u)} over the graph's canonical
/// vertex order.
inline PauliString generator(const Graph& g, Vertex u) {
  PauliString p(g.num_vertices());
  p.set_letter(g.index(u), PauliLetter::X);
  for (Vertex v : g.neighbors(u)) p.set_letter(g.index(v), PauliLetter::Z);
  return p;
}

/// Product of generators at positions 2s (s = 1..d) counted from `u` on the
/// chains toward every neighbor of u not in `excluded`.
inline PauliString h_operator(const InflatedGraph& ig, Vertex u,
                              const std::vector<Vertex>& excluded) {
  if (!ig.is_power(u)) throw validation_error("h operator needs a power vertex");
  const Graph& g = ig.graph();
  PauliString p = PauliString::identity(g.num_vertices());
  for (Vertex v : ig.base().neighbors(u)) {
    if (std::find(excluded.begin(), excluded.end(), v) != excluded.end()) continue;
    for (int s = 1; s <= ig.d(); ++s)
      p = p * generator(g, ig.chain_vertex_from(u, v, 2 * s));
  }
  return p;
}

/// Inflated generator element f_u. Built as the group product
/// g'_u * prod g'_{2s} and cross-checked against the closed form
/// X_u (x) Z^{N(u)} (x) X on even chain vertices of every incident chain.
inline PauliString inflated_generator(const InflatedGraph& ig, Vertex u) {
  if (!ig.is_power(u))
    throw validation_error("inflated generator needs a power vertex");
  const Graph& g = ig.graph();
  PauliString product = generator(g, u) * h_operator(ig, u, {});

  PauliString closed(g.num_vertices());
  closed.set_letter(g.index(u), PauliLetter::X);
  for (Vertex v : ig.base().neighbors(u)) {
    closed.set_letter(g.index(v), PauliLetter::Z);
    for (int s = 1; s <= ig.d(); ++s)
      closed.set_letter(g.index(ig.chain_vertex_from(u, v, 2 * s)), PauliLetter::X);
  }
  if (!(product == closed))
    throw std::logic_error("inflated generator routes disagree at vertex " +
                           std::to_string(u));
  return product;
}

/// Stabilizer tableau: n independent commuting generators with sign +-1.
/// Expectation queries run one GF(2) elimination pass with the group product
/// carried alongside, so membership and sign come out together.
class StabilizerTableau {
 public:
  StabilizerTableau(std::size_t n, std::vector<PauliString> generators)
      : n_(n), gens_(std::move(generators)) {
    for (const auto& g : gens_) {
      if (g.num_sites() != n_) throw validation_error("generator size mismatch");
      if (!g.hermitian()) throw validation_error("generator phase must be +-1");
    }
    for (std::size_t i = 0; i < gens_.size(); ++i)
      for (std::size_t j = i + 1; j < gens_.size(); ++j)
        if (!gens_[i].commutes_with(gens_[j]))
          throw validation_error("generators do not commute");
    build_echelon();
  }

  std::size_t num_qubits() const { return n_; }
  const std::vector<PauliString>& generators() const { return gens_; }

  /// <P> for hermitian P: +1/-1 when +-P lies in the stabilizer group, else 0.
  int expectation(const PauliString& p) const {
    if (p.num_sites() != n_) throw validation_error("pauli universe mismatch");
    if (!p.hermitian()) throw validation_error("expectation needs hermitian input");
    detail::BitVec bits = symplectic(p);
    PauliString acc = PauliString::identity(n_);
    for (const auto& row : rows_) {
      if (bits.get(row.pivot)) {
        bits ^= row.bits;
        acc = acc * row.op;
      }
    }
    if (bits.any()) return 0;
    return p.sign() * acc.sign();
  }

 private:
  struct Row {
    detail::BitVec bits;
    PauliString op;
    std::size_t pivot;
  };

  detail::BitVec symplectic(const PauliString& p) const {
    detail::BitVec b(2 * n_);
    for (std::size_t i = 0; i < n_; ++i) {
      if (p.xbit(i)) b.set(i, true);
      if (p.zbit(i)) b.set(n_ + i, true);
    }
    return b;
  }

  // Maintains fully reduced echelon form: every row is zero at all other
  // rows' pivot columns, so one pass answers any membership query.
  void build_echelon() {
    for (const auto& g : gens_) {
      detail::BitVec bits = symplectic(g);
      PauliString acc = g;
      for (const auto& row : rows_)
        if (bits.get(row.pivot)) {
          bits ^= row.bits;
          acc = acc * row.op;
        }
      std::size_t pivot = 2 * n_;
      for (std::size_t i = 0; i < 2 * n_; ++i)
        if (bits.get(i)) {
          pivot = i;
          break;
        }
      if (pivot == 2 * n_)
        throw validation_error("generators not independent over GF(2)");
      for (auto& row : rows_)
        if (row.bits.get(pivot)) {
          row.bits ^= bits;
          row.op = row.op * acc;
        }
      rows_.push_back({std::move(bits), std::move(acc), pivot});
    }
  }

  std::size_t n_;
  std::vector<PauliString> gens_;
  std::vector<Row> rows_;
};

inline StabilizerTableau tableau_from_graph(const Graph& g) {
  std::vector<PauliString> gens;
  gens.reserve(g.num_vertices());
  for (Vertex u : g.vertices()) gens.push_back(generator(g, u));
  return StabilizerTableau(g.num_vertices(), std::move(gens));
}

}  // namespace graphcert
