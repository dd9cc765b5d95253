#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>

#include "graphcert/inflate.hpp"
#include "graphcert/pauli.hpp"

namespace graphcert {

struct NoiseSpec {
  double p = 0.0;  // per-qubit depolarizing probability
};

inline std::size_t dense_limit() {
  if (const char* s = std::getenv("GRAPHCERT_DENSE_LIMIT")) {
    long v = std::strtol(s, nullptr, 10);
    if (v >= 1 && v <= 24) return static_cast<std::size_t>(v);
  }
  return 16;
}

/// Dense complex state over an ordered list of vertices; qubit i is the i-th
/// vertex of the order and indexes bit i (qubit 0 least significant).
class StateVector {
 public:
  StateVector() = default;

  StateVector(std::vector<Vertex> order, std::vector<cplx> amps)
      : order_(std::move(order)), amps_(std::move(amps)) {
    if (amps_.size() != (std::size_t(1) << order_.size()))
      throw validation_error("amplitude count does not match qubit count");
  }

  static StateVector plus_states(std::vector<Vertex> order) {
    std::size_t n = order.size();
    std::vector<cplx> a(std::size_t(1) << n,
                        cplx(1.0 / std::sqrt(double(std::size_t(1) << n)), 0));
    return StateVector(std::move(order), std::move(a));
  }

  std::size_t num_qubits() const { return order_.size(); }
  const std::vector<Vertex>& vertex_order() const { return order_; }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  std::vector<cplx>& amplitudes() { return amps_; }

  std::size_t qubit(Vertex v) const {
    auto it = std::find(order_.begin(), order_.end(), v);
    if (it == order_.end())
      throw validation_error("vertex not in state: " + std::to_string(v));
    return static_cast<std::size_t>(it - order_.begin());
  }

  double norm() const {
    double s = 0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
  }

  void normalize() {
    double n = norm();
    if (n == 0) throw validation_error("cannot normalize the zero vector");
    for (auto& a : amps_) a /= n;
  }

  void apply_cz(Vertex u, Vertex v) {
    std::size_t mu = std::size_t(1) << qubit(u);
    std::size_t mv = std::size_t(1) << qubit(v);
    for (std::size_t i = 0; i < amps_.size(); ++i)
      if ((i & mu) && (i & mv)) amps_[i] = -amps_[i];
  }

  void apply_1q(const std::array<cplx, 4>& m, std::size_t q) {
    std::size_t mask = std::size_t(1) << q;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & mask) continue;
      cplx a0 = amps_[i], a1 = amps_[i | mask];
      amps_[i] = m[0] * a0 + m[1] * a1;
      amps_[i | mask] = m[2] * a0 + m[3] * a1;
    }
  }

  /// Controlled single-qubit operator (control |1>), arbitrary 2x2 matrix.
  void apply_controlled_1q(const std::array<cplx, 4>& m, std::size_t control,
                           std::size_t target) {
    std::size_t mc = std::size_t(1) << control;
    std::size_t mt = std::size_t(1) << target;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (!(i & mc) || (i & mt)) continue;
      cplx a0 = amps_[i], a1 = amps_[i | mt];
      amps_[i] = m[0] * a0 + m[1] * a1;
      amps_[i | mt] = m[2] * a0 + m[3] * a1;
    }
  }

  void apply_pauli(const PauliString& p) {
    if (p.num_sites() != num_qubits()) throw validation_error("universe mismatch");
    std::size_t xmask = 0, zmask = 0;
    for (std::size_t i = 0; i < num_qubits(); ++i) {
      if (p.xbit(i)) xmask |= std::size_t(1) << i;
      if (p.zbit(i)) zmask |= std::size_t(1) << i;
    }
    static const cplx itab[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    int t = 0;
    for (std::size_t i = 0; i < num_qubits(); ++i)
      if (p.xbit(i) && p.zbit(i)) ++t;
    cplx ph = itab[((p.letter_phase_pow() + t) & 3)];
    std::vector<cplx> out(amps_.size());
    for (std::size_t b = 0; b < amps_.size(); ++b) {
      cplx f = ph * ((std::popcount(b & zmask) & 1) ? -1.0 : 1.0);
      out[b ^ xmask] = f * amps_[b];
    }
    amps_ = std::move(out);
  }

  /// <psi|P|psi>.
  cplx pauli_expectation(const PauliString& p) const {
    if (p.num_sites() != num_qubits()) throw validation_error("universe mismatch");
    std::size_t xmask = 0, zmask = 0;
    int t = 0;
    for (std::size_t i = 0; i < num_qubits(); ++i) {
      if (p.xbit(i)) xmask |= std::size_t(1) << i;
      if (p.zbit(i)) zmask |= std::size_t(1) << i;
      if (p.xbit(i) && p.zbit(i)) ++t;
    }
    static const cplx itab[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    cplx ph = itab[((p.letter_phase_pow() + t) & 3)];
    cplx s = 0;
    for (std::size_t b = 0; b < amps_.size(); ++b) {
      double zsign = (std::popcount(b & zmask) & 1) ? -1.0 : 1.0;
      s += std::conj(amps_[b ^ xmask]) * ph * zsign * amps_[b];
    }
    return s;
  }

  void dump_amplitudes(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw validation_error("cannot open " + path);
    for (const auto& a : amps_) {
      double re = a.real(), im = a.imag();
      f.write(reinterpret_cast<const char*>(&re), sizeof re);
      f.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
  }

 private:
  std::vector<Vertex> order_;
  std::vector<cplx> amps_;
};

inline StateVector prepare_graph_state(const Graph& g,
                                       std::size_t limit = dense_limit()) {
  if (g.num_vertices() > limit)
    throw validation_error("graph exceeds dense limit of " +
                           std::to_string(limit) + " qubits");
  StateVector s = StateVector::plus_states(g.vertices());
  for (const Edge& e : g.edges()) s.apply_cz(e.first, e.second);
  return s;
}

/// Noiseless expectation of a hermitian Pauli observable.
inline double expectation(const StateVector& s, const PauliString& p) {
  if (!p.hermitian()) throw validation_error("expectation needs hermitian input");
  cplx v = s.pauli_expectation(p);
  return v.real();
}

/// Per-qubit depolarizing noise shrinks a weight-w Pauli by (1-p)^w; exact
/// for Pauli observables, so the channel never has to be materialized.
inline double expectation(const StateVector& s, const PauliString& p,
                          const NoiseSpec& noise) {
  double v = expectation(s, p);
  if (noise.p != 0.0)
    v *= std::pow(1.0 - noise.p, static_cast<double>(p.weight()));
  return v;
}

inline double fidelity(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits())
    throw validation_error("fidelity: dimension mismatch");
  cplx s = 0;
  for (std::size_t i = 0; i < a.amplitudes().size(); ++i)
    s += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
  return std::norm(s);
}

/// Projective measurement of a Pauli basis at one vertex. Returns the
/// renormalized post-measurement state and the Born probability; probability
/// zero yields a zero-state marker (prob == 0, state unchanged).
inline std::pair<StateVector, double> project(const StateVector& s, Vertex v,
                                              PauliLetter basis, int outcome) {
  if (basis == PauliLetter::I)
    throw validation_error("projection basis must be X, Y or Z");
  std::size_t q = s.qubit(v);
  std::size_t mask = std::size_t(1) << q;
  StateVector out = s;
  auto& a = out.amplitudes();
  double sign = outcome ? -1.0 : 1.0;
  if (basis == PauliLetter::Z) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (((i & mask) != 0) != (outcome != 0)) a[i] = 0;
  } else {
    cplx f = (basis == PauliLetter::X) ? cplx(1, 0) : cplx(0, 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i & mask) continue;
      cplx a0 = a[i], a1 = a[i | mask];
      // (1 + sign*P)/2 with P in {X, Y}
      a[i] = (a0 + sign * std::conj(f) * a1) / 2.0;
      a[i | mask] = (a1 + sign * f * a0) / 2.0;
    }
  }
  double prob = 0;
  for (const auto& x : a) prob += std::norm(x);
  if (prob < 1e-300) return {s, 0.0};
  for (auto& x : a) x /= std::sqrt(prob);
  return {out, prob};
}

/// Contracts one qubit against a Pauli eigenvector, removing it from the
/// register. Unnormalized; the squared norm drop is the branch probability.
inline StateVector contract_qubit(const StateVector& s, Vertex v,
                                  PauliLetter basis, int outcome) {
  std::size_t q = s.qubit(v);
  std::size_t n = s.num_qubits();
  std::vector<Vertex> order;
  for (Vertex w : s.vertex_order())
    if (w != v) order.push_back(w);
  std::vector<cplx> out(std::size_t(1) << (n - 1));
  std::size_t low = (std::size_t(1) << q) - 1;
  double inv = 1.0 / std::sqrt(2.0);
  double sign = outcome ? -1.0 : 1.0;
  for (std::size_t r = 0; r < out.size(); ++r) {
    std::size_t b0 = (r & low) | ((r & ~low) << 1);
    std::size_t b1 = b0 | (std::size_t(1) << q);
    cplx a0 = s.amplitudes()[b0], a1 = s.amplitudes()[b1];
    switch (basis) {
      case PauliLetter::X: out[r] = (a0 + sign * a1) * inv; break;
      case PauliLetter::Y: out[r] = (a0 - sign * cplx(0, 1) * a1) * inv; break;
      case PauliLetter::Z: out[r] = outcome ? a1 : a0; break;
      default: throw validation_error("contraction basis must be X, Y or Z");
    }
  }
  return StateVector(std::move(order), std::move(out));
}

/// Measures every chain vertex in its deflation basis with the given
/// outcomes, removes those qubits and renormalizes. Returns the state on the
/// power vertices and the joint branch probability.
inline std::pair<StateVector, double> deflate(
    const StateVector& s, const InflatedGraph& ig,
    const std::map<Vertex, PauliLetter>& settings,
    const std::map<Vertex, int>& outcomes) {
  StateVector cur = s;
  for (auto& [edge, chain] : ig.chains())
    for (Vertex v : chain) {
      auto st = settings.find(v);
      auto oc = outcomes.find(v);
      if (st == settings.end()) throw validation_error("missing deflation setting");
      if (oc == outcomes.end()) throw validation_error("missing chain outcome");
      cur = contract_qubit(cur, v, st->second, oc->second);
    }
  double prob = cur.norm();
  prob *= prob;
  if (prob < 1e-24) return {cur, 0.0};
  cur.normalize();
  return {cur, prob};
}

}  // namespace graphcert
