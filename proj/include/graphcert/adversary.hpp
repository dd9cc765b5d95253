#pragma once

#include <atomic>
#include <cstdint>
#include <thread>

#include "graphcert/experiments.hpp"

namespace graphcert {

/// One binary output per (vertex, input view). A deterministic d-LHV*
/// strategy is an assignment to these variables; measurements whose views
/// coincide at a vertex are forced to reuse its output.
struct StrategyVariable {
  Vertex vertex;
  std::string view;
};

struct ParityConstraint {
  std::string label;            // measurement the constraint came from
  std::vector<int> vars;        // indices into ParitySystem::variables
  int parity;                   // required sum mod 2 (1 encodes target -1)
};

struct ParitySystem {
  std::vector<StrategyVariable> variables;
  std::vector<ParityConstraint> constraints;
};

/// Deterministic submeasurement targets become parity constraints over the
/// support vertices' view variables. Non-deterministic targets (RE 3's
/// 1/sqrt(2) correlations) are skipped; they live outside parity reach.
inline ParitySystem compile(const ReferenceExperiment& re) {
  ParitySystem sys;
  std::map<std::pair<Vertex, std::string>, int> index;
  auto var = [&](Vertex v, const std::string& view) {
    auto key = std::make_pair(v, view);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(sys.variables.size());
    index[key] = id;
    sys.variables.push_back({v, view});
    return id;
  };
  for (const auto& m : re.measurements) {
    // views exist for every vertex of every measurement, constrained or not
    for (Vertex v : re.state_graph.vertices()) var(v, input_view(re, m, v));
    if (!m.deterministic()) continue;
    ParityConstraint c;
    c.label = m.label;
    for (Vertex v : m.support) c.vars.push_back(var(v, input_view(re, m, v)));
    std::sort(c.vars.begin(), c.vars.end());
    c.parity = m.target < 0 ? 1 : 0;
    sys.constraints.push_back(std::move(c));
  }
  // variables that constrain nothing cannot influence feasibility; drop them
  std::vector<int> remap(sys.variables.size(), -1);
  std::vector<StrategyVariable> used;
  for (auto& c : sys.constraints)
    for (int v : c.vars)
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(used.size());
        used.push_back(sys.variables[v]);
      }
  for (auto& c : sys.constraints) {
    for (int& v : c.vars) v = remap[v];
    std::sort(c.vars.begin(), c.vars.end());
  }
  sys.variables = std::move(used);
  return sys;
}

struct Gf2Result {
  bool feasible = false;
  std::vector<int> assignment;        // per variable, when feasible
  std::vector<int> certificate;       // constraint indices XORing to 0 = 1
};

/// Gaussian elimination over GF(2). A feasible system returns a verified
/// assignment; an infeasible one returns a verified conflict certificate.
inline Gf2Result solve_gf2(const ParitySystem& sys) {
  std::size_t nv = sys.variables.size();
  std::size_t nc = sys.constraints.size();
  std::size_t words = (nv + 63) / 64 + 1;  // last word carries the parity bit
  std::size_t history_words = (nc + 63) / 64;

  std::vector<std::vector<std::uint64_t>> rows(nc), hist(nc);
  for (std::size_t i = 0; i < nc; ++i) {
    rows[i].assign(words, 0);
    hist[i].assign(history_words, 0);
    for (int v : sys.constraints[i].vars)
      rows[i][static_cast<std::size_t>(v) >> 6] ^= std::uint64_t(1) << (v & 63);
    if (sys.constraints[i].parity)
      rows[i][words - 1] ^= std::uint64_t(1) << 63;
    hist[i][i >> 6] = std::uint64_t(1) << (i & 63);
  }

  auto bit = [&](const std::vector<std::uint64_t>& r, std::size_t j) {
    return (r[j >> 6] >> (j & 63)) & 1;
  };
  auto parity_bit = [&](const std::vector<std::uint64_t>& r) {
    return (r[words - 1] >> 63) & 1;
  };

  std::vector<std::size_t> pivot_col;
  std::vector<std::size_t> pivot_row;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < nv && rank < nc; ++col) {
    std::size_t pr = nc;
    for (std::size_t r = rank; r < nc; ++r)
      if (bit(rows[r], col)) {
        pr = r;
        break;
      }
    if (pr == nc) continue;
    std::swap(rows[pr], rows[rank]);
    std::swap(hist[pr], hist[rank]);
    for (std::size_t r = 0; r < nc; ++r) {
      if (r == rank || !bit(rows[r], col)) continue;
      for (std::size_t wi = 0; wi < words; ++wi) rows[r][wi] ^= rows[rank][wi];
      for (std::size_t wi = 0; wi < history_words; ++wi)
        hist[r][wi] ^= hist[rank][wi];
    }
    pivot_col.push_back(col);
    pivot_row.push_back(rank);
    ++rank;
  }

  Gf2Result res;
  for (std::size_t r = rank; r < nc; ++r) {
    bool zero = true;
    for (std::size_t wi = 0; wi + 1 < words; ++wi)
      if (rows[r][wi]) zero = false;
    if (rows[r][words - 1] & ~(std::uint64_t(1) << 63)) zero = false;
    if (zero && parity_bit(rows[r])) {
      res.feasible = false;
      for (std::size_t i = 0; i < nc; ++i)
        if ((hist[r][i >> 6] >> (i & 63)) & 1)
          res.certificate.push_back(static_cast<int>(i));
      // verify: the certificate must XOR to an empty support with parity 1
      std::vector<int> count(nv, 0);
      int p = 0;
      for (int ci : res.certificate) {
        for (int v : sys.constraints[ci].vars) count[v] ^= 1;
        p ^= sys.constraints[ci].parity;
      }
      for (int c : count)
        if (c) throw std::logic_error("gf2 certificate has leftover support");
      if (p != 1) throw std::logic_error("gf2 certificate parity is even");
      return res;
    }
  }

  res.feasible = true;
  res.assignment.assign(nv, 0);
  for (std::size_t k = 0; k < pivot_col.size(); ++k)
    res.assignment[pivot_col[k]] = static_cast<int>(parity_bit(rows[pivot_row[k]]));
  for (const auto& c : sys.constraints) {
    int p = 0;
    for (int v : c.vars) p ^= res.assignment[v];
    if (p != c.parity)
      throw std::logic_error("gf2 assignment fails constraint " + c.label);
  }
  return res;
}

struct EnumerationResult {
  bool feasible = false;
  std::size_t satisfying_count = 0;
  std::size_t best_satisfied = 0;             // max constraints met at once
  double best_fraction = 0.0;                 // classical value of the system
  std::vector<int> best_assignment;
};

/// Brute force over all deterministic strategies; the independent oracle for
/// solve_gf2 and the source of classical values for tiny instances.
inline EnumerationResult enumerate_strategies(const ParitySystem& sys,
                                              std::size_t max_vars = 24) {
  std::size_t nv = sys.variables.size();
  if (nv > max_vars)
    throw validation_error("enumeration over " + std::to_string(nv) +
                           " variables exceeds the cap of " +
                           std::to_string(max_vars));
  std::size_t nc = sys.constraints.size();
  std::vector<std::uint64_t> mask(nc, 0);
  std::vector<int> par(nc, 0);
  for (std::size_t i = 0; i < nc; ++i) {
    for (int v : sys.constraints[i].vars) mask[i] |= std::uint64_t(1) << v;
    par[i] = sys.constraints[i].parity;
  }

  std::uint64_t total = std::uint64_t(1) << nv;
  unsigned nt = std::max(1u, std::thread::hardware_concurrency());
  if (total < 1 << 14) nt = 1;
  std::vector<EnumerationResult> partial(nt);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nt; ++t)
    pool.emplace_back([&, t]() {
      EnumerationResult& r = partial[t];
      for (std::uint64_t a = t; a < total; a += nt) {
        std::size_t sat = 0;
        for (std::size_t i = 0; i < nc; ++i)
          if ((std::popcount(a & mask[i]) & 1) == par[i]) ++sat;
        if (sat == nc) ++r.satisfying_count;
        if (sat > r.best_satisfied || r.best_assignment.empty()) {
          r.best_satisfied = sat;
          r.best_assignment.assign(nv, 0);
          for (std::size_t v = 0; v < nv; ++v)
            r.best_assignment[v] = static_cast<int>((a >> v) & 1);
        }
      }
    });
  for (auto& th : pool) th.join();

  EnumerationResult res;
  for (auto& r : partial) {
    res.satisfying_count += r.satisfying_count;
    if (r.best_satisfied > res.best_satisfied || res.best_assignment.empty()) {
      res.best_satisfied = r.best_satisfied;
      res.best_assignment = r.best_assignment;
    }
  }
  res.feasible = res.satisfying_count > 0;
  res.best_fraction =
      nc == 0 ? 1.0 : static_cast<double>(res.best_satisfied) / double(nc);
  return res;
}

/// CHSH-style classical maximum for RE 3: the best deterministic value of
/// (-1)^d (E[I2] - E[I1]) + E[I3] + E[I4], where each E is the product of the
/// strategy outputs over the I-measurement's support.
inline double re3_classical_chsh(const ReferenceExperiment& re,
                                 std::size_t max_vars = 24) {
  if (re.kind != REKind::re3) throw validation_error("needs an RE 3 instance");
  ParitySystem sys;
  std::map<std::pair<Vertex, std::string>, int> index;
  auto var = [&](Vertex v, const std::string& view) {
    auto key = std::make_pair(v, view);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(sys.variables.size());
    index[key] = id;
    sys.variables.push_back({v, view});
    return id;
  };
  std::array<std::uint64_t, 4> imask{};
  for (int i = 0; i < 4; ++i) {
    const Measurement& m = re.find("I" + std::to_string(i + 1));
    for (Vertex v : m.support)
      imask[static_cast<std::size_t>(i)] |=
          std::uint64_t(1) << var(v, input_view(re, m, v));
  }
  if (sys.variables.size() > max_vars)
    throw validation_error("RE 3 strategy space too large to enumerate");
  double sgn = (re.comm_d % 2 == 0) ? 1.0 : -1.0;  // (-1)^d
  double best = -1e300;
  std::uint64_t total = std::uint64_t(1) << sys.variables.size();
  for (std::uint64_t a = 0; a < total; ++a) {
    auto e = [&](int i) {
      return (std::popcount(a & imask[static_cast<std::size_t>(i)]) & 1) ? -1.0
                                                                         : 1.0;
    };
    best = std::max(best, sgn * (e(1) - e(0)) + e(2) + e(3));
  }
  return best;
}

/// XOR-clause text (CryptoMiniSat style): "x" rows list 1-based variables,
/// a leading negative literal flips the required parity to odd.
inline std::string export_xor_dimacs(const ParitySystem& sys) {
  std::ostringstream os;
  os << "p cnf " << sys.variables.size() << " " << sys.constraints.size() << "\n";
  for (const auto& c : sys.constraints) {
    os << "x";
    for (std::size_t i = 0; i < c.vars.size(); ++i) {
      int lit = c.vars[i] + 1;
      if (i == 0 && c.parity == 0) lit = -lit;  // even parity
      os << " " << lit;
    }
    os << " 0\n";
  }
  return os.str();
}

}  // namespace graphcert
