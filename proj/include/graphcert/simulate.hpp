#pragma once

#include "graphcert/experiments.hpp"
#include "graphcert/statevector.hpp"

namespace graphcert {

/// Ideal or depolarized correlations for every measurement of the RE.
/// Dense backend below the qubit cap, stabilizer tableau above it; the noise
/// shrink (1-p)^weight applies termwise either way.
inline std::map<std::string, double> simulate_correlations(
    const ReferenceExperiment& re, NoiseSpec noise = {},
    std::size_t dense_cap = dense_limit()) {
  const Graph& sg = re.state_graph;
  std::map<std::string, double> out;
  if (sg.num_vertices() <= dense_cap) {
    StateVector psi = prepare_graph_state(sg, dense_cap);
    for (const auto& m : re.measurements) {
      double v = 0;
      for (const auto& t : m.observable_terms(sg))
        v += t.coeff * expectation(psi, t.op, noise);
      out[m.label] = v;
    }
  } else {
    StabilizerTableau tab = tableau_from_graph(sg);
    for (const auto& m : re.measurements) {
      double v = 0;
      for (const auto& t : m.observable_terms(sg)) {
        double e = tab.expectation(t.op);
        if (noise.p != 0.0)
          e *= std::pow(1.0 - noise.p, static_cast<double>(t.op.weight()));
        v += t.coeff * e;
      }
      out[m.label] = v;
    }
  }
  return out;
}

}  // namespace graphcert
