// Command-line surface: inflate graphs, generate reference experiments,
// simulate correlations, certify classical infeasibility and run the
// self-testing pipeline.

#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "graphcert/io.hpp"
#include "graphcert/lattices.hpp"

using namespace graphcert;

namespace {

Graph load_graph_file(const std::string& path) {
  json j = load_json(path);
  if (j.contains("schema")) check_schema(j);
  return graph_from_json(j);
}

ReferenceExperiment generate_re(const Graph& g, int d, std::string kind) {
  if (kind == "auto") {
    if (auto cyc = find_odd_cycle(g)) return build_re1(inflate(g, d), *cyc);
    if (auto star = find_induced_star(g)) return build_re2(inflate(g, d), *star);
    if (!g.edges().empty()) {
      Edge e = g.edges().front();
      return build_re3(inflate(g, d), e.first, e.second);
    }
    throw validation_error(
        "no applicable subgraph: graph has no edge, cycle or star");
  }
  if (kind == "re0") {
    auto line = find_line_of_three(g);
    if (!line) throw validation_error("graph has no induced line of three");
    return build_re0(g, *line);
  }
  if (kind == "re1") {
    auto cyc = find_odd_cycle(g);
    if (!cyc) throw validation_error("graph has no induced odd cycle");
    return build_re1(inflate(g, d), *cyc);
  }
  if (kind == "re2") {
    auto star = find_induced_star(g);
    if (!star) throw validation_error("graph has no induced star");
    return build_re2(inflate(g, d), *star);
  }
  if (kind == "re3") {
    if (g.edges().empty()) throw validation_error("graph has no edge");
    Edge e = g.edges().front();
    return build_re3(inflate(g, d), e.first, e.second);
  }
  if (kind == "re4")
    return build_re4_circle(static_cast<int>(g.num_vertices()), d);
  throw validation_error("unsupported kind for a graph input: " + kind);
}

std::map<Vertex, int> outcome_string(const ReferenceExperiment& re,
                                     std::uint64_t bits) {
  std::map<Vertex, int> out;
  std::size_t i = 0;
  for (const auto& [v, b] : re.deflation_settings)
    out[v] = static_cast<int>((bits >> i++) & 1);
  return out;
}

int selftest_exit(bool ok) { return ok ? 0 : 1; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graphcert: inflated graph-state self-testing toolkit"};
  app.require_subcommand(1);

  // ---- inflate
  auto* c_inflate = app.add_subcommand("inflate", "d-inflate a graph");
  std::string in_graph, out_path;
  int d = 1;
  c_inflate->add_option("--graph", in_graph, "graph JSON")->required();
  c_inflate->add_option("--d", d, "inflation distance")->required();
  c_inflate->add_option("--out", out_path, "output file");

  // ---- gen-re
  auto* c_genre = app.add_subcommand("gen-re", "build a reference experiment");
  std::string kind = "auto";
  int rows = 0, cols = 0, circle_n = 0;
  bool generators_only = false;
  c_genre->add_option("--graph", in_graph, "graph JSON");
  c_genre->add_option("--circle", circle_n, "circle length (RE 4)");
  c_genre->add_option("--rows", rows, "honeycomb torus rows (RE 5)");
  c_genre->add_option("--cols", cols, "honeycomb torus cols (RE 5)");
  c_genre->add_option("--d", d, "communication distance");
  c_genre->add_option("--kind", kind, "auto|re0|re1|re2|re3|re4|re5");
  c_genre->add_flag("--generators-only", generators_only,
                    "keep only the generator measurements");
  c_genre->add_option("--out", out_path, "output file");

  // ---- simulate
  auto* c_sim = app.add_subcommand("simulate", "ideal or noisy correlations");
  std::string re_path, dump_path, corr_path;
  double noise_p = 0.0;
  c_sim->add_option("--re", re_path, "reference experiment JSON")->required();
  c_sim->add_option("--noise", noise_p, "per-qubit depolarizing probability");
  c_sim->add_option("--out", out_path, "output file");
  c_sim->add_option("--dump-state", dump_path, "binary amplitude dump (dense)");

  // ---- lhv-check
  auto* c_lhv = app.add_subcommand("lhv-check", "d-LHV* parity certificate");
  std::size_t max_vars = 24;
  bool skip_enum = false;
  c_lhv->add_option("--re", re_path, "reference experiment JSON")->required();
  c_lhv->add_option("--max-vars", max_vars, "enumeration cap");
  c_lhv->add_flag("--skip-enumerate", skip_enum, "GF(2) only");
  c_lhv->add_option("--out", out_path, "output file");

  // ---- selftest
  auto* c_st = app.add_subcommand("selftest", "deflation + SWAP isometry");
  bool ideal = false;
  std::string adversary, outcomes_mode = "zeros";
  std::uint64_t seed = 1;
  double eps_threshold = 1e-9, fid_slack = 1e-9, theta = 0.1;
  c_st->add_option("--re", re_path, "reference experiment JSON")->required();
  c_st->add_flag("--ideal", ideal, "honest devices, ideal state");
  c_st->add_option("--noise", noise_p, "coherent noise emulation strength");
  c_st->add_option("--adversary", adversary, "signflip|rotate|product");
  c_st->add_option("--theta", theta, "rotation angle for the rotate adversary");
  c_st->add_option("--correlations", corr_path,
                   "measured correlations JSON (epsilon-only mode)");
  c_st->add_option("--outcomes", outcomes_mode, "zeros|random|all");
  c_st->add_option("--seed", seed, "outcome seed for random mode");
  c_st->add_option("--eps-threshold", eps_threshold, "verdict threshold");
  c_st->add_option("--fidelity-slack", fid_slack, "verdict slack");
  c_st->add_option("--out", out_path, "output file");

  // ---- bounds
  auto* c_bounds = app.add_subcommand("bounds", "Table-I robustness bounds");
  std::string bkind = "re0";
  BoundParams bp;
  double eps = 0.0;
  bool as_json = false;
  c_bounds->add_option("--kind", bkind, "re0|re1|re2-two-leaf|re2-star|re3|generic");
  c_bounds->add_option("--nv", bp.n_vertices, "vertex count")->required();
  c_bounds->add_option("--ne", bp.n_edges, "edge count (generic)");
  c_bounds->add_option("--m", bp.m_cycle, "cycle length (RE 1)");
  c_bounds->add_option("--nvc", bp.n_center, "star degree (RE 2)");
  c_bounds->add_option("--l", bp.l, "anchor eccentricity (generic)");
  c_bounds->add_option("--c", bp.c, "constant c (generic)");
  c_bounds->add_option("--eps", eps, "epsilon")->required();
  c_bounds->add_flag("--json", as_json, "machine output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_inflate) {
      Graph g = load_graph_file(in_graph);
      InflatedGraph ig = inflate(g, d);
      json j = to_json(ig);
      if (out_path.empty())
        std::cout << j.dump(2) << "\n";
      else
        save_json(j, out_path);
      return 0;
    }

    if (*c_genre) {
      ReferenceExperiment re;
      if (kind == "re5") {
        if (rows == 0 || cols == 0)
          throw validation_error("re5 needs --rows and --cols");
        re = build_re5_honeycomb(rows, cols, d);
      } else if (circle_n > 0 || kind == "re4") {
        int n = circle_n > 0 ? circle_n
                             : static_cast<int>(load_graph_file(in_graph)
                                                    .num_vertices());
        re = build_re4_circle(n, d);
      } else {
        if (in_graph.empty()) throw validation_error("gen-re needs --graph");
        re = generate_re(load_graph_file(in_graph), d, kind);
      }
      if (generators_only) {
        std::vector<Measurement> keep;
        for (auto& m : re.measurements)
          if (m.label.rfind("f[", 0) == 0 || m.label.rfind("g[", 0) == 0)
            keep.push_back(std::move(m));
        re.measurements = std::move(keep);
      }
      json j = to_json(re);
      if (out_path.empty())
        std::cout << j.dump(2) << "\n";
      else
        save_json(j, out_path);
      return 0;
    }

    if (*c_sim) {
      ReferenceExperiment re = re_from_json(load_json(re_path));
      auto corr = simulate_correlations(re, NoiseSpec{noise_p});
      json j;
      j["schema"] = kSchemaVersion;
      j["noise"] = noise_p;
      json c;
      for (auto& [k, v] : corr) c[k] = v;
      j["correlations"] = c;
      if (!dump_path.empty()) {
        StateVector psi = prepare_graph_state(re.state_graph);
        psi.dump_amplitudes(dump_path);
      }
      if (out_path.empty())
        std::cout << j.dump(2) << "\n";
      else
        save_json(j, out_path);
      return 0;
    }

    if (*c_lhv) {
      ReferenceExperiment re = re_from_json(load_json(re_path));
      ParitySystem sys = compile(re);
      Gf2Result gf2 = solve_gf2(sys);
      json j = to_json(sys, gf2);
      std::string verdict = gf2.feasible ? "feasible" : "infeasible";
      if (re.kind == REKind::re3 && gf2.feasible) {
        verdict = "parity-inconclusive";
        try {
          double classical = re3_classical_chsh(re, max_vars);
          j["chsh"] = {{"classical_max", classical},
                       {"quantum", 2.0 * std::sqrt(2.0)}};
        } catch (const validation_error&) {
        }
      }
      if (!skip_enum && sys.variables.size() <= max_vars) {
        auto en = enumerate_strategies(sys, max_vars);
        if (en.feasible != gf2.feasible)
          throw std::logic_error("enumeration disagrees with GF(2) verdict");
        j["enumeration"] = {{"feasible", en.feasible},
                            {"satisfying_count", en.satisfying_count},
                            {"best_fraction", en.best_fraction}};
      }
      j["verdict"] = verdict;
      j["xor_dimacs"] = export_xor_dimacs(sys);
      if (out_path.empty())
        std::cout << j.dump(2) << "\n";
      else
        save_json(j, out_path);
      return 0;
    }

    if (*c_st) {
      ReferenceExperiment re = re_from_json(load_json(re_path));
      if (!corr_path.empty()) {
        json cj = load_json(corr_path);
        check_schema(cj);
        std::map<std::string, double> measured;
        for (auto& [k, v] : cj.at("correlations").items())
          measured[k] = v.get<double>();
        double epsv = check_simulation(measured, re);
        double bound = robustness_bound(bound_kind_for(re), bound_params_for(re),
                                        epsv);
        json j;
        j["schema"] = kSchemaVersion;
        j["epsilon"] = epsv;
        j["delta_bound"] = bound;
        j["verdict"] = epsv <= eps_threshold ? "pass" : "fail";
        if (out_path.empty())
          std::cout << j.dump(2) << "\n";
        else
          save_json(j, out_path);
        return selftest_exit(epsv <= eps_threshold);
      }

      if (re.state_graph.num_vertices() > dense_limit())
        throw validation_error(
            "state exceeds the dense limit; use --correlations");

      StateVector phys = prepare_graph_state(re.state_graph);
      ObservableAssignment a = ideal_assignment(re);
      if (!adversary.empty()) {
        Vertex tgt = re.inflation ? re.inflation->base().vertices().front()
                                  : re.state_graph.vertices().front();
        if (adversary == "signflip")
          a = sign_flip_assignment(re, tgt);
        else if (adversary == "rotate")
          a = rotated_assignment(re, tgt, theta);
        else if (adversary == "product")
          phys = StateVector::plus_states(re.state_graph.vertices());
        else
          throw validation_error("unknown adversary: " + adversary);
      } else if (!ideal && noise_p > 0.0) {
        phys = noisy_emulation_state(re.state_graph, noise_p);
      }

      std::size_t n_chain = re.deflation_settings.size();
      std::vector<std::uint64_t> branches;
      if (outcomes_mode == "zeros") {
        branches.push_back(0);
      } else if (outcomes_mode == "random") {
        std::mt19937_64 rng(seed);
        branches.push_back(n_chain ? rng() & ((std::uint64_t(1) << n_chain) - 1)
                                   : 0);
      } else if (outcomes_mode == "all") {
        if (n_chain > 12)
          throw validation_error("--outcomes all capped at 2^12 branches");
        for (std::uint64_t b = 0; b < (std::uint64_t(1) << n_chain); ++b)
          branches.push_back(b);
      } else {
        throw validation_error("bad --outcomes mode: " + outcomes_mode);
      }

      bool all_pass = true;
      SelfTestReport worst;
      double min_fid = 2.0;
      for (std::uint64_t b : branches) {
        SelfTestReport rep = run_selftest(re, phys, a, outcome_string(re, b),
                                          eps_threshold, fid_slack);
        all_pass = all_pass && rep.pass;
        if (rep.isometry_fidelity < min_fid) {
          min_fid = rep.isometry_fidelity;
          worst = rep;
        }
      }
      json j = to_json(worst);
      j["branches"] = branches.size();
      j["min_isometry_fidelity"] = min_fid;
      j["verdict"] = all_pass ? "pass" : "fail";
      if (out_path.empty())
        std::cout << j.dump(2) << "\n";
      else
        save_json(j, out_path);
      return selftest_exit(all_pass);
    }

    if (*c_bounds) {
      BoundKind bk = bound_kind_from_name(bkind);
      double delta = robustness_bound(bk, bp, eps);
      double c = bound_constant(bk, bp);
      if (as_json) {
        json j;
        j["schema"] = kSchemaVersion;
        j["kind"] = bkind;
        j["c"] = c;
        j["epsilon"] = eps;
        j["delta"] = delta;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "kind=" << bkind << "  c=" << c << "  eps=" << eps
                  << "  delta=" << delta << "\n";
      }
      return 0;
    }
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
