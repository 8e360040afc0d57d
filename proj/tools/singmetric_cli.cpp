// Command-line front end: distances, mass vectors, envelopes, the ceiling
// operator, the prescribed-singularity solver, and the verification suites.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "singmetric/core.hpp"
#include "singmetric/serialize.hpp"
#include "singmetric/suites.hpp"

namespace sm = singmetric;
using nlohmann::json;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitEngineMismatch = 3;
constexpr int kExitSuiteFailure = 4;
constexpr int kExitIncompatible = 5;
constexpr int kExitDivergence = 6;

std::string decimal12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("SINGMETRIC_SEED")) return std::strtoull(s, nullptr, 10);
  return 42;
}

std::string relation_name(sm::Relation r) {
  switch (r) {
    case sm::Relation::LEQ: return "LEQ";
    case sm::Relation::GEQ: return "GEQ";
    default: return "INCOMPARABLE";
  }
}

void require_same_engine(const sm::io::Handle& a, const sm::io::Handle& b) {
  if (a.payload.index() != b.payload.index())
    throw sm::EngineMismatch("inputs use different engines: " + a.engine() + " vs " + b.engine());
}

int cmd_dist(const std::string& afile, const std::string& bfile, bool exact_if_comparable) {
  auto a = sm::io::parse_handle(afile);
  auto b = sm::io::parse_handle(bfile);
  require_same_engine(a, b);
  json out;
  out["engine"] = a.engine();
  if (const auto* ta = std::get_if<sm::toric::ToricClass>(&a.payload)) {
    const auto& tb = std::get<sm::toric::ToricClass>(b.payload);
    sm::Rat est = sm::ds_estimate(*ta, tb);
    out["ds_estimate"] = sm::rat_to_string(est);
    std::cout << "ds_estimate = " << sm::rat_to_string(est) << "\n";
    if (exact_if_comparable) {
      auto w = sm::certify(*ta, tb);
      out["relation"] = relation_name(w.relation);
      if (w.relation != sm::Relation::INCOMPARABLE) {
        sm::Rat d = sm::ds_comparable(*ta, tb);
        out["ds_comparable"] = sm::rat_to_string(d);
        std::cout << "ds_comparable = " << sm::rat_to_string(d) << " ("
                  << relation_name(w.relation) << ")\n";
      } else {
        std::cout << "incomparable\n";
      }
    }
  } else if (const auto* aa = std::get_if<sm::atomic::AtomicSingularity>(&a.payload)) {
    const auto& ab = std::get<sm::atomic::AtomicSingularity>(b.payload);
    sm::Rat est = sm::ds_estimate(*aa, ab);
    out["ds_estimate"] = sm::rat_to_string(est);
    std::cout << "ds_estimate = " << sm::rat_to_string(est) << "\n";
    if (exact_if_comparable) {
      auto w = sm::certify(*aa, ab);
      out["relation"] = relation_name(w.relation);
      if (w.relation != sm::Relation::INCOMPARABLE) {
        sm::Rat d = sm::ds_comparable(*aa, ab);
        out["ds_comparable"] = sm::rat_to_string(d);
        std::cout << "ds_comparable = " << sm::rat_to_string(d) << " ("
                  << relation_name(w.relation) << ")\n";
      } else {
        std::cout << "incomparable\n";
      }
    }
  } else {
    const auto& ga = std::get<sm::grid::GridPotential>(a.payload);
    const auto& gb = std::get<sm::grid::GridPotential>(b.payload);
    double est = sm::ds_estimate(ga, gb);
    out["ds_estimate"] = est;
    std::cout << "ds_estimate = " << decimal12(est) << "\n";
    if (exact_if_comparable) {
      auto w = sm::certify(ga, gb);
      out["relation"] = relation_name(w.relation);
      if (w.relation != sm::Relation::INCOMPARABLE) {
        double d = sm::ds_comparable(ga, gb);
        out["ds_comparable"] = d;
        std::cout << "ds_comparable = " << decimal12(d) << " (" << relation_name(w.relation)
                  << ")\n";
      } else {
        std::cout << "incomparable\n";
      }
    }
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_mass(const std::string& file) {
  auto h = sm::io::parse_handle(file);
  json out;
  if (const auto* t = std::get_if<sm::toric::ToricClass>(&h.payload)) {
    out = sm::io::to_json(mass_vector(*t));
    out["engine"] = "toric";
  } else if (const auto* a = std::get_if<sm::atomic::AtomicSingularity>(&h.payload)) {
    out = sm::io::to_json(mass_vector(*a));
    out["engine"] = "atomic";
  } else {
    out = sm::io::to_json(mass_vector(std::get<sm::grid::GridPotential>(h.payload)), "grid");
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_envelope(const std::string& afile, const std::string& bfile, const std::string& outpath) {
  auto a = sm::io::parse_handle(afile);
  auto b = sm::io::parse_handle(bfile);
  require_same_engine(a, b);
  json out;
  if (const auto* ta = std::get_if<sm::toric::ToricClass>(&a.payload)) {
    auto m = sm::toric::meet(*ta, std::get<sm::toric::ToricClass>(b.payload));
    if (!m) throw sm::EnvelopeNonexistent("the rooftop envelope leaves the model (empty cap)");
    out = sm::io::to_json(*m);
  } else if (const auto* aa = std::get_if<sm::atomic::AtomicSingularity>(&a.payload)) {
    auto m = sm::atomic::meet(*aa, std::get<sm::atomic::AtomicSingularity>(b.payload));
    if (!m) throw sm::MeetNonexistent("the rooftop envelope exceeds the budget");
    out = sm::io::to_json(*m);
  } else {
    auto w = sm::grid::rooftop(std::get<sm::grid::GridPotential>(a.payload),
                               std::get<sm::grid::GridPotential>(b.payload));
    if (!outpath.empty()) {
      sm::io::write_grid(outpath, w);
      std::cout << "wrote " << outpath << "\n";
      return 0;
    }
    out = sm::io::sidecar_json(w);
  }
  if (!outpath.empty()) {
    std::ofstream f(outpath);
    f << out.dump(2) << "\n";
    std::cout << "wrote " << outpath << "\n";
  } else {
    std::cout << out.dump(2) << "\n";
  }
  return 0;
}

int cmd_ceiling(const std::string& file, const std::string& outpath) {
  auto h = sm::io::parse_handle(file);
  const auto* g = std::get_if<sm::grid::GridPotential>(&h.payload);
  if (!g) throw sm::UnsupportedEngine("ceiling is a grid-engine operation");
  auto c = sm::grid::ceiling(*g);
  json summary;
  summary["np_mass"] = sm::grid::np_mass(c);
  if (!outpath.empty()) {
    sm::io::write_grid(outpath, c);
    summary["out"] = outpath;
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_solve(const std::string& atoms_json, const std::string& f_file, int n, double tol,
              long max_iters, double trunc_depth, const std::string& outpath) {
  json aj;
  {
    std::string text = atoms_json;
    if (!text.empty() && text[0] != '{') {
      std::ifstream in(text);
      if (!in) throw sm::ParseError("cannot open " + text);
      std::stringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    try {
      aj = json::parse(text);
    } catch (const json::exception& e) {
      throw sm::ParseError(std::string("bad atoms JSON: ") + e.what());
    }
  }
  sm::grid::GridPotential meta;
  meta.N = n;
  if (aj.contains("N")) sm::io::sidecar_parse(aj, meta);
  else {
    meta.background = aj.value("c", 1.0);
    json wrap;
    wrap["N"] = n;
    wrap["c"] = meta.background;
    wrap["atoms"] = aj.value("atoms", json::array());
    sm::io::sidecar_parse(wrap, meta);
  }
  int N = meta.N;
  std::vector<double> f = sm::io::ends_with(f_file, ".csv") ? sm::io::read_values_csv(f_file, N)
                                                            : sm::io::read_values_binary(f_file, N);
  sm::grid::SolverConfig cfg;
  cfg.tol = tol;
  cfg.max_iters = max_iters;
  cfg.trunc_depth = trunc_depth;
  auto psi = sm::grid::solve_cmae(meta.atoms, N, f, meta.background, cfg);
  // residual of the discrete equation away from the atoms
  double res = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (sm::grid::is_atom_cell(psi, i, j)) continue;
      res = std::max(res, std::abs(sm::grid::laplacian(psi, i, j) -
                                   (f[psi.idx(i, j)] - psi.background)));
    }
  json summary;
  summary["residual"] = res;
  summary["np_mass"] = sm::grid::np_mass(psi, cfg);
  summary["iterations"] = 0;  // direct spectral solve
  if (!outpath.empty()) {
    sm::io::write_grid(outpath, psi);
    summary["out"] = outpath;
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_verify(const std::string& suite, long trials, std::uint64_t seed, int grid_n,
               const std::string& outpath) {
  sm::suite::SuiteOptions opt;
  opt.grid_n = grid_n;
  auto rep = sm::suite::run_suite(suite, trials, seed, opt);
  json j = sm::suite::to_json(rep);
  if (!outpath.empty()) {
    std::ofstream f(outpath);
    f << j.dump(2) << "\n";
  }
  std::cout << "suite " << suite << ": " << rep.trials << " trials, " << rep.violations
            << " violations, worst margin " << decimal12(rep.worst_margin) << ", "
            << rep.runtime_ms << " ms\n";
  if (rep.violations > 0) {
    std::string path = outpath.empty() ? suite + ".counterexamples.json" : outpath;
    if (outpath.empty()) {
      std::ofstream f(path);
      f << j.dump(2) << "\n";
    }
    std::cout << "counterexamples: " << path << "\n";
    return kExitSuiteFailure;
  }
  return 0;
}

int cmd_report(long trials, std::uint64_t seed, int grid_n, const std::string& outpath) {
  sm::suite::SuiteOptions opt;
  opt.grid_n = grid_n;
  json all = json::array();
  bool failed = false;
  for (const auto& name : sm::suite::suite_names()) {
    long t = trials;
    if (name == "stability") t = std::min<long>(trials, 1);
    if (name == "oracle-grid-vs-atomic") t = std::min<long>(trials, 50);
    auto rep = sm::suite::run_suite(name, t, seed, opt);
    all.push_back(sm::suite::to_json(rep));
    std::cout << "suite " << name << ": " << rep.violations << " violations ("
              << rep.runtime_ms << " ms)\n";
    failed = failed || rep.violations > 0;
  }
  if (!outpath.empty()) {
    std::ofstream f(outpath);
    f << all.dump(2) << "\n";
    std::cout << "wrote " << outpath << "\n";
  }
  return failed ? kExitSuiteFailure : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"computable singularity-type pseudometric: exact toric, atomic and grid engines"};
  app.require_subcommand(1);

  std::string a_in, b_in, out, suite_name, atoms_json, f_file;
  bool exact_if_comparable = false;
  long trials = 100;
  std::uint64_t seed = default_seed();
  int grid_n = 256;
  int n_flag = 0;
  double tol = 1e-8, trunc_depth = 0.0;
  long max_iters = 1000000;

  auto* dist = app.add_subcommand("dist", "distance between two singularity types");
  dist->add_option("a", a_in, "first input (path or inline JSON)")->required();
  dist->add_option("b", b_in, "second input")->required();
  dist->add_flag("--exact-if-comparable", exact_if_comparable,
                 "also print the exact comparable-case distance and the witness");

  auto* mass = app.add_subcommand("mass", "mass vector of a singularity type");
  mass->add_option("input", a_in, "input (path or inline JSON)")->required();

  auto* env = app.add_subcommand("envelope", "rooftop envelope of two types");
  env->add_option("a", a_in, "first input")->required();
  env->add_option("b", b_in, "second input")->required();
  env->add_option("--out", out, "output path");

  auto* ceil_cmd = app.add_subcommand("ceiling", "ceiling operator (grid engine)");
  ceil_cmd->add_option("input", a_in, "grid potential (values file with sidecar)")->required();
  ceil_cmd->add_option("--out", out, "output path");

  auto* solve = app.add_subcommand("solve", "Monge-Ampere solver with prescribed singularity");
  solve->add_option("atoms", atoms_json, "atoms JSON (path or inline)")->required();
  solve->add_option("density", f_file, "density file (CSV or flat binary)")->required();
  solve->add_option("--n", n_flag, "grid resolution (when absent from the atoms JSON)");
  solve->add_option("--tol", tol, "solver tolerance");
  solve->add_option("--max-iters", max_iters, "iteration cap");
  solve->add_option("--trunc-depth", trunc_depth, "truncation depth (0 = adaptive)");
  solve->add_option("--out", out, "output potential path");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite_name, "suite id")->required();
  verify->add_option("--trials", trials, "trial count");
  verify->add_option("--seed", seed, "RNG seed");
  verify->add_option("--grid-n", grid_n, "grid resolution for grid suites");
  verify->add_option("--out", out, "report output path");

  auto* report = app.add_subcommand("report", "run all suites and write a combined report");
  report->add_option("--trials", trials, "trial count per suite");
  report->add_option("--seed", seed, "RNG seed");
  report->add_option("--grid-n", grid_n, "grid resolution for grid suites");
  report->add_option("--out", out, "combined report path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dist->parsed()) return cmd_dist(a_in, b_in, exact_if_comparable);
    if (mass->parsed()) return cmd_mass(a_in);
    if (env->parsed()) return cmd_envelope(a_in, b_in, out);
    if (ceil_cmd->parsed()) return cmd_ceiling(a_in, out);
    if (solve->parsed()) return cmd_solve(atoms_json, f_file, n_flag, tol, max_iters, trunc_depth, out);
    if (verify->parsed()) return cmd_verify(suite_name, trials, seed, grid_n, out);
    if (report->parsed()) return cmd_report(trials, seed, grid_n, out);
  } catch (const sm::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const sm::EngineMismatch& e) {
    std::cerr << "engine mismatch: " << e.what() << "\n";
    return kExitEngineMismatch;
  } catch (const sm::IncompatibleData& e) {
    std::cerr << "incompatible data: " << e.what() << "\n";
    return kExitIncompatible;
  } catch (const sm::SingularBudget& e) {
    std::cerr << "incompatible data: " << e.what() << "\n";
    return kExitIncompatible;
  } catch (const sm::Divergence& e) {
    std::cerr << "solver divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const sm::UnknownSuite& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
