// radapt: command-line driver for the r-adaptive 1D solver.
//
// Exit codes: 0 ok, 1 usage or configuration error, 2 numerical failure,
// 3 gamma-check verdict FAIL.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "radapt/energy.hpp"
#include "radapt/experiment.hpp"
#include "radapt/fem.hpp"

namespace {

using namespace radapt;

using KeyValues = std::map<std::string, std::string>;

enum Exit { kOk = 0, kUsage = 1, kNumeric = 2, kVerdictFail = 3 };

// Registers a string flag whose value lands in kv[key] when given.
CLI::Option* flag_kv(CLI::App* app, const std::string& name, const std::string& key, KeyValues& kv,
                     const std::string& help) {
  return app->add_option_function<std::string>(name, [&kv, key](const std::string& v) { kv[key] = v; }, help);
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Output goes to a file when a path is given, to stdout otherwise.
void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_file_atomic(path, content);
  }
}

int single_n(const ExperimentConfig& cfg) {
  if (cfg.n_list.size() != 1) throw ConfigError("key 'n': this command takes a single n");
  return cfg.n_list.front();
}

void report(const Diagnostics& diag) {
  for (const auto& w : diag.warnings) std::cerr << "warning: " << w << '\n';
}

void report_fallback(const ScalarField& f) {
  if (f.fallback_used()) std::cerr << "warning: derivatives of " << f.label() << " fell back to finite differences\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"r-adaptive piecewise-affine finite elements in one dimension"};
  app.require_subcommand(1);
  app.fallthrough();

  KeyValues flags;
  std::string config_path;
  app.add_option("--config", config_path, "key=value file; flags override its entries");
  flag_kv(&app, "--domain", "domain", flags, "interval a,b (default 0,1)");
  flag_kv(&app, "--quad-order", "quad_order", flags, "Gauss points per subcell (0: automatic)");
  flag_kv(&app, "--out-dir", "out_dir", flags, "output directory for compare, gamma-check, mesh-dump");
  app.add_flag_callback("--plot", [&flags] { flags["plot"] = "on"; }, "also write SVG plots");

  auto problem_flags = [&flags](CLI::App* sub, bool with_n) {
    flag_kv(sub, "--f", "f", flags, "forcing: const:c, poly:k, root:p, gauss:mu,sigma");
    if (with_n) flag_kv(sub, "--n", "n", flags, "number of cells (default 16)");
  };
  auto gd_flags = [&flags](CLI::App* sub) {
    flag_kv(sub, "--eta", "eta", flags, "step size (0: method default)");
    flag_kv(sub, "--tol", "tol", flags, "stop when the gradient 1-norm is below this");
    flag_kv(sub, "--max-iter", "max_iter", flags, "iteration cap");
    flag_kv(sub, "--method", "method", flags, "preconditioned or fixed");
    flag_kv(sub, "--init", "init", flags, "starting mesh: amf or uniform");
    flag_kv(sub, "--backtracking", "backtracking", flags, "on or off");
  };
  auto sweep_flags = [&flags](CLI::App* sub) {
    flag_kv(sub, "--n-list", "n_list", flags, "comma-separated cell counts");
    flag_kv(sub, "--methods", "methods", flags, "comma-separated subset of equi,amf,gd");
    flag_kv(sub, "--seed", "seed", flags, "recorded seed");
  };

  std::string out_path, map_path, trace_path, nodes_path, mesh_path, mesh_kind = "uniform";
  int grid = 101;

  auto* solve = app.add_subcommand("solve", "exact solution on a uniform grid: x,u,du,d2u");
  problem_flags(solve, false);
  solve->add_option("--grid", grid, "number of grid points")->check(CLI::Range(2, 100000000));
  solve->add_option("--out", out_path, "CSV path (stdout if omitted)");

  auto* fem = app.add_subcommand("fem", "Galerkin solution: x,u");
  problem_flags(fem, true);
  fem->add_option("--mesh", mesh_path, "mesh CSV (column x); uniform n-cell mesh if omitted");
  fem->add_option("--out", out_path, "CSV path (stdout if omitted)");

  auto* amf = app.add_subcommand("amf", "asymptotic mesh nodes: x");
  problem_flags(amf, true);
  amf->add_option("--out", out_path, "nodes CSV path (stdout if omitted)");
  amf->add_option("--map", map_path, "also dump the map table x,y");

  auto* gd = app.add_subcommand("gd", "joint descent over nodes and values");
  problem_flags(gd, true);
  gd_flags(gd);
  gd->add_option("--trace", trace_path, "iteration trace CSV: iter,energy,gradnorm");
  gd->add_option("--nodes", nodes_path, "final nodes and values CSV: x,u");

  auto* energy = app.add_subcommand("energy", "one row n,action,exact_action,gap,renormalized");
  problem_flags(energy, true);
  gd_flags(energy);
  energy->add_option("--mesh-kind", mesh_kind, "uniform, amf or gd (default uniform)")
      ->check(CLI::IsMember({"uniform", "equi", "amf", "gd"}));
  energy->add_option("--mesh", mesh_path, "mesh CSV (column x); overrides --mesh-kind");

  auto* compare = app.add_subcommand("compare", "equidistributed vs AMF vs GD metrics per n");
  problem_flags(compare, false);
  gd_flags(compare);
  sweep_flags(compare);

  auto* gamma = app.add_subcommand("gamma-check", "GD energies against the limit minimum");
  problem_flags(gamma, false);
  gd_flags(gamma);
  sweep_flags(gamma);

  auto* dump = app.add_subcommand("mesh-dump", "AMF nodes with the interpolant and a dense exact solution");
  problem_flags(dump, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    KeyValues kv;
    const bool single = !(compare->parsed() || gamma->parsed());
    if (single) kv["n"] = "16";
    if (!config_path.empty()) {
      for (auto& [k, v] : parse_key_values(slurp(config_path))) kv[k] = v;
    }
    // A flag wins over the file, including n against n_list.
    if (flags.count("n")) kv.erase("n_list");
    if (flags.count("n_list")) kv.erase("n");
    for (const auto& [k, v] : flags) kv[k] = v;
    if (single && kv.count("n") && kv.count("n_list")) kv.erase("n_list");
    const ExperimentConfig cfg = config_from_map(kv);

    if (compare->parsed()) {
      const auto out = run_compare(cfg);
      report(out.diagnostics);
      for (const auto& p : out.files) std::cout << p.string() << '\n';
      return kOk;
    }
    if (gamma->parsed()) {
      const auto out = run_gamma_check(cfg);
      for (const auto& d : out.diagnostics) std::cerr << "note: " << d << '\n';
      std::cout << "n,energy_gd,min_limit,ratio\n";
      for (const auto& r : out.rows) {
        std::cout << r.n << ',' << format_number(r.energy_gd) << ',' << format_number(r.min_limit) << ','
                  << format_number(r.ratio) << '\n';
      }
      std::cout << "verdict: " << to_string(out.verdict) << '\n';
      return out.verdict == Verdict::Fail ? kVerdictFail : kOk;
    }
    if (dump->parsed()) {
      const auto out = run_mesh_dump(cfg, single_n(cfg));
      for (const auto& p : out.files) std::cout << p.string() << '\n';
      return kOk;
    }

    const Problem problem = make_problem(cfg.f_spec, cfg.a, cfg.b, cfg.quad_order);
    std::ostringstream os;

    if (solve->parsed()) {
      os << "x,u,du,d2u\n";
      for (int i = 0; i < grid; ++i) {
        const double x = i == grid - 1 ? cfg.b : cfg.a + i * (cfg.b - cfg.a) / (grid - 1);
        os << format_number(x) << ',' << format_number(problem.exact(x)) << ','
           << format_number(problem.exact.deriv1(x)) << ',' << format_number(problem.exact.deriv2(x)) << '\n';
      }
      emit(out_path, os.str());
    } else if (fem->parsed()) {
      std::optional<Mesh> mesh;
      if (!mesh_path.empty()) {
        std::ifstream is(mesh_path);
        if (!is) throw ConfigError("cannot read mesh file '" + mesh_path + "'");
        mesh = read_mesh_csv(is);
      } else {
        mesh = uniform_mesh(single_n(cfg), cfg.a, cfg.b);
      }
      write_pa_csv(os, galerkin_solve(problem.f, *mesh, problem.rule));
      emit(out_path, os.str());
    } else if (amf->parsed()) {
      const int n = single_n(cfg);
      Diagnostics diag;
      const auto map = asymptotic_map(problem.f, cfg.a, cfg.b, problem.rule, default_table_samples(n));
      write_mesh_csv(os, amf_mesh(map, n, &diag));
      emit(out_path, os.str());
      if (!map_path.empty()) {
        std::ostringstream ms;
        ms << "x,y\n";
        for (Eigen::Index i = 0; i < map.grid().size(); ++i) {
          ms << format_number(map.grid()[i]) << ',' << format_number(map.values()[i]) << '\n';
        }
        write_file_atomic(map_path, ms.str());
      }
      report(diag);
    } else if (gd->parsed()) {
      const auto result = gd_from(problem, single_n(cfg), cfg.gd, cfg.init);
      if (!trace_path.empty()) {
        std::ostringstream ts;
        ts << "iter,energy,gradnorm\n";
        for (const auto& row : result.trace) {
          ts << row.iter << ',' << format_number(row.energy) << ',' << format_number(row.gradnorm) << '\n';
        }
        write_file_atomic(trace_path, ts.str());
      }
      if (!nodes_path.empty()) {
        std::ostringstream ns;
        write_pa_csv(ns, state_function(result.state, cfg.a, cfg.b));
        write_file_atomic(nodes_path, ns.str());
      }
      std::cout << "status=" << to_string(result.status) << " iterations=" << result.state.iter
                << " energy=" << format_number(result.state.energy) << '\n';
      if (result.status == GdStatus::Infeasible) return kNumeric;
    } else if (energy->parsed()) {
      const int n = single_n(cfg);
      PiecewiseAffine un = [&] {
        if (!mesh_path.empty()) {
          std::ifstream is(mesh_path);
          if (!is) throw ConfigError("cannot read mesh file '" + mesh_path + "'");
          return galerkin_solve(problem.f, read_mesh_csv(is), problem.rule);
        }
        if (mesh_kind == "amf") return galerkin_solve(problem.f, amf_mesh_for(problem, n), problem.rule);
        if (mesh_kind == "gd") return state_function(gd_from(problem, n, cfg.gd, cfg.init).state, cfg.a, cfg.b);
        return galerkin_solve(problem.f, uniform_mesh(n, cfg.a, cfg.b), problem.rule);
      }();
      const auto r = renormalized_gap(DirichletLagrangian{problem.f}, un, problem.exact, un.mesh().cells(),
                                      problem.rule);
      std::cout << "n,action,exact_action,gap,renormalized\n"
                << r.n << ',' << format_number(r.action) << ',' << format_number(r.exact_action) << ','
                << format_number(r.gap) << ',' << format_number(r.renormalized) << '\n';
    }
    report_fallback(problem.f);
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
}
