#include "radapt/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <sstream>
#include <thread>

#include "radapt/energy.hpp"
#include "radapt/fem.hpp"
#include "radapt/svg.hpp"

namespace radapt {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(std::string_view(s).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_real(const std::string& key, const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("key '" + key + "': expected a number, got '" + s + "'");
  }
  return v;
}

long long to_integer(const std::string& key, const std::string& s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + s + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "1" || s == "true" || s == "on" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "off" || s == "no") return false;
  throw ConfigError("key '" + key + "': expected on/off, got '" + s + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n_list.empty()) throw ConfigError("key 'n_list': at least one element count is required");
  for (int n : n_list) {
    if (n < 2) throw ConfigError("key 'n_list': every n must be >= 2, got " + std::to_string(n));
  }
  try {
    parse_field_spec(f_spec);
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("key 'f': ") + e.what());
  }
  if (!(a < b)) throw ConfigError("key 'domain': need a < b");
  if (init != "amf" && init != "uniform") throw ConfigError("key 'init': expected amf or uniform, got '" + init + "'");
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> kv;
  int lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string content = trim(line);
    if (!content.empty()) {
      const auto eq = content.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value', got '" + content + "'");
      }
      const std::string key = trim(std::string_view(content).substr(0, eq));
      if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
      kv[key] = trim(std::string_view(content).substr(eq + 1));
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return kv;
}

ExperimentConfig config_from_map(const std::map<std::string, std::string>& kv) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : kv) {
    if (key == "f") {
      cfg.f_spec = value;
    } else if (key == "n_list" || key == "n") {
      cfg.n_list.clear();
      for (const auto& item : split(value, ',')) cfg.n_list.push_back(static_cast<int>(to_integer(key, item)));
    } else if (key == "methods") {
      cfg.methods.clear();
      for (const auto& item : split(value, ',')) {
        try {
          cfg.methods.push_back(parse_mesh_method(item));
        } catch (const InvalidParameter& e) {
          throw ConfigError("key 'methods': " + std::string(e.what()));
        }
      }
    } else if (key == "eta") {
      cfg.gd.eta = to_real(key, value);
    } else if (key == "tol") {
      cfg.gd.tol = to_real(key, value);
      if (!(cfg.gd.tol > 0.0)) throw ConfigError("key 'tol': must be positive");
    } else if (key == "max_iter") {
      cfg.gd.max_iter = static_cast<int>(to_integer(key, value));
    } else if (key == "method") {
      try {
        cfg.gd.method = parse_gd_method(value);
      } catch (const InvalidParameter& e) {
        throw ConfigError("key 'method': " + std::string(e.what()));
      }
    } else if (key == "backtracking") {
      cfg.gd.backtracking = to_bool(key, value);
    } else if (key == "init") {
      cfg.init = value;
    } else if (key == "out_dir") {
      cfg.out_dir = value;
    } else if (key == "plot") {
      cfg.plot = to_bool(key, value);
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(to_integer(key, value));
    } else if (key == "domain") {
      const auto parts = split(value, ',');
      if (parts.size() != 2) throw ConfigError("key 'domain': expected 'a,b'");
      cfg.a = to_real(key, parts[0]);
      cfg.b = to_real(key, parts[1]);
    } else if (key == "quad_order") {
      cfg.quad_order = static_cast<int>(to_integer(key, value));
      if (cfg.quad_order < 0) throw ConfigError("key 'quad_order': must be >= 0");
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

Problem make_problem(const std::string& f_spec, double a, double b, int quad_order) {
  ScalarField f = make_field(f_spec).on_domain(a, b);
  QuadratureRule rule = rule_for(f, a, b);
  if (quad_order > 0) rule.order = quad_order;
  ExactSolution exact = solve_exact(f, a, b, rule);
  return Problem{std::move(f), a, b, rule, std::move(exact)};
}

Mesh amf_mesh_for(const Problem& problem, int n, Diagnostics* diag) {
  const auto map = asymptotic_map(problem.f, problem.a, problem.b, problem.rule, default_table_samples(n));
  return amf_mesh(map, n, diag);
}

GdResult gd_from(const Problem& problem, int n, const GdConfig& cfg, const std::string& init) {
  const Mesh start = init == "uniform" ? uniform_mesh(n, problem.a, problem.b) : amf_mesh_for(problem, n);
  const auto state = galerkin_state(problem.f, start, problem.exact, problem.rule);
  return gd_run(problem.f, state, cfg, problem.exact, problem.rule);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tag = std::hash<std::thread::id>{}(std::this_thread::get_id());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(tag);
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + tmp.string() + " for writing");
    os << content;
    if (!os) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

struct CellResult {
  std::vector<ComparisonRow> rows;
  std::vector<std::string> warnings;
};

ComparisonRow measure(const Problem& problem, int n, MeshMethod method, const PiecewiseAffine& un, const Mesh& gd_mesh) {
  const DirichletLagrangian lagrangian{problem.f};
  ComparisonRow row;
  row.n = n;
  row.method = method;
  row.rel_l2 = rel_l2_error(un, problem.exact, problem.rule).value;
  row.rel_h1 = rel_h1_error(un, problem.exact, problem.rule).value;
  row.renormalized_energy = renormalized_gap(lagrangian, un, problem.exact, n, problem.rule).renormalized;
  row.node_discrepancy_l2 = node_discrepancy(un.mesh(), gd_mesh, NodeNorm::L2);
  row.node_discrepancy_l1 = node_discrepancy(un.mesh(), gd_mesh, NodeNorm::L1);
  return row;
}

CellResult compare_cell(const Problem& problem, const ExperimentConfig& cfg, int n) {
  CellResult out;
  Diagnostics diag;
  const Mesh uniform = uniform_mesh(n, problem.a, problem.b);
  const Mesh amf = amf_mesh_for(problem, n, &diag);
  const GdResult gd = gd_from(problem, n, cfg.gd, cfg.init);
  const Mesh gd_mesh = state_mesh(gd.state, problem.a, problem.b);
  for (const auto& w : diag.warnings) out.warnings.push_back("n=" + std::to_string(n) + ": " + w);
  for (MeshMethod method : cfg.methods) {
    ComparisonRow row;
    switch (method) {
      case MeshMethod::Equidistributed:
        row = measure(problem, n, method, galerkin_solve(problem.f, uniform, problem.rule), gd_mesh);
        break;
      case MeshMethod::Amf:
        row = measure(problem, n, method, galerkin_solve(problem.f, amf, problem.rule), gd_mesh);
        break;
      case MeshMethod::Gd:
        row = measure(problem, n, method, state_function(gd.state, problem.a, problem.b), gd_mesh);
        if (!gd.converged()) {
          row.note = "gd " + to_string(gd.status) + " after " + std::to_string(gd.state.iter) + " iterations";
          out.warnings.push_back("n=" + std::to_string(n) + ": " + row.note);
        }
        break;
    }
    out.rows.push_back(row);
  }
  return out;
}

template <typename Result, typename Fn>
std::vector<Result> parallel_over(const std::vector<int>& ns, Fn fn) {
  std::vector<std::future<Result>> futures;
  futures.reserve(ns.size());
  for (int n : ns) futures.push_back(std::async(std::launch::async, fn, n));
  std::vector<Result> out;
  out.reserve(ns.size());
  for (auto& fut : futures) out.push_back(fut.get());
  return out;
}

}  // namespace

CompareOutput run_compare(const ExperimentConfig& cfg) {
  cfg.validate();
  const Problem problem = make_problem(cfg.f_spec, cfg.a, cfg.b, cfg.quad_order);
  auto cells = parallel_over<CellResult>(cfg.n_list, [&](int n) { return compare_cell(problem, cfg, n); });

  CompareOutput out;
  for (auto& cell : cells) {
    for (auto& row : cell.rows) out.rows.push_back(std::move(row));
    for (auto& w : cell.warnings) out.diagnostics.warn(std::move(w));
  }
  std::ostringstream csv;
  write_comparison_csv(csv, out.rows);
  const auto csv_path = cfg.out_dir / "compare.csv";
  write_file_atomic(csv_path, csv.str());
  out.files.push_back(csv_path);

  if (cfg.plot) {
    const std::array<std::pair<const char*, double ComparisonRow::*>, 2> metrics = {
        std::pair{"l2", &ComparisonRow::rel_l2}, std::pair{"h1", &ComparisonRow::rel_h1}};
    for (const auto& [tag, member] : metrics) {
      SvgPlot plot(std::string("Relative ") + (tag == std::string("l2") ? "L2" : "H1") + " error, f = " + cfg.f_spec,
                   "n", "relative error");
      plot.log_x().log_y();
      for (MeshMethod method : cfg.methods) {
        SvgPlot::Series s;
        s.name = to_string(method);
        s.markers = true;
        for (const auto& row : out.rows) {
          if (row.method != method || !(row.*member > 0.0)) continue;
          s.x.push_back(row.n);
          s.y.push_back(row.*member);
        }
        plot.add(std::move(s));
      }
      const auto path = cfg.out_dir / (std::string("compare_") + tag + ".svg");
      write_file_atomic(path, plot.render());
      out.files.push_back(path);
    }
  }
  return out;
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Pass:
      return "PASS";
    case Verdict::Fail:
      return "FAIL";
    case Verdict::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

GammaOutput run_gamma_check(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!std::is_sorted(cfg.n_list.begin(), cfg.n_list.end()) ||
      std::adjacent_find(cfg.n_list.begin(), cfg.n_list.end()) != cfg.n_list.end()) {
    throw ConfigError("key 'n_list': gamma check needs strictly increasing n");
  }
  const Problem problem = make_problem(cfg.f_spec, cfg.a, cfg.b, cfg.quad_order);
  const double limit = min_limit_energy(problem.f, problem.a, problem.b, problem.rule);
  auto runs = parallel_over<GdResult>(cfg.n_list, [&](int n) { return gd_from(problem, n, cfg.gd, "amf"); });

  GammaOutput out;
  bool failed_run = false;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    GammaRow row;
    row.n = cfg.n_list[k];
    row.energy_gd = runs[k].state.energy;
    row.min_limit = limit;
    row.ratio = limit > 0.0 ? row.energy_gd / limit : std::nan("");
    row.status = runs[k].status;
    if (!runs[k].converged()) {
      failed_run = true;
      out.diagnostics.push_back("n=" + std::to_string(row.n) + ": GD " + to_string(row.status));
    }
    out.rows.push_back(row);
  }

  if (failed_run) {
    out.verdict = Verdict::Inconclusive;
  } else if (out.rows.size() < 2) {
    out.verdict = Verdict::Inconclusive;
    out.diagnostics.push_back("a single n gives no trend");
  } else if (!(limit > 0.0)) {
    out.verdict = Verdict::Inconclusive;
    out.diagnostics.push_back("limit minimum is zero; ratio undefined");
  } else {
    bool ok = std::abs(out.rows.back().ratio - 1.0) <= 0.05;
    if (!ok) out.diagnostics.push_back("|ratio - 1| at the largest n exceeds 0.05");
    for (std::size_t k = 1; k < out.rows.size(); ++k) {
      const double prev = std::abs(out.rows[k - 1].ratio - 1.0);
      const double cur = std::abs(out.rows[k].ratio - 1.0);
      if (cur > prev + 1e-3) {
        ok = false;
        out.diagnostics.push_back("|ratio - 1| grows from n=" + std::to_string(out.rows[k - 1].n) + " to n=" +
                                  std::to_string(out.rows[k].n));
      }
    }
    out.verdict = ok ? Verdict::Pass : Verdict::Fail;
  }

  std::ostringstream csv;
  csv << "n,energy_gd,min_limit,ratio\n";
  for (const auto& r : out.rows) {
    csv << r.n << ',' << format_number(r.energy_gd) << ',' << format_number(r.min_limit) << ','
        << format_number(r.ratio) << '\n';
  }
  const auto path = cfg.out_dir / "gamma.csv";
  write_file_atomic(path, csv.str());
  out.files.push_back(path);
  return out;
}

MeshDumpOutput run_mesh_dump(const ExperimentConfig& cfg, int n) {
  cfg.validate();
  if (n < 1) throw ConfigError("key 'n': must be >= 1");
  const Problem problem = make_problem(cfg.f_spec, cfg.a, cfg.b, cfg.quad_order);
  Mesh mesh = amf_mesh_for(problem, n);
  PiecewiseAffine interp = interpolate(problem.exact.u(), mesh);
  MeshDumpOutput out{mesh, interp, {}};

  std::ostringstream nodes;
  write_pa_csv(nodes, interp);
  const auto nodes_path = cfg.out_dir / "mesh_nodes.csv";
  write_file_atomic(nodes_path, nodes.str());
  out.files.push_back(nodes_path);

  constexpr int kDense = 1001;
  SvgPlot::Series exact_series{"u* (exact)", {}, {}, "#1f77b4", false, false};
  std::ostringstream dense;
  dense << "x,u\n";
  for (int i = 0; i < kDense; ++i) {
    const double x = i == kDense - 1 ? problem.b : problem.a + i * (problem.b - problem.a) / (kDense - 1);
    const double u = problem.exact(x);
    dense << format_number(x) << ',' << format_number(u) << '\n';
    exact_series.x.push_back(x);
    exact_series.y.push_back(u);
  }
  const auto dense_path = cfg.out_dir / "mesh_exact.csv";
  write_file_atomic(dense_path, dense.str());
  out.files.push_back(dense_path);

  if (cfg.plot) {
    SvgPlot plot("AMF nodes, n = " + std::to_string(n) + ", f = " + cfg.f_spec, "x", "u");
    plot.add(std::move(exact_series));
    SvgPlot::Series pa{"interpolant on AMF mesh", {}, {}, "#000000", true, true};
    for (Eigen::Index i = 0; i < mesh.nodes().size(); ++i) {
      pa.x.push_back(mesh.nodes()[i]);
      pa.y.push_back(interp.values()[i]);
    }
    plot.add(std::move(pa));
    const auto svg_path = cfg.out_dir / "mesh_dump.svg";
    write_file_atomic(svg_path, plot.render());
    out.files.push_back(svg_path);
  }
  return out;
}

}  // namespace radapt
