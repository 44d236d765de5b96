#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "radapt/amf.hpp"
#include "radapt/exact.hpp"
#include "radapt/field.hpp"
#include "radapt/gd.hpp"
#include "radapt/metrics.hpp"
#include "radapt/quadrature.hpp"

namespace radapt {

/// Configuration file or flag problem, with the offending line or key.
class ConfigError : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

struct ExperimentConfig {
  std::string f_spec = "poly:2";
  std::vector<int> n_list = {8, 16, 32, 64};
  std::vector<MeshMethod> methods = {MeshMethod::Equidistributed, MeshMethod::Amf, MeshMethod::Gd};
  GdConfig gd;
  std::string init = "amf";  // GD starting mesh: amf or uniform
  std::filesystem::path out_dir = "out";
  bool plot = false;
  std::uint64_t seed = 0;
  double a = 0.0;
  double b = 1.0;
  int quad_order = 0;  // 0 selects rule_for(f)

  /// Throws ConfigError when n_list is empty, holds n < 2, or f_spec does not
  /// parse.
  void validate() const;
};

/// Flat "key = value" lines; '#' starts a comment. Throws ConfigError with
/// the line number on malformed input.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Builds a config from key/value pairs (keys: f, n_list, methods, eta, tol,
/// max_iter, method, init, out_dir, plot, seed, domain, quad_order). Unknown
/// keys and bad values raise ConfigError naming the key.
ExperimentConfig config_from_map(const std::map<std::string, std::string>& kv);

/// Everything needed to evaluate one forcing term on one domain.
struct Problem {
  ScalarField f;
  double a = 0.0;
  double b = 1.0;
  QuadratureRule rule;
  ExactSolution exact;
};

Problem make_problem(const std::string& f_spec, double a, double b, int quad_order = 0);

/// AMF mesh for n cells with the default table resolution for n.
Mesh amf_mesh_for(const Problem& problem, int n, Diagnostics* diag = nullptr);

/// GD from the AMF (or uniform) mesh with Galerkin starting values.
GdResult gd_from(const Problem& problem, int n, const GdConfig& cfg, const std::string& init = "amf");

/// Writes `content` to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

struct CompareOutput {
  std::vector<ComparisonRow> rows;
  std::vector<std::filesystem::path> files;
  Diagnostics diagnostics;
};

/// For each n (in parallel) and each method: build the mesh, take the
/// Galerkin (or GD) solution, compute all metrics. Writes compare.csv and,
/// with plot on, compare_l2.svg and compare_h1.svg into out_dir.
CompareOutput run_compare(const ExperimentConfig& cfg);

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict verdict);

struct GammaRow {
  int n = 0;
  double energy_gd = 0.0;
  double min_limit = 0.0;
  double ratio = 0.0;
  GdStatus status = GdStatus::Converged;
};

struct GammaOutput {
  std::vector<GammaRow> rows;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> diagnostics;
  std::vector<std::filesystem::path> files;
};

/// GD-from-AMF energies against the limit minimum. PASS when |ratio - 1| is
/// at most 0.05 at the largest n and never grows by more than 1e-3 from one n
/// to the next; INCONCLUSIVE for a single n, a zero limit minimum, or a GD
/// run that did not converge. Writes gamma.csv ("n,energy_gd,min_limit,ratio").
GammaOutput run_gamma_check(const ExperimentConfig& cfg);

/// AMF nodes with the nodal interpolant of u_* ("x,u"), plus u_* on a dense
/// grid ("x,u"), plus an overlay SVG when plot is on.
struct MeshDumpOutput {
  Mesh mesh;
  PiecewiseAffine interpolant;
  std::vector<std::filesystem::path> files;
};

MeshDumpOutput run_mesh_dump(const ExperimentConfig& cfg, int n);

}  // namespace radapt
