#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aniso/diagnostics.hpp"
#include "aniso/saddle_escape.hpp"

namespace aniso {

enum class SolverKind { Pgd, PerturbedPgd, Gd, Clipped, PerturbedGd };

std::string_view solver_name(SolverKind s);

struct InitSpec {
  enum class Kind { Uniform, Normal, Ball } kind = Kind::Uniform;
  double lo = -1.0, hi = 1.0;  // uniform box
  double scale = 1.0;          // normal std-dev or ball radius
};

struct CompareSpec {
  std::vector<double> gammas;
  long max_iters = 10000;
  double stat_tol = 1e-12;
  bool record_paths = true;
};

struct EscapeSpec {
  std::vector<long> dims{5, 10};
  std::vector<double> Ls{1.0, 1.5, 2.0, 3.0};
  int seeds = 20;
  std::uint64_t seed_base = 0;
  std::optional<long> budget;
  double budget_per_unit = 30.0;  // budget = budget_per_unit * n * (1 + L)
  double Lbar = 1.0;
  std::string kernel = "cosh";
  double octopus_gamma = 1.0;
  double tau = 2.718281828459045;
};

struct CertifySpec {
  double L1 = 1.0;
  double Lbar = 1.0;
  ScanSpec scan;
  double second_order_r_max = 10.0;
  int fd_points = 100;
};

struct ParamsSpec {
  double L = 1.0, Lbar = 1.0, rho = 1.0, eps = 1e-2, delta = 0.1, delta_f = 1.0, c = 0x1.0p-39;
  std::optional<long> n;
};

struct RhoEstimateSpec {
  double region_radius = 1.0;
  int samples = 200;
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  std::optional<nlohmann::json> problem;
  std::vector<nlohmann::json> problems;
  Kernel kernel{KernelKind::Cosh};
  SolverKind solver = SolverKind::Pgd;
  SolverConfig solver_cfg;
  std::optional<nlohmann::json> schedule;  // raw; resolved against the problem later
  std::optional<PerturbedGdParams> perturbed_gd;
  std::optional<Vec> x0;
  InitSpec init;
  std::vector<std::uint64_t> seeds{0};
  std::string output = "out";
  std::optional<CompareSpec> compare;
  std::optional<EscapeSpec> escape;
  std::optional<CertifySpec> certify;
  std::optional<ParamsSpec> params;
};

/// Parses and validates a JSON config. Errors raise ConfigError carrying the
/// 1-based line of the offending key (or of the parse error).
ExperimentConfig load_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Builds a problem from its JSON spec (the value under "problem").
Problem build_problem(const nlohmann::json& spec);

/// Schedule from an explicit block or a {"derive": {...}} block.
PerturbSchedule resolve_schedule(const nlohmann::json& spec, const Problem& p);

Vec initial_point(const ExperimentConfig& cfg, Eigen::Index dim, std::uint64_t seed);

}  // namespace aniso
