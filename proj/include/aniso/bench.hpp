#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aniso/config.hpp"

namespace aniso {

/// Threads from an explicit request, else ANISO_OPT_THREADS, else hardware concurrency.
int resolve_threads(int requested);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Exceptions are
/// rethrown (lowest index first) after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

// ---- run --------------------------------------------------------------------

struct SeededRun {
  std::uint64_t seed = 0;
  RunTrace trace;
};

std::vector<SeededRun> bench_run(const ExperimentConfig& cfg, int threads);

/// Writes trace_seed<seed>.csv (and path_seed<seed>.csv when paths are
/// recorded) plus summary.json into out_dir; returns the summary.
nlohmann::json cmd_run(const ExperimentConfig& cfg, const std::string& out_dir, int threads);

// ---- compare ----------------------------------------------------------------

enum class Outcome { Converged, Diverged, Budget };
std::string_view outcome_name(Outcome o);

struct CompareRow {
  double gamma = 0.0;
  std::string solver;  // "gd" or "pgd"
  Outcome outcome = Outcome::Budget;
  long iterations = 0;
  double final_f = 0.0;
};

struct CompareResult {
  std::vector<CompareRow> rows;
  std::vector<RunTrace> traces;  // parallel to rows
  std::optional<double> largest_gd;
  std::optional<double> largest_pgd;
};

CompareResult bench_compare(const ExperimentConfig& cfg, int threads);
nlohmann::json cmd_compare(const ExperimentConfig& cfg, const std::string& out_dir, int threads);

// ---- escape -----------------------------------------------------------------

struct EscapeRun {
  std::string solver;  // "gd", "perturbed_gd", "perturbed_pgd"
  long n = 0;
  double L = 0.0;
  std::uint64_t seed = 0;
  long budget = 0;
  Termination termination = Termination::Budget;
  long iterations = 0;
  std::vector<PerturbationEvent> events;
  // Parameters used by the perturbed runs, for bookkeeping checks.
  PerturbSchedule schedule;
};

struct EscapeCell {
  std::string solver;
  long n = 0;
  double L = 0.0;
  long budget = 0;
  int seeds = 0;
  int escaped = 0;
  double median_iterations = 0.0;
};

struct EscapeResult {
  std::vector<EscapeRun> runs;
  std::vector<EscapeCell> cells;
};

long escape_budget(const EscapeSpec& spec, long n, double L);
EscapeResult bench_escape(const EscapeSpec& spec, int threads);
nlohmann::json cmd_escape(const ExperimentConfig& cfg, const std::string& out_dir, int threads);

// ---- certify ----------------------------------------------------------------

struct CertifyEntry {
  std::string name;
  L0Report l0;
  double empirical_L = 0.0;
  std::optional<EnvelopeReport> envelope;
  HLambdaReport h_lambda;
  FdReport fd;
  std::vector<std::string> lines;  // human-readable verdicts
};

CertifyEntry certify_problem(const Problem& p, const Kernel& kernel, const CertifySpec& spec);
std::vector<CertifyEntry> bench_certify(const ExperimentConfig& cfg, int threads);
nlohmann::json cmd_certify(const ExperimentConfig& cfg, const std::string& out_dir, int threads);

// ---- params -----------------------------------------------------------------

/// derive_params wrapper; n defaults to the configured problem's dimension.
nlohmann::json cmd_params(const ExperimentConfig& cfg, std::vector<std::string>* warnings);

}  // namespace aniso
