#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "aniso/problem.hpp"

namespace aniso {

struct SolverConfig {
  double gamma = 1.0;
  double lambda = 1.0;
  long max_iters = 1000;
  double stat_tol = 0.0;
  std::uint64_t seed = 0;
  // Stop as soon as f(x^k) <= target_value.
  std::optional<double> target_value;
  bool record_path = false;

  void validate() const;
};

enum class Termination { Tolerance, Budget, NonfiniteValue, Target };

std::string_view termination_name(Termination t);
std::optional<Termination> termination_from_name(std::string_view name);

/// One visited iterate x^k. step_norm is ||x^{k+1} - x^k|| (0 on the final row).
struct TraceRow {
  long iter = 0;
  double f = 0.0;
  double stationarity = 0.0;
  double step_norm = 0.0;
  bool perturbed = false;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct PerturbationEvent {
  long iter = 0;
  double f_before = 0.0;       // f(x^k) before adding gamma * xi
  double f_after = 0.0;        // f(x^k + gamma * xi)
  double stat_before = 0.0;
  double precond_norm_before = 0.0;  // ||grad phi*(lambda grad f(x^k))||
  double xi_norm = 0.0;
};

struct RunTrace {
  std::vector<TraceRow> rows;
  std::vector<Vec> path;  // filled when record_path is set, aligned with rows
  std::vector<PerturbationEvent> events;
  Vec terminal_x;
  Termination termination = Termination::Budget;
  long iterations = 0;  // steps taken
  long stride = 1;      // row thinning factor once the cap is hit
};

inline constexpr std::size_t kTraceRowCap = 1'000'000;

/// Appends rows while enforcing the row cap by stride doubling.
class TraceRecorder {
 public:
  TraceRecorder(RunTrace& trace, bool record_path, std::size_t cap = kTraceRowCap)
      : trace_(trace), record_path_(record_path), cap_(cap) {}

  void add(const TraceRow& row, const Vec& x, bool force = false);

 private:
  void thin();

  RunTrace& trace_;
  bool record_path_;
  std::size_t cap_;
};

/// lambda^{-1} h(h*'(lambda ||g||)) for a precomputed gradient g.
double stationarity_from_grad(const ReferenceFunction& ref, const Vec& g, double lambda);

/// x - gamma grad phi*(lambda grad f(x)).
Vec step(const Problem& p, const ReferenceFunction& ref, const Vec& x, double gamma, double lambda);

/// x - gamma min(1/||grad f||, 1/Lbar) grad f.
Vec clipped_step(const Problem& p, const Vec& x, double gamma, double Lbar);

/// lambda^{-1} h(h*'(lambda ||grad f(x)||)).
double stationarity(const Problem& p, const ReferenceFunction& ref, const Vec& x, double lambda);

RunTrace run_pgd(const Problem& p, const ReferenceFunction& ref, const Vec& x0, const SolverConfig& cfg);

/// Plain gradient descent with stepsize cfg.gamma (cfg.lambda is ignored);
/// stationarity column is ||grad f||^2 / 2.
RunTrace run_gd(const Problem& p, const Vec& x0, const SolverConfig& cfg);

/// Clipped iteration with Lbar = 1 / cfg.lambda.
RunTrace run_clipped(const Problem& p, const Vec& x0, const SolverConfig& cfg);

}  // namespace aniso
