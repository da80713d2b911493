#include "aniso/precond.hpp"

#include <cmath>

#include "aniso/errors.hpp"

namespace aniso {

void SolverConfig::validate() const {
  if (!(gamma > 0.0)) throw ParameterError("solver: gamma must be positive");
  if (!(lambda > 0.0)) throw ParameterError("solver: lambda must be positive");
  if (max_iters < 0) throw ParameterError("solver: max_iters must be nonnegative");
  if (!(stat_tol >= 0.0)) throw ParameterError("solver: stat_tol must be nonnegative");
}

std::string_view termination_name(Termination t) {
  switch (t) {
    case Termination::Tolerance:
      return "tolerance";
    case Termination::Budget:
      return "budget";
    case Termination::NonfiniteValue:
      return "nonfinite";
    case Termination::Target:
      return "target";
  }
  return "unknown";
}

std::optional<Termination> termination_from_name(std::string_view name) {
  for (auto t : {Termination::Tolerance, Termination::Budget, Termination::NonfiniteValue,
                 Termination::Target}) {
    if (termination_name(t) == name) return t;
  }
  return std::nullopt;
}

void TraceRecorder::add(const TraceRow& row, const Vec& x, bool force) {
  if (!force && !row.perturbed && row.iter % trace_.stride != 0) return;
  trace_.rows.push_back(row);
  if (record_path_) trace_.path.push_back(x);
  if (trace_.rows.size() >= cap_) thin();
}

void TraceRecorder::thin() {
  trace_.stride *= 2;
  std::size_t keep = 0;
  for (std::size_t i = 0; i < trace_.rows.size(); ++i) {
    const TraceRow& r = trace_.rows[i];
    if (r.iter % trace_.stride != 0 && !r.perturbed) continue;
    trace_.rows[keep] = r;
    if (record_path_) trace_.path[keep] = std::move(trace_.path[i]);
    ++keep;
  }
  trace_.rows.resize(keep);
  if (record_path_) trace_.path.resize(keep);
}

double stationarity_from_grad(const ReferenceFunction& ref, const Vec& g, double lambda) {
  return ref.kernel().primal_at_dual(lambda * g.stableNorm()) / lambda;
}

Vec step(const Problem& p, const ReferenceFunction& ref, const Vec& x, double gamma, double lambda) {
  const Vec g = p.grad(x);
  return x - gamma * precondition(ref, lambda * g);
}

Vec clipped_step(const Problem& p, const Vec& x, double gamma, double Lbar) {
  if (!(Lbar > 0.0)) throw ParameterError("clipped_step: Lbar must be positive");
  const Vec g = p.grad(x);
  const double n = g.stableNorm();
  if (n == 0.0) return x;
  return x - (gamma * std::min(1.0 / n, 1.0 / Lbar)) * g;
}

double stationarity(const Problem& p, const ReferenceFunction& ref, const Vec& x, double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("stationarity: lambda must be positive");
  return stationarity_from_grad(ref, p.grad(x), lambda);
}

namespace {

template <class Measure, class Update>
RunTrace run_loop(const Problem& p, const Vec& x0, const SolverConfig& cfg, Measure measure,
                  Update update) {
  cfg.validate();
  RunTrace trace;
  TraceRecorder rec(trace, cfg.record_path);
  Vec x = x0;
  for (long k = 0;; ++k) {
    const double f = p.value(x);
    const Vec g = p.grad(x);
    const bool finite = std::isfinite(f) && g.allFinite() && x.allFinite();
    TraceRow row{k, f, finite ? measure(g) : std::numeric_limits<double>::infinity(), 0.0, false};
    if (!finite) {
      trace.termination = Termination::NonfiniteValue;
    } else if (row.stationarity <= cfg.stat_tol) {
      trace.termination = Termination::Tolerance;
    } else if (cfg.target_value && f <= *cfg.target_value) {
      trace.termination = Termination::Target;
    } else if (k >= cfg.max_iters) {
      trace.termination = Termination::Budget;
    } else {
      Vec next = update(x, g);
      row.step_norm = (next - x).norm();
      rec.add(row, x);
      x = std::move(next);
      trace.iterations = k + 1;
      continue;
    }
    rec.add(row, x, true);
    break;
  }
  trace.terminal_x = x;
  return trace;
}

}  // namespace

RunTrace run_pgd(const Problem& p, const ReferenceFunction& ref, const Vec& x0, const SolverConfig& cfg) {
  const double gamma = cfg.gamma, lambda = cfg.lambda;
  return run_loop(
      p, x0, cfg, [&](const Vec& g) { return stationarity_from_grad(ref, g, lambda); },
      [&](const Vec& x, const Vec& g) -> Vec { return x - gamma * precondition(ref, lambda * g); });
}

RunTrace run_gd(const Problem& p, const Vec& x0, const SolverConfig& cfg) {
  const double eta = cfg.gamma;
  return run_loop(
      p, x0, cfg,
      [](const Vec& g) {
        const double n = g.stableNorm();
        return 0.5 * n * n;
      },
      [eta](const Vec& x, const Vec& g) -> Vec { return x - eta * g; });
}

RunTrace run_clipped(const Problem& p, const Vec& x0, const SolverConfig& cfg) {
  const ReferenceFunction ref(Kernel(KernelKind::HardClip), p.dim);
  const double gamma = cfg.gamma, lambda = cfg.lambda, Lbar = 1.0 / cfg.lambda;
  return run_loop(
      p, x0, cfg, [&](const Vec& g) { return stationarity_from_grad(ref, g, lambda); },
      [&](const Vec& x, const Vec& g) -> Vec {
        const double n = g.stableNorm();
        if (n == 0.0) return x;
        return x - (gamma * std::min(1.0 / n, 1.0 / Lbar)) * g;
      });
}

}  // namespace aniso
