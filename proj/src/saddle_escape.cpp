#include "aniso/saddle_escape.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "aniso/errors.hpp"

namespace aniso {

long PerturbSchedule::gate_iterations() const { return static_cast<long>(std::ceil(time_T)); }

void PerturbSchedule::validate() const {
  if (!(gamma > 0.0)) throw ParameterError("schedule: gamma must be positive");
  if (!(lambda > 0.0)) throw ParameterError("schedule: lambda must be positive");
  if (!(radius_r >= 0.0)) throw ParameterError("schedule: radius_r must be nonnegative");
  if (!(time_T > 0.0)) throw ParameterError("schedule: time_T must be positive");
  if (!(tol_G > 0.0)) throw ParameterError("schedule: tol_G must be positive");
}

double schedule_chi(double L, double Lbar, double rho, double eps, double delta, double delta_f,
                    double n, double c) {
  // Summed logs so that c = 2^-39 and tiny eps do not overflow the ratio.
  return 2.0 * std::log2(L) + 0.5 * std::log2(n) + std::log2(delta_f) - std::log2(c) -
         0.5 * std::log2(rho) - std::log2(Lbar) - 2.5 * std::log2(eps) - std::log2(delta);
}

PerturbSchedule derive_params(double L, double Lbar, double rho, double eps, double delta,
                              double delta_f, long n, double c) {
  for (double v : {L, Lbar, rho, eps, delta_f, c}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError("derive_params: inputs must be positive");
  }
  if (n < 1) throw ParameterError("derive_params: n must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("derive_params: delta must lie in (0, 1)");
  const double chi = schedule_chi(L, Lbar, rho, eps, delta, delta_f, static_cast<double>(n), c);
  if (!(chi >= 1.0)) {
    throw ParameterError("derive_params: chi = " + std::to_string(chi) + " < 1");
  }
  PerturbSchedule s;
  s.gamma = 1.0 / L;
  s.lambda = 1.0 / Lbar;
  s.chi = chi;
  const double chi3 = chi * chi * chi;
  s.radius_r = eps / (400.0 * chi3);
  s.time_T = L / std::sqrt(rho * eps) * chi;
  s.tol_G = std::min(1.0, 1.0 / std::sqrt(s.lambda)) * s.radius_r;
  s.F_decrement = 1.0 / (50.0 * s.lambda * chi3) * std::sqrt(eps * eps * eps / rho);
  s.Z_radius = 1.0 / (4.0 * chi) * std::sqrt(eps / rho);
  s.epsilon = eps;
  s.rho = rho;
  s.delta = delta;
  s.delta_f = delta_f;
  s.n = static_cast<double>(n);
  s.c = c;
  return s;
}

bool epsilon_too_large(double L, double rho, double eps) { return eps > L * L / rho; }

Vec sample_ball(Eigen::Index n, double radius, CounterRng& rng) {
  if (!(radius >= 0.0)) throw ParameterError("sample_ball: radius must be nonnegative");
  if (radius == 0.0) return Vec::Zero(n);
  Vec dir = rng.normal_vector(n);
  double nrm = dir.norm();
  while (nrm == 0.0) {
    dir = rng.normal_vector(n);
    nrm = dir.norm();
  }
  const double scale = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
  return (scale / nrm) * dir;
}

Mat h_lambda(const Problem& p, const ReferenceFunction& ref, const Vec& x, double lambda) {
  return precondition_jacobian(ref, lambda * p.grad(x)) * p.hess(x);
}

Mat h_lambda_symmetrized(const Problem& p, const ReferenceFunction& ref, const Vec& x, double lambda) {
  const Mat root = precondition_jacobian_sqrt(ref, lambda * p.grad(x));
  const Mat S = root * p.hess(x) * root;
  return 0.5 * (S + S.transpose());
}

Vec h_lambda_eigenvalues(const Problem& p, const ReferenceFunction& ref, const Vec& x, double lambda) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h_lambda_symmetrized(p, ref, x, lambda), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double estimate_rho(const Problem& p, const ReferenceFunction& ref, double lambda,
                    double region_radius, int samples, CounterRng& rng) {
  if (samples < 2) throw ParameterError("estimate_rho: need at least two samples");
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec x = sample_ball(p.dim, region_radius, rng);
    const Vec y = sample_ball(p.dim, region_radius, rng);
    const double dist = (x - y).norm();
    if (dist == 0.0) continue;
    const Mat diff = h_lambda(p, ref, x, lambda) - h_lambda(p, ref, y, lambda);
    Eigen::JacobiSVD<Mat> svd(diff);
    const double ratio = svd.singularValues()(0) / dist;
    if (std::isfinite(ratio)) best = std::max(best, ratio);
  }
  return best;
}

bool is_eps_second_order(const Problem& p, const ReferenceFunction& ref, const Vec& x,
                         const PerturbSchedule& schedule) {
  const double eps = schedule.epsilon;
  if (stationarity(p, ref, x, schedule.lambda) > eps * eps) return false;
  const double lmin = h_lambda_eigenvalues(p, ref, x, schedule.lambda)(0);
  return lmin >= -std::sqrt(schedule.rho * eps);
}

namespace {

bool finite_point(double f, const Vec& g, const Vec& x) {
  return std::isfinite(f) && g.allFinite() && x.allFinite();
}

}  // namespace

RunTrace run_perturbed_pgd(const Problem& p, const ReferenceFunction& ref, const Vec& x0,
                           const PerturbSchedule& schedule, const PerturbedOptions& opts,
                           CounterRng& rng) {
  schedule.validate();
  const double gamma = schedule.gamma, lambda = schedule.lambda;
  const double gate_stat = 0.5 * schedule.tol_G * schedule.tol_G;
  const long gate = schedule.gate_iterations();

  RunTrace trace;
  TraceRecorder rec(trace, opts.record_path);
  Vec x = x0;
  long k_perturb = 0;
  for (long k = 0;; ++k) {
    const double f = p.value(x);
    Vec g = p.grad(x);
    TraceRow row{k, f, std::numeric_limits<double>::infinity(), 0.0, false};
    if (!finite_point(f, g, x)) {
      trace.termination = Termination::NonfiniteValue;
      rec.add(row, x, true);
      break;
    }
    row.stationarity = stationarity_from_grad(ref, g, lambda);
    if (opts.target_value && f <= *opts.target_value) {
      trace.termination = Termination::Target;
      rec.add(row, x, true);
      break;
    }
    if (k >= opts.max_iters) {
      trace.termination = Termination::Budget;
      rec.add(row, x, true);
      break;
    }

    Vec origin = x;
    if (row.stationarity <= gate_stat && k - k_perturb > gate) {
      const Vec xi = sample_ball(p.dim, schedule.radius_r, rng);
      PerturbationEvent ev;
      ev.iter = k;
      ev.f_before = f;
      ev.stat_before = row.stationarity;
      ev.precond_norm_before = precondition(ref, lambda * g).norm();
      ev.xi_norm = xi.norm();
      x += gamma * xi;
      ev.f_after = p.value(x);
      g = p.grad(x);
      trace.events.push_back(ev);
      k_perturb = k;
      row.perturbed = true;
    }
    Vec next = x - gamma * precondition(ref, lambda * g);
    row.step_norm = (next - origin).norm();
    rec.add(row, origin);
    x = std::move(next);
    trace.iterations = k + 1;
  }
  trace.terminal_x = x;
  return trace;
}

RunTrace run_perturbed_gd(const Problem& p, const Vec& x0, const PerturbedGdParams& params,
                          const PerturbedOptions& opts, CounterRng& rng) {
  if (!(params.eta > 0.0)) throw ParameterError("perturbed_gd: eta must be positive");
  RunTrace trace;
  TraceRecorder rec(trace, opts.record_path);
  Vec x = x0;
  // Allows a perturbation at k = 0.
  double t_noise = -params.t_thres - 1.0;
  for (long k = 0;; ++k) {
    const double f = p.value(x);
    Vec g = p.grad(x);
    TraceRow row{k, f, std::numeric_limits<double>::infinity(), 0.0, false};
    if (!finite_point(f, g, x)) {
      trace.termination = Termination::NonfiniteValue;
      rec.add(row, x, true);
      break;
    }
    const double gn = g.stableNorm();
    row.stationarity = 0.5 * gn * gn;
    if (opts.target_value && f <= *opts.target_value) {
      trace.termination = Termination::Target;
      rec.add(row, x, true);
      break;
    }
    if (k >= opts.max_iters) {
      trace.termination = Termination::Budget;
      rec.add(row, x, true);
      break;
    }
    Vec origin = x;
    if (gn <= params.g_thres && static_cast<double>(k) - t_noise > params.t_thres) {
      const Vec xi = sample_ball(p.dim, params.radius, rng);
      PerturbationEvent ev;
      ev.iter = k;
      ev.f_before = f;
      ev.stat_before = row.stationarity;
      ev.precond_norm_before = gn;
      ev.xi_norm = xi.norm();
      x += xi;
      ev.f_after = p.value(x);
      g = p.grad(x);
      trace.events.push_back(ev);
      t_noise = static_cast<double>(k);
      row.perturbed = true;
    }
    Vec next = x - params.eta * g;
    row.step_norm = (next - origin).norm();
    rec.add(row, origin);
    x = std::move(next);
    trace.iterations = k + 1;
  }
  trace.terminal_x = x;
  return trace;
}

}  // namespace aniso
