#pragma once

#include <optional>

#include "aniso/precond.hpp"
#include "aniso/rng.hpp"

namespace aniso {

/// Parameters of the perturbed method. Schedules built by derive_params carry
/// every field; explicitly specified schedules only need the first five.
struct PerturbSchedule {
  double gamma = 0.0;
  double lambda = 0.0;
  double radius_r = 0.0;
  double time_T = 0.0;
  double tol_G = 0.0;
  double F_decrement = 0.0;
  double Z_radius = 0.0;
  double chi = 0.0;
  double epsilon = 0.0;
  double rho = 0.0;
  double delta = 0.0;
  double delta_f = 0.0;
  double n = 0.0;
  double c = 0.0;

  /// ceil(time_T): the number of unperturbed iterations between perturbations.
  long gate_iterations() const;
  void validate() const;
};

/// chi = log2(L^2 sqrt(n) delta_f / (c sqrt(rho) Lbar eps^{5/2} delta)).
double schedule_chi(double L, double Lbar, double rho, double eps, double delta, double delta_f,
                    double n, double c);

/// Throws ParameterError for nonpositive inputs, delta outside (0,1) or chi < 1.
PerturbSchedule derive_params(double L, double Lbar, double rho, double eps, double delta,
                              double delta_f, long n, double c);

/// True when eps exceeds L^2 / rho, outside the regime of the escape analysis.
bool epsilon_too_large(double L, double rho, double eps);

/// Uniform sample from the closed ball of the given radius.
Vec sample_ball(Eigen::Index n, double radius, CounterRng& rng);

/// H_lambda(x) = hess phi*(lambda grad f(x)) hess f(x).
Mat h_lambda(const Problem& p, const ReferenceFunction& ref, const Vec& x, double lambda);

/// P^{1/2} hess f(x) P^{1/2} with P = hess phi*(lambda grad f(x)); similar to H_lambda.
Mat h_lambda_symmetrized(const Problem& p, const ReferenceFunction& ref, const Vec& x, double lambda);

/// Real spectrum of H_lambda(x), ascending.
Vec h_lambda_eigenvalues(const Problem& p, const ReferenceFunction& ref, const Vec& x, double lambda);

/// Running max over sampled pairs in the ball of ||H(x) - H(y)||_2 / ||x - y||.
double estimate_rho(const Problem& p, const ReferenceFunction& ref, double lambda,
                    double region_radius, int samples, CounterRng& rng);

/// stationarity <= eps^2 and lambda_min(H_lambda) >= -sqrt(rho eps).
bool is_eps_second_order(const Problem& p, const ReferenceFunction& ref, const Vec& x,
                         const PerturbSchedule& schedule);

struct PerturbedOptions {
  long max_iters = 1000;
  std::optional<double> target_value;
  bool record_path = false;
};

/// Perturbed preconditioned gradient descent.
RunTrace run_perturbed_pgd(const Problem& p, const ReferenceFunction& ref, const Vec& x0,
                           const PerturbSchedule& schedule, const PerturbedOptions& opts,
                           CounterRng& rng);

/// Perturbed vanilla GD: when ||grad f|| <= g_thres and more than t_thres
/// iterations passed since the last perturbation, add xi ~ Ball(radius).
struct PerturbedGdParams {
  double eta = 0.0;
  double radius = 0.0;
  double g_thres = 0.0;
  double t_thres = 0.0;
};

RunTrace run_perturbed_gd(const Problem& p, const Vec& x0, const PerturbedGdParams& params,
                          const PerturbedOptions& opts, CounterRng& rng);

}  // namespace aniso
