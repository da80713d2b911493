#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aniso/kernels.hpp"

namespace aniso {

/// Polynomial envelopes in r = ||x||:
///   ||hess f(x)||_F <= sum_i hess_upper[i] r^i        (degree R)
///   ||grad f(x)||   >= sum_i grad_lower[i] r^i        (degree R + 1)
struct PolynomialBounds {
  std::vector<double> hess_upper;
  std::vector<double> grad_lower;

  int degree() const { return static_cast<int>(hess_upper.size()) - 1; }
  double hess_bound(double r) const;
  double grad_bound(double r) const;
  /// Throws ParameterError unless grad_lower has degree R + 1 with a positive
  /// leading coefficient.
  void validate() const;
};

/// Smooth objective with analytic first and second derivatives.
struct Problem {
  std::string name;
  Eigen::Index dim = 0;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  std::function<Mat(const Vec&)> hess;

  std::optional<double> known_inf;
  std::optional<PolynomialBounds> envelope;
  // Known answer to "is f (L0,L1)-smooth for some constants", when there is one.
  std::optional<bool> l0l1_smooth;
  // Rays along which generic scans are likely to miss bad behaviour.
  std::vector<Vec> adversarial_directions;
  // Set when the instance is constructible but known to violate its envelope.
  bool envelope_expected_to_fail = false;
};

}  // namespace aniso
