#pragma once

#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace aniso {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class KernelKind { Quadratic, Cosh, ExpAbs, LogBarrier, HardClip };

/// Value returned when a primal kernel saturates (e.g. cosh overflow).
inline constexpr double kOverflow = std::numeric_limits<double>::infinity();

/// Scalar kernel h generating an isotropic reference function phi = h(||.||).
///
/// All five kernels are even, vanish with their derivative at 0, and satisfy
/// h(x) >= x^2/2. The conjugate derivatives h*' and h*'' are defined on all of
/// R; only primal evaluation is restricted to |x| < domain_radius().
class Kernel {
 public:
  constexpr explicit Kernel(KernelKind kind = KernelKind::Quadratic) : kind_(kind) {}

  constexpr KernelKind kind() const { return kind_; }

  /// 1 for LogBarrier and HardClip, infinity otherwise.
  double domain_radius() const;

  /// h(x). Throws DomainError when |x| >= domain_radius().
  double value(double x) const;
  /// h'(x). Throws DomainError when |x| >= domain_radius().
  double derivative(double x) const;
  /// h*'(y): odd, increasing, full domain.
  double conj_prime(double y) const;
  /// h*''(y). Throws NondifferentiableError for HardClip at |y| = 1.
  double conj_second(double y) const;
  /// h(h*'(y)) for y >= 0, evaluated without forming h*'(y) first so that it
  /// stays finite when h*'(y) rounds onto the domain boundary.
  double primal_at_dual(double y) const;

  std::string_view name() const;

  friend constexpr bool operator==(Kernel a, Kernel b) { return a.kind_ == b.kind_; }

 private:
  KernelKind kind_;
};

/// Parses "quadratic" | "cosh" | "expabs" | "logbarrier" | "hardclip".
std::optional<Kernel> kernel_from_name(std::string_view name);

// Free-function spellings of the kernel operations.
inline double kernel_eval(Kernel k, double x) { return k.value(x); }
inline double conj_prime(Kernel k, double y) { return k.conj_prime(y); }
inline double conj_second(Kernel k, double y) { return k.conj_second(y); }

/// Isotropic reference function phi(x) = h(||x||) on R^dimension.
class ReferenceFunction {
 public:
  ReferenceFunction(Kernel kernel, Eigen::Index dimension);

  Kernel kernel() const { return kernel_; }
  Eigen::Index dimension() const { return dimension_; }

  /// phi(x) = h(||x||).
  double value(const Vec& x) const;

 private:
  Kernel kernel_;
  Eigen::Index dimension_;
};

/// grad phi*(g) = h*'(||g||) g / ||g||, and 0 at g = 0.
Vec precondition(const ReferenceFunction& ref, const Vec& g);

/// Hessian of phi* at g:
///   h*''(||g||) uu^T + (h*'(||g||)/||g||)(I - uu^T),  u = g/||g||,
/// and the identity at g = 0.
Mat precondition_jacobian(const ReferenceFunction& ref, const Vec& g);

/// Symmetric square root of precondition_jacobian (same eigenvectors,
/// square-rooted eigenvalues).
Mat precondition_jacobian_sqrt(const ReferenceFunction& ref, const Vec& g);

}  // namespace aniso
