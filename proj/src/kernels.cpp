#include "aniso/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aniso/errors.hpp"

namespace aniso {
namespace {

constexpr double kSeriesCutoff = 1e-3;
constexpr double kKinkTolerance = 1e-14;

// Stable arcsinh: log1p form for moderate |y|, log(2|y|) once y^2 would dominate.
double stable_asinh(double y) {
  const double a = std::abs(y);
  double r;
  if (a > 1e8) {
    r = std::log(a) + std::numbers::ln2;
  } else {
    r = std::log1p(a + a * a / (1.0 + std::hypot(1.0, a)));
  }
  return std::copysign(r, y);
}

double saturate(double v) { return std::isfinite(v) ? v : kOverflow; }

void check_domain(KernelKind kind, double a, const char* what) {
  if ((kind == KernelKind::LogBarrier || kind == KernelKind::HardClip) && !(a < 1.0)) {
    throw DomainError(std::string(what) + ": |x| >= 1 is outside the kernel domain");
  }
}

}  // namespace

double Kernel::domain_radius() const {
  switch (kind_) {
    case KernelKind::LogBarrier:
    case KernelKind::HardClip:
      return 1.0;
    default:
      return std::numeric_limits<double>::infinity();
  }
}

double Kernel::value(double x) const {
  const double a = std::abs(x);
  check_domain(kind_, a, "kernel_eval");
  switch (kind_) {
    case KernelKind::Quadratic:
    case KernelKind::HardClip:
      return saturate(0.5 * x * x);
    case KernelKind::Cosh: {
      // cosh(x) - 1 = 2 sinh^2(x/2), no cancellation near 0.
      const double s = std::sinh(0.5 * a);
      return saturate(2.0 * s * s);
    }
    case KernelKind::ExpAbs: {
      if (a < kSeriesCutoff) {
        // sum_{n>=2} a^n / n!
        double term = a * a / 2.0, sum = 0.0;
        for (int n = 2; n < 10; ++n) {
          sum += term;
          term *= a / (n + 1);
        }
        return sum;
      }
      return saturate(std::expm1(a) - a);
    }
    case KernelKind::LogBarrier: {
      if (a < kSeriesCutoff) {
        // sum_{n>=2} a^n / n
        double power = a * a, sum = 0.0;
        for (int n = 2; n < 10; ++n) {
          sum += power / n;
          power *= a;
        }
        return sum;
      }
      return saturate(-a - std::log1p(-a));
    }
  }
  return kOverflow;
}

double Kernel::derivative(double x) const {
  const double a = std::abs(x);
  check_domain(kind_, a, "kernel derivative");
  switch (kind_) {
    case KernelKind::Quadratic:
    case KernelKind::HardClip:
      return x;
    case KernelKind::Cosh:
      return std::sinh(x);
    case KernelKind::ExpAbs:
      return std::copysign(std::expm1(a), x);
    case KernelKind::LogBarrier:
      return x / (1.0 - a);
  }
  return 0.0;
}

double Kernel::conj_prime(double y) const {
  const double a = std::abs(y);
  switch (kind_) {
    case KernelKind::Quadratic:
      return y;
    case KernelKind::Cosh:
      return stable_asinh(y);
    case KernelKind::ExpAbs:
      return std::copysign(std::log1p(a), y);
    case KernelKind::LogBarrier:
      return y / (1.0 + a);
    case KernelKind::HardClip:
      return std::clamp(y, -1.0, 1.0);
  }
  return 0.0;
}

double Kernel::conj_second(double y) const {
  const double a = std::abs(y);
  switch (kind_) {
    case KernelKind::Quadratic:
      return 1.0;
    case KernelKind::Cosh:
      return 1.0 / std::hypot(1.0, a);
    case KernelKind::ExpAbs:
      return 1.0 / (1.0 + a);
    case KernelKind::LogBarrier: {
      const double d = 1.0 + a;
      return 1.0 / d / d;
    }
    case KernelKind::HardClip:
      if (std::abs(a - 1.0) <= kKinkTolerance) {
        throw NondifferentiableError("conj_second: hard-clip conjugate has a kink at |y| = 1");
      }
      return a < 1.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

double Kernel::primal_at_dual(double y) const {
  const double a = std::abs(y);
  switch (kind_) {
    case KernelKind::Quadratic:
      return saturate(0.5 * a * a);
    case KernelKind::Cosh: {
      // cosh(asinh a) - 1 = sqrt(1 + a^2) - 1
      const double root = std::hypot(1.0, a);
      return a < 1.0 ? a * a / (root + 1.0) : saturate(root - 1.0);
    }
    case KernelKind::ExpAbs: {
      // h(log1p a) = a - log1p(a)
      if (a < kSeriesCutoff) {
        double power = a * a, sum = 0.0, sign = 1.0;
        for (int n = 2; n < 10; ++n) {
          sum += sign * power / n;
          power *= a;
          sign = -sign;
        }
        return sum;
      }
      return a - std::log1p(a);
    }
    case KernelKind::LogBarrier: {
      // h(a/(1+a)) = log1p(a) - a/(1+a)
      if (a < kSeriesCutoff) {
        double power = a * a, sum = 0.0, sign = 1.0;
        for (int n = 2; n < 10; ++n) {
          sum += sign * (n - 1) * power / n;
          power *= a;
          sign = -sign;
        }
        return sum;
      }
      return std::log1p(a) - a / (1.0 + a);
    }
    case KernelKind::HardClip: {
      const double m = std::min(a, 1.0);
      return 0.5 * m * m;
    }
  }
  return kOverflow;
}

std::string_view Kernel::name() const {
  switch (kind_) {
    case KernelKind::Quadratic:
      return "quadratic";
    case KernelKind::Cosh:
      return "cosh";
    case KernelKind::ExpAbs:
      return "expabs";
    case KernelKind::LogBarrier:
      return "logbarrier";
    case KernelKind::HardClip:
      return "hardclip";
  }
  return "unknown";
}

std::optional<Kernel> kernel_from_name(std::string_view name) {
  for (auto kind : {KernelKind::Quadratic, KernelKind::Cosh, KernelKind::ExpAbs,
                    KernelKind::LogBarrier, KernelKind::HardClip}) {
    if (Kernel(kind).name() == name) return Kernel(kind);
  }
  return std::nullopt;
}

ReferenceFunction::ReferenceFunction(Kernel kernel, Eigen::Index dimension)
    : kernel_(kernel), dimension_(dimension) {
  if (dimension <= 0) throw ParameterError("ReferenceFunction: dimension must be positive");
}

double ReferenceFunction::value(const Vec& x) const { return kernel_.value(x.stableNorm()); }

Vec precondition(const ReferenceFunction& ref, const Vec& g) {
  if (ref.kernel().kind() == KernelKind::Quadratic) return g;
  const double n = g.stableNorm();
  if (n == 0.0) return Vec::Zero(g.size());
  return (ref.kernel().conj_prime(n) / n) * g;
}

namespace {

Mat radial_matrix(const Vec& g, double along, double across) {
  const double n = g.stableNorm();
  const Vec u = g / n;
  Mat m = across * Mat::Identity(g.size(), g.size());
  m.noalias() += (along - across) * (u * u.transpose());
  return m;
}

}  // namespace

Mat precondition_jacobian(const ReferenceFunction& ref, const Vec& g) {
  const double n = g.stableNorm();
  if (n == 0.0 || ref.kernel().kind() == KernelKind::Quadratic) {
    return Mat::Identity(g.size(), g.size());
  }
  const Kernel k = ref.kernel();
  return radial_matrix(g, k.conj_second(n), k.conj_prime(n) / n);
}

Mat precondition_jacobian_sqrt(const ReferenceFunction& ref, const Vec& g) {
  const double n = g.stableNorm();
  if (n == 0.0 || ref.kernel().kind() == KernelKind::Quadratic) {
    return Mat::Identity(g.size(), g.size());
  }
  const Kernel k = ref.kernel();
  return radial_matrix(g, std::sqrt(k.conj_second(n)), std::sqrt(k.conj_prime(n) / n));
}

}  // namespace aniso
