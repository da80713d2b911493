#pragma once

// Independent reference computations for the tests. Everything here is coded
// from the defining formulas, in 50-digit arithmetic where rounding matters,
// and shares no code with the library.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <Eigen/Dense>

namespace oracle {

using hp = boost::multiprecision::cpp_bin_float_50;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline hp hp_asinh(const hp& y) {
  using boost::multiprecision::log;
  using boost::multiprecision::sqrt;
  const hp a = y < 0 ? hp(-y) : y;
  const hp r = log(a + sqrt(a * a + 1));
  return y < 0 ? hp(-r) : r;
}

// Kernel closed forms. kind: "quadratic", "cosh", "expabs", "logbarrier", "hardclip".
inline double h(const std::string& kind, double x_in) {
  using namespace boost::multiprecision;
  const hp x = fabs(hp(x_in));
  if (kind == "quadratic" || kind == "hardclip") return static_cast<double>(x * x / 2);
  if (kind == "cosh") return static_cast<double>(cosh(x) - 1);
  if (kind == "expabs") return static_cast<double>(exp(x) - x - 1);
  return static_cast<double>(-x - log(1 - x));
}

inline double h_prime(const std::string& kind, double x_in) {
  using namespace boost::multiprecision;
  const hp x(x_in);
  const hp a = fabs(x);
  const int s = x_in > 0 ? 1 : (x_in < 0 ? -1 : 0);
  if (kind == "quadratic" || kind == "hardclip") return x_in;
  if (kind == "cosh") return static_cast<double>(sinh(x));
  if (kind == "expabs") return s * static_cast<double>(exp(a) - 1);
  return static_cast<double>(x / (1 - a));
}

inline double conj_prime(const std::string& kind, double y_in) {
  using namespace boost::multiprecision;
  const hp y(y_in);
  const hp a = fabs(y);
  const int s = y_in > 0 ? 1 : (y_in < 0 ? -1 : 0);
  if (kind == "quadratic") return y_in;
  if (kind == "hardclip") return std::clamp(y_in, -1.0, 1.0);
  if (kind == "cosh") return static_cast<double>(hp_asinh(y));
  if (kind == "expabs") return s * static_cast<double>(log1p(a));
  return static_cast<double>(y / (1 + a));
}

inline double conj_second(const std::string& kind, double y_in) {
  using namespace boost::multiprecision;
  const hp a = fabs(hp(y_in));
  if (kind == "quadratic") return 1.0;
  if (kind == "hardclip") return std::abs(y_in) < 1.0 ? 1.0 : 0.0;
  if (kind == "cosh") return static_cast<double>(1 / sqrt(1 + a * a));
  if (kind == "expabs") return static_cast<double>(1 / (1 + a));
  return static_cast<double>(1 / ((1 + a) * (1 + a)));
}

// h*'(y) by bisection on h'(x) = y; used as a second route for the conjugate.
inline double invert_h_prime(const std::string& kind, double y) {
  if (y == 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  const double target = std::abs(y);
  if (kind != "logbarrier") {
    while (h_prime(kind, hi) < target) hi *= 2.0;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (h_prime(kind, mid) < target ? lo : hi) = mid;
  }
  return std::copysign(0.5 * (lo + hi), y);
}

// The 1-D quartic's H_lambda for the cosh kernel, (3x^2 - 1) / sqrt(1 + lambda^2 (x^3 - x)^2).
inline double quartic_h_lambda(double x_in, double lambda) {
  using namespace boost::multiprecision;
  const hp x(x_in), l(lambda);
  const hp g = x * x * x - x;
  return static_cast<double>((3 * x * x - 1) / sqrt(1 + l * l * g * g));
}

// Plain gradient descent written out longhand, for bit-equivalence checks.
template <class Grad>
std::vector<Vec> plain_gd(Grad grad, Vec x, double step, int iters) {
  std::vector<Vec> out{x};
  for (int k = 0; k < iters; ++k) {
    const Vec g = grad(x);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = x[i] - step * g[i];
    out.push_back(x);
  }
  return out;
}

// chi and the derived schedule fields in high precision.
struct Schedule {
  double gamma, lambda, chi, radius_r, time_T, tol_G, F_decrement, Z_radius;
};

inline Schedule schedule(double L, double Lbar, double rho, double eps, double delta, double delta_f,
                         double n, double c) {
  using namespace boost::multiprecision;
  const hp hL(L), hLbar(Lbar), hrho(rho), heps(eps), hdelta(delta), hdf(delta_f), hn(n), hc(c);
  const hp chi = log2(hL * hL * sqrt(hn) * hdf / (hc * sqrt(hrho) * hLbar * pow(heps, hp(2.5)) * hdelta));
  const hp lambda = 1 / hLbar;
  const hp r = heps / (400 * chi * chi * chi);
  Schedule s;
  s.gamma = static_cast<double>(1 / hL);
  s.lambda = static_cast<double>(lambda);
  s.chi = static_cast<double>(chi);
  s.radius_r = static_cast<double>(r);
  s.time_T = static_cast<double>(hL / sqrt(hrho * heps) * chi);
  s.tol_G = static_cast<double>((lambda >= 1 ? 1 / sqrt(lambda) : hp(1)) * r);
  s.F_decrement = static_cast<double>(1 / (50 * lambda * chi * chi * chi) * sqrt(heps * heps * heps / hrho));
  s.Z_radius = static_cast<double>(1 / (4 * chi) * sqrt(heps / hrho));
  return s;
}

// Gradients of the application objectives, written from their matrix forms.
inline Vec sym_mf_grad(const Mat& Y, long r, const Vec& x) {
  const long n = Y.rows();
  const Mat U = Eigen::Map<const Mat>(x.data(), n, r);
  const Mat G = (U * U.transpose() - Y) * U;
  return Eigen::Map<const Vec>(G.data(), G.size());
}

inline Vec asym_mf_grad(const Mat& Y, long r, double kappa, const Vec& x) {
  const long m = Y.rows(), n = Y.cols();
  const Mat W = Eigen::Map<const Mat>(x.data(), m, r);
  const Mat H = Eigen::Map<const Mat>(x.data() + m * r, r, n);
  const Mat R = W * H - Y;
  const Mat gW = R * H.transpose() + kappa * W.squaredNorm() * W;
  const Mat gH = W.transpose() * R + kappa * H.squaredNorm() * H;
  Vec out(x.size());
  out << Eigen::Map<const Vec>(gW.data(), gW.size()), Eigen::Map<const Vec>(gH.data(), gH.size());
  return out;
}

inline Vec phase_retrieval_grad(const Mat& A, const Vec& y, const Vec& x) {
  Vec g = Vec::Zero(x.size());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const double ax = A.row(i).dot(x);
    g -= (y[i] * y[i] - ax * ax) * ax * A.row(i).transpose();
  }
  return g;
}

// Rows of V stacked: x_i = x[i*r .. i*r + r).
inline Vec bm_grad(const Mat& C, const Vec& mult, long r, double beta, const Vec& x) {
  const long n = C.rows();
  Mat V(n, r);
  for (long i = 0; i < n; ++i) V.row(i) = x.segment(i * r, r).transpose();
  Vec A(n);
  for (long i = 0; i < n; ++i) A[i] = V.row(i).squaredNorm() - 1.0;
  Mat G = -2.0 * C * V;
  for (long i = 0; i < n; ++i) G.row(i) += 2.0 * (mult[i] + beta * A[i]) * V.row(i);
  Vec out(n * r);
  for (long i = 0; i < n; ++i) out.segment(i * r, r) = G.row(i).transpose();
  return out;
}

// min over theta of sqrt(cos^6 + sin^6): the spanning constant for identity rows in 2-D.
inline double identity_rows_C_grid() {
  double best = 1e300;
  const int steps = 2'000'000;
  for (int k = 0; k <= steps; ++k) {
    const double t = 2.0 * 3.14159265358979323846 * k / steps;
    const double c = std::cos(t), s = std::sin(t);
    best = std::min(best, std::sqrt(std::pow(c, 6) + std::pow(s, 6)));
  }
  return best;
}

// sigma_min(A)^4 / m via the eigenvalues of A^T A, a certified lower bound on
// min_u ||sum (a_i^T u)^3 a_i||: it dominates u^T(...) = sum (a_i^T u)^4 >= (sum (a_i^T u)^2)^2 / m.
inline double phase_retrieval_C_certified(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> es(A.transpose() * A);
  const double lmin = std::max(0.0, es.eigenvalues().minCoeff());
  return lmin * lmin / static_cast<double>(A.rows());
}

}  // namespace oracle
