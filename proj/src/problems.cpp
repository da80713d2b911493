#include "aniso/problems.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "aniso/errors.hpp"

namespace aniso {

double PolynomialBounds::hess_bound(double r) const {
  double acc = 0.0;
  for (auto it = hess_upper.rbegin(); it != hess_upper.rend(); ++it) acc = acc * r + *it;
  return acc;
}

double PolynomialBounds::grad_bound(double r) const {
  double acc = 0.0;
  for (auto it = grad_lower.rbegin(); it != grad_lower.rend(); ++it) acc = acc * r + *it;
  return acc;
}

void PolynomialBounds::validate() const {
  if (hess_upper.empty()) throw ParameterError("PolynomialBounds: empty Hessian envelope");
  if (grad_lower.size() != hess_upper.size() + 1) {
    throw ParameterError("PolynomialBounds: gradient envelope must have degree R + 1");
  }
  if (!(grad_lower.back() > 0.0)) {
    throw ParameterError("PolynomialBounds: leading gradient coefficient must be positive");
  }
}

namespace {

// Dense Hessian from a directional derivative of the gradient, symmetrized.
Mat hessian_from_directional(Eigen::Index dim, const std::function<Vec(const Vec&)>& dgrad) {
  Mat H(dim, dim);
  Vec e = Vec::Zero(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    e[j] = 1.0;
    H.col(j) = dgrad(e);
    e[j] = 0.0;
  }
  return 0.5 * (H + H.transpose());
}

}  // namespace

// ---------------------------------------------------------------------------
// Phase retrieval

PhaseRetrievalData random_phase_retrieval(Eigen::Index n, Eigen::Index m, CounterRng& rng) {
  PhaseRetrievalData d;
  d.A = rng.normal_matrix(m, n);
  const Vec truth = rng.normal_vector(n);
  d.y = (d.A * truth).cwiseAbs();
  return d;
}

bool spans(const Mat& A) {
  if (A.rows() < A.cols()) return false;
  Eigen::ColPivHouseholderQR<Mat> qr(A);
  return qr.rank() == A.cols();
}

double phase_retrieval_linear_coeff(const PhaseRetrievalData& data) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < data.A.rows(); ++i) {
    acc += data.y[i] * data.y[i] * data.A.row(i).squaredNorm();
  }
  return acc;
}

double phase_retrieval_C_floor(const PhaseRetrievalData& data) {
  // sum (a_i^T u)^4 <= g(u) and sum s_i^4 >= (sum s_i^2)^2 / m >= sigma_min^4 / m.
  Eigen::JacobiSVD<Mat> svd(data.A);
  const double smin = svd.singularValues().minCoeff();
  return std::pow(smin, 4) / static_cast<double>(data.A.rows());
}

Problem phase_retrieval(const PhaseRetrievalData& data, bool require_spanning) {
  if (data.A.rows() < 1) throw ParameterError("phase_retrieval: need at least one measurement");
  if (data.y.size() != data.A.rows()) throw ParameterError("phase_retrieval: |y| != rows(A)");
  if (require_spanning && !spans(data.A)) {
    throw SpanningError("phase_retrieval: measurement vectors do not span R^n");
  }
  const Mat A = data.A;
  const Vec y2 = data.y.cwiseAbs2();

  Problem p;
  p.name = "phase_retrieval";
  p.dim = A.cols();
  p.value = [A, y2](const Vec& x) {
    const Vec r = y2 - (A * x).cwiseAbs2();
    return 0.25 * r.squaredNorm();
  };
  p.grad = [A, y2](const Vec& x) -> Vec {
    const Vec s = A * x;
    const Vec w = (y2 - s.cwiseAbs2()).cwiseProduct(s);
    return -(A.transpose() * w);
  };
  p.hess = [A, y2](const Vec& x) -> Mat {
    const Vec s = A * x;
    const Vec w = 3.0 * s.cwiseAbs2() - y2;
    return A.transpose() * w.asDiagonal() * A;
  };
  p.known_inf = 0.0;
  p.l0l1_smooth = true;
  if (require_spanning) {
    double quartic = 0.0;
    for (Eigen::Index i = 0; i < A.rows(); ++i) quartic += std::pow(A.row(i).squaredNorm(), 2);
    const double lin = phase_retrieval_linear_coeff(data);
    p.envelope = PolynomialBounds{{lin, 0.0, 3.0 * quartic},
                                  {0.0, -lin, 0.0, phase_retrieval_C_floor(data)}};
  }
  return p;
}

double phase_retrieval_C(const PhaseRetrievalData& data, int refine_iters, CounterRng& rng) {
  const Mat& A = data.A;
  if (!spans(A)) throw SpanningError("phase_retrieval_C: spanning constant is zero");
  const Eigen::Index n = A.cols();

  // G(u) = ||A^T (Au)^3||^2, minimized over the sphere.
  auto objective = [&](const Vec& u) {
    const Vec s = A * u;
    return (A.transpose() * s.cwiseAbs2().cwiseProduct(s)).squaredNorm();
  };
  auto gradient = [&](const Vec& u) -> Vec {
    const Vec s = A * u;
    const Vec v = A.transpose() * s.cwiseAbs2().cwiseProduct(s);
    return 2.0 * A.transpose() * (3.0 * s.cwiseAbs2()).cwiseProduct(A * v);
  };

  std::vector<Vec> starts;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const double nrm = A.row(i).norm();
    if (nrm > 0.0) starts.emplace_back(A.row(i).transpose() / nrm);
  }
  for (Eigen::Index j = 0; j < n; ++j) starts.push_back(Vec::Unit(n, j));
  for (Eigen::Index k = 0; k < 16 + 4 * n; ++k) {
    Vec u = rng.normal_vector(n);
    starts.push_back(u / u.norm());
  }

  double best = std::numeric_limits<double>::infinity();
  for (Vec u : starts) {
    double val = objective(u);
    double step = 1.0;
    for (int it = 0; it < refine_iters; ++it) {
      Vec g = gradient(u);
      g -= u.dot(g) * u;
      if (g.norm() < 1e-15 * (1.0 + val)) break;
      bool accepted = false;
      while (step > 1e-20) {
        Vec trial = u - step * g;
        trial /= trial.norm();
        const double tv = objective(trial);
        if (tv < val) {
          u = trial;
          val = tv;
          step *= 2.0;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
    }
    best = std::min(best, val);
  }
  return std::sqrt(best);
}

// ---------------------------------------------------------------------------
// Matrix factorization

Problem sym_mf(const MatrixFactorizationData& data) {
  const Mat Y = data.Y;
  const Eigen::Index n = Y.rows(), r = data.rank_r;
  if (Y.cols() != n) throw ParameterError("sym_mf: Y must be square");
  if (!Y.isApprox(Y.transpose(), 1e-12)) throw ParameterError("sym_mf: Y must be symmetric");
  if (r < 1) throw ParameterError("sym_mf: rank must be positive");

  Problem p;
  p.name = "sym_mf";
  p.dim = n * r;
  p.value = [Y, n, r](const Vec& x) {
    Eigen::Map<const Mat> U(x.data(), n, r);
    return 0.25 * (U * U.transpose() - Y).squaredNorm();
  };
  p.grad = [Y, n, r](const Vec& x) -> Vec {
    Eigen::Map<const Mat> U(x.data(), n, r);
    Mat G = (U * U.transpose() - Y) * U;
    return Eigen::Map<const Vec>(G.data(), n * r);
  };
  p.hess = [Y, n, r](const Vec& x) -> Mat {
    Eigen::Map<const Mat> U(x.data(), n, r);
    const Mat R = U * U.transpose() - Y;
    return hessian_from_directional(n * r, [&](const Vec& d) -> Vec {
      Eigen::Map<const Mat> D(d.data(), n, r);
      Mat out = (D * U.transpose() + U * D.transpose()) * U + R * D;
      return Eigen::Map<const Vec>(out.data(), n * r);
    });
  };
  p.l0l1_smooth = true;
  const double yf = Y.norm();
  const double root = std::sqrt(static_cast<double>(n * r));
  p.envelope = PolynomialBounds{{root * yf, 0.0, 3.0 * root},
                                {0.0, -2.0 * n * yf, 0.0, 1.0 / n}};
  return p;
}

std::pair<Mat, Mat> asym_mf_unpack(const MatrixFactorizationData& data, const Vec& x) {
  const Eigen::Index m = data.Y.rows(), n = data.Y.cols(), r = data.rank_r;
  Mat W = Eigen::Map<const Mat>(x.data(), m, r);
  Mat H = Eigen::Map<const Mat>(x.data() + m * r, r, n);
  return {W, H};
}

Vec asym_mf_pack(const Mat& W, const Mat& H) {
  Vec x(W.size() + H.size());
  x.head(W.size()) = Eigen::Map<const Vec>(W.data(), W.size());
  x.tail(H.size()) = Eigen::Map<const Vec>(H.data(), H.size());
  return x;
}

Problem asym_mf(const MatrixFactorizationData& data) {
  if (data.kappa < 0.0) throw ParameterError("asym_mf: kappa must be nonnegative");
  if (data.rank_r < 1) throw ParameterError("asym_mf: rank must be positive");
  const Mat Y = data.Y;
  const Eigen::Index m = Y.rows(), n = Y.cols(), r = data.rank_r;
  const double kappa = data.kappa;
  const Eigen::Index dim = m * r + r * n;

  Problem p;
  p.name = "asym_mf";
  p.dim = dim;
  p.value = [=](const Vec& x) {
    Eigen::Map<const Mat> W(x.data(), m, r), H(x.data() + m * r, r, n);
    const double w2 = W.squaredNorm(), h2 = H.squaredNorm();
    return 0.5 * (W * H - Y).squaredNorm() + 0.25 * kappa * (w2 * w2 + h2 * h2);
  };
  p.grad = [=](const Vec& x) -> Vec {
    Eigen::Map<const Mat> W(x.data(), m, r), H(x.data() + m * r, r, n);
    const Mat R = W * H - Y;
    return asym_mf_pack(R * H.transpose() + kappa * W.squaredNorm() * W,
                        W.transpose() * R + kappa * H.squaredNorm() * H);
  };
  p.hess = [=](const Vec& x) -> Mat {
    Eigen::Map<const Mat> W(x.data(), m, r), H(x.data() + m * r, r, n);
    const Mat R = W * H - Y;
    const double w2 = W.squaredNorm(), h2 = H.squaredNorm();
    return hessian_from_directional(dim, [&](const Vec& d) -> Vec {
      Eigen::Map<const Mat> DW(d.data(), m, r), DH(d.data() + m * r, r, n);
      const Mat dR = DW * H + W * DH;
      Mat gw = dR * H.transpose() + R * DH.transpose() +
               kappa * (2.0 * (W.array() * DW.array()).sum() * W + w2 * DW);
      Mat gh = DW.transpose() * R + W.transpose() * dR +
               kappa * (2.0 * (H.array() * DH.array()).sum() * H + h2 * DH);
      return asym_mf_pack(gw, gh);
    });
  };
  if (kappa > 0.0) {
    p.l0l1_smooth = true;
    const double yf = Y.norm();
    // With V = max(||W||, ||H||): V <= ||x|| <= sqrt(2) V.
    const double root = std::sqrt(static_cast<double>(dim));
    p.envelope = PolynomialBounds{{root * yf, 0.0, root * (3.0 + 3.0 * kappa)},
                                  {0.0, -4.0 * (1.0 + kappa) * yf / kappa, 0.0,
                                   kappa / (2.0 * std::numbers::sqrt2)}};
  } else {
    p.envelope_expected_to_fail = true;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Burer-Monteiro

Vec bm_constraint(const BurerMonteiroData& data, const Vec& x) {
  const Eigen::Index n = data.C.rows(), r = data.rank_r;
  Vec a(n);
  for (Eigen::Index i = 0; i < n; ++i) a[i] = x.segment(i * r, r).squaredNorm() - 1.0;
  return a;
}

Vec bm_multiplier_update(const BurerMonteiroData& data, const Vec& x) {
  return data.multipliers + data.beta * bm_constraint(data, x);
}

BmLowerBound bm_lower_bound_constants(const BurerMonteiroData& data) {
  const double n = static_cast<double>(data.C.rows());
  const double yinf = data.multipliers.size() ? data.multipliers.cwiseAbs().maxCoeff() : 0.0;
  return {2.0 * data.beta / n, 2.0 * data.C.norm() * std::sqrt(n) + 2.0 * data.beta + 4.0 * yinf,
          0.0};
}

Problem burer_monteiro_alm(const BurerMonteiroData& data) {
  if (!(data.beta > 0.0)) throw ParameterError("burer_monteiro_alm: beta must be positive");
  const Mat C = data.C;
  const Eigen::Index n = C.rows(), r = data.rank_r;
  if (C.cols() != n || !C.isApprox(C.transpose(), 1e-12)) {
    throw ParameterError("burer_monteiro_alm: C must be square and symmetric");
  }
  const Vec y = data.multipliers.size() ? data.multipliers : Vec::Zero(n);
  if (y.size() != n) throw ParameterError("burer_monteiro_alm: multipliers must have length n");
  const double beta = data.beta;

  // Row-stacked x viewed as V (n x r) is the transpose of a column-major r x n map.
  Problem p;
  p.name = "burer_monteiro_alm";
  p.dim = n * r;
  p.value = [=](const Vec& x) {
    Eigen::Map<const Mat> Vt(x.data(), r, n);
    const Vec a = Vt.colwise().squaredNorm().transpose().array() - 1.0;
    return -(C.array() * (Vt.transpose() * Vt).array()).sum() + a.dot(y) + 0.5 * beta * a.squaredNorm();
  };
  p.grad = [=](const Vec& x) -> Vec {
    Eigen::Map<const Mat> Vt(x.data(), r, n);
    const Vec a = Vt.colwise().squaredNorm().transpose().array() - 1.0;
    const Vec scale = 2.0 * (y + beta * a);
    Mat G = -2.0 * Vt * C + Vt * scale.asDiagonal();
    return Eigen::Map<const Vec>(G.data(), n * r);
  };
  p.hess = [=](const Vec& x) -> Mat {
    Eigen::Map<const Mat> Vt(x.data(), r, n);
    Mat H = Mat::Zero(n * r, n * r);
    const Mat I = Mat::Identity(r, r);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) H.block(i * r, j * r, r, r) = -2.0 * C(i, j) * I;
      const Vec xi = Vt.col(i);
      const double ai = xi.squaredNorm() - 1.0;
      H.block(i * r, i * r, r, r) +=
          2.0 * y[i] * I + 2.0 * beta * (ai * I + 2.0 * xi * xi.transpose());
    }
    return H;
  };
  p.l0l1_smooth = true;
  const BmLowerBound lb = bm_lower_bound_constants(data);
  const double root = std::sqrt(static_cast<double>(n * r));
  const double yinf = y.size() ? y.cwiseAbs().maxCoeff() : 0.0;
  p.envelope = PolynomialBounds{
      {root * (2.0 * C.norm() + 2.0 * yinf + 2.0 * beta), 0.0, root * 6.0 * beta},
      {-lb.c0, -lb.c1, 0.0, lb.cubic}};
  return p;
}

BurerMonteiroData random_burer_monteiro(Eigen::Index n, Eigen::Index r, double beta, CounterRng& rng) {
  BurerMonteiroData d;
  Mat G = rng.normal_matrix(n, n);
  d.C = 0.5 * (G + G.transpose());
  d.C.diagonal().setZero();
  d.rank_r = r;
  d.beta = beta;
  d.multipliers = Vec::Zero(n);
  return d;
}

AlmResult run_alm(BurerMonteiroData data, const Vec& x0, int outer_iters,
                  const std::function<Vec(const Problem&, const Vec&)>& inner_solve) {
  AlmResult out;
  out.x = x0;
  if (data.multipliers.size() == 0) data.multipliers = Vec::Zero(data.C.rows());
  for (int k = 0; k < outer_iters; ++k) {
    out.x = inner_solve(burer_monteiro_alm(data), out.x);
    data.multipliers = bm_multiplier_update(data, out.x);
    ++out.outer_iterations;
  }
  out.multipliers = data.multipliers;
  out.constraint_violation = bm_constraint(data, out.x).norm();
  return out;
}

// ---------------------------------------------------------------------------
// Fixtures

Problem quartic_1d() {
  Problem p;
  p.name = "quartic1d";
  p.dim = 1;
  p.value = [](const Vec& x) { return 0.25 * std::pow(x[0], 4) - 0.5 * x[0] * x[0]; };
  p.grad = [](const Vec& x) { return Vec::Constant(1, x[0] * x[0] * x[0] - x[0]); };
  p.hess = [](const Vec& x) { return Mat::Constant(1, 1, 3.0 * x[0] * x[0] - 1.0); };
  p.known_inf = -0.25;
  p.l0l1_smooth = true;
  p.envelope = PolynomialBounds{{1.0, 0.0, 3.0}, {0.0, -1.0, 0.0, 1.0}};
  return p;
}

namespace {

Problem quartic_family(std::string name, double linear, double square) {
  Problem p;
  p.name = std::move(name);
  p.dim = 2;
  p.value = [=](const Vec& v) {
    const double x = v[0], y = v[1];
    return 0.25 * (std::pow(x, 4) + std::pow(y, 4)) - 0.5 * x * x * y * y + linear * x +
           square * x * x;
  };
  p.grad = [=](const Vec& v) -> Vec {
    const double x = v[0], y = v[1];
    Vec g(2);
    g << x * x * x - x * y * y + linear + 2.0 * square * x, y * y * y - x * x * y;
    return g;
  };
  p.hess = [=](const Vec& v) -> Mat {
    const double x = v[0], y = v[1];
    Mat h(2, 2);
    h << 3.0 * x * x - y * y + 2.0 * square, -2.0 * x * y, -2.0 * x * y, 3.0 * y * y - x * x;
    return h;
  };
  p.l0l1_smooth = false;
  p.adversarial_directions.push_back(Vec{{1.0 / std::numbers::sqrt2, -1.0 / std::numbers::sqrt2}});
  return p;
}

}  // namespace

Problem quartic_f1() { return quartic_family("f1", 0.0, 0.0); }
Problem quartic_f2() { return quartic_family("f2", 1.0, 0.0); }
Problem quartic_f3() { return quartic_family("f3", 0.0, 1.0); }

Problem exp_sq(Eigen::Index dim) {
  Problem p;
  p.name = "exp_sq";
  p.dim = dim;
  p.value = [](const Vec& x) { return std::exp(x.squaredNorm()); };
  p.grad = [](const Vec& x) -> Vec { return 2.0 * std::exp(x.squaredNorm()) * x; };
  p.hess = [dim](const Vec& x) -> Mat {
    const double e = std::exp(x.squaredNorm());
    return e * (2.0 * Mat::Identity(dim, dim) + 4.0 * x * x.transpose());
  };
  p.known_inf = 1.0;
  p.l0l1_smooth = false;
  return p;
}

Problem exp_sq_minus(Eigen::Index dim) {
  Problem p;
  p.name = "exp_sq_minus";
  p.dim = dim;
  p.value = [](const Vec& x) {
    const double s = x.squaredNorm();
    return std::exp(s) - 2.0 * s;
  };
  p.grad = [](const Vec& x) -> Vec { return 2.0 * (std::exp(x.squaredNorm()) - 2.0) * x; };
  p.hess = [dim](const Vec& x) -> Mat {
    const double e = std::exp(x.squaredNorm());
    return (2.0 * e - 4.0) * Mat::Identity(dim, dim) + 4.0 * e * x * x.transpose();
  };
  p.known_inf = 2.0 - 2.0 * std::numbers::ln2;
  return p;
}

Problem univariate_polynomial(std::vector<double> coeffs) {
  while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
  const int d = static_cast<int>(coeffs.size()) - 1;
  if (d < 2) throw ParameterError("univariate_polynomial: degree must be at least 2");

  Problem p;
  p.name = "polynomial";
  p.dim = 1;
  p.value = [coeffs](const Vec& x) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x[0] + *it;
    return acc;
  };
  p.grad = [coeffs, d](const Vec& x) {
    double acc = 0.0;
    for (int i = d; i >= 1; --i) acc = acc * x[0] + i * coeffs[i];
    return Vec::Constant(1, acc);
  };
  p.hess = [coeffs, d](const Vec& x) {
    double acc = 0.0;
    for (int i = d; i >= 2; --i) acc = acc * x[0] + i * (i - 1) * coeffs[i];
    return Mat::Constant(1, 1, acc);
  };
  p.l0l1_smooth = true;
  PolynomialBounds env;
  for (int i = 0; i + 2 <= d; ++i) env.hess_upper.push_back((i + 1.0) * (i + 2.0) * std::abs(coeffs[i + 2]));
  for (int i = 0; i + 1 < d; ++i) env.grad_lower.push_back(-(d - 1.0) * std::abs(coeffs[i + 1]));
  env.grad_lower.push_back(d * std::abs(coeffs[d]));
  p.envelope = env;
  return p;
}

Problem quadratic(const Mat& Q, const Vec& b) {
  if (Q.rows() != Q.cols() || Q.rows() != b.size()) throw ParameterError("quadratic: shape mismatch");
  const Mat S = 0.5 * (Q + Q.transpose());
  Problem p;
  p.name = "quadratic";
  p.dim = b.size();
  p.value = [S, b](const Vec& x) { return 0.5 * x.dot(S * x) - b.dot(x); };
  p.grad = [S, b](const Vec& x) -> Vec { return S * x - b; };
  p.hess = [S](const Vec&) -> Mat { return S; };
  p.l0l1_smooth = true;
  return p;
}

Problem affine(const Vec& b, double c) {
  Problem p;
  p.name = "affine";
  p.dim = b.size();
  p.value = [b, c](const Vec& x) { return b.dot(x) + c; };
  p.grad = [b](const Vec&) -> Vec { return b; };
  p.hess = [n = b.size()](const Vec&) -> Mat { return Mat::Zero(n, n); };
  p.l0l1_smooth = true;
  return p;
}

std::vector<Problem> fixture_problems() {
  return {quartic_1d(), quartic_f1(), quartic_f2(), quartic_f3(), exp_sq(2), exp_sq_minus(2),
          univariate_polynomial({0.0, 0.0, 0.0, 1.0})};
}

// ---------------------------------------------------------------------------
// Octopus

namespace {

struct OctopusTerms {
  double L, gamma, tau, nu;

  double g1(double x) const {
    const double d = x - tau;
    return -gamma * x * x + (-14.0 * L + 10.0 * gamma) * d * d * d / (3.0 * tau) +
           (5.0 * L - 3.0 * gamma) * d * d * d * d / (2.0 * tau * tau);
  }
  double g1_d(double x) const {
    const double d = x - tau;
    return -2.0 * gamma * x + (-14.0 * L + 10.0 * gamma) * d * d / tau +
           2.0 * (5.0 * L - 3.0 * gamma) * d * d * d / (tau * tau);
  }
  double g1_dd(double x) const {
    const double d = x - tau;
    return -2.0 * gamma + 2.0 * (-14.0 * L + 10.0 * gamma) * d / tau +
           6.0 * (5.0 * L - 3.0 * gamma) * d * d / (tau * tau);
  }
  double g2(double x) const {
    const double s = (x - 2.0 * tau) / tau, k = L + gamma;
    return -gamma - k * s * s * s * (10.0 + s * (15.0 + 6.0 * s));
  }
  double g2_d(double x) const {
    const double s = (x - 2.0 * tau) / tau, k = L + gamma;
    return -k * 30.0 * s * s * (1.0 + s) * (1.0 + s) / tau;
  }
  double g2_dd(double x) const {
    const double s = (x - 2.0 * tau) / tau, k = L + gamma;
    return -k * (60.0 * s + 180.0 * s * s + 120.0 * s * s * s) / (tau * tau);
  }
};

// Value plus optional derivatives in z = |x| coordinates.
double octopus_eval(const OctopusTerms& t, const Vec& z, Vec* dz, Mat* dzz) {
  const Eigen::Index d = z.size();
  if (dz) dz->setZero(d);
  if (dzz) dzz->setZero(d, d);

  Eigen::Index active = d;
  for (Eigen::Index j = 0; j < d; ++j) {
    if (z[j] < 2.0 * t.tau) {
      active = j;
      break;
    }
  }
  double f = -static_cast<double>(active) * t.nu;
  for (Eigen::Index j = 0; j < active; ++j) {
    const double u = z[j] - 4.0 * t.tau;
    f += t.L * u * u;
    if (dz) (*dz)[j] = 2.0 * t.L * u;
    if (dzz) (*dzz)(j, j) = 2.0 * t.L;
  }
  if (active == d) return f;

  const Eigen::Index i = active;
  const double zi = z[i];
  Eigen::Index tail_start = i + 1;
  if (zi <= t.tau) {
    f += -t.gamma * zi * zi;
    if (dz) (*dz)[i] = -2.0 * t.gamma * zi;
    if (dzz) (*dzz)(i, i) = -2.0 * t.gamma;
  } else {
    f += t.g1(zi);
    if (dz) (*dz)[i] = t.g1_d(zi);
    if (dzz) (*dzz)(i, i) = t.g1_dd(zi);
    if (i + 1 < d) {
      const double zn = z[i + 1];
      f += t.g2(zi) * zn * zn;
      if (dz) {
        (*dz)[i] += t.g2_d(zi) * zn * zn;
        (*dz)[i + 1] = 2.0 * t.g2(zi) * zn;
      }
      if (dzz) {
        (*dzz)(i, i) += t.g2_dd(zi) * zn * zn;
        (*dzz)(i, i + 1) = (*dzz)(i + 1, i) = 2.0 * t.g2_d(zi) * zn;
        (*dzz)(i + 1, i + 1) = 2.0 * t.g2(zi);
      }
      tail_start = i + 2;
    }
  }
  for (Eigen::Index j = tail_start; j < d; ++j) {
    f += t.L * z[j] * z[j];
    if (dz) (*dz)[j] = 2.0 * t.L * z[j];
    if (dzz) (*dzz)(j, j) = 2.0 * t.L;
  }
  return f;
}

OctopusTerms octopus_terms(const OctopusParams& p) {
  const double nu = 13.0 * (p.L + p.gamma) * p.tau * p.tau / 6.0 + 4.0 * p.L * p.tau * p.tau;
  return {p.L, p.gamma, p.tau, nu};
}

Vec reflection_signs(const Vec& x) {
  return x.unaryExpr([](double v) { return v < 0.0 ? -1.0 : 1.0; });
}

}  // namespace

double octopus_min_value(const OctopusParams& params) {
  return -static_cast<double>(params.dim) * octopus_terms(params).nu;
}

double octopus_escape_threshold(const OctopusParams& params) {
  const double fmin = octopus_min_value(params);
  return fmin + 0.1 * std::abs(fmin);
}

Problem octopus(const OctopusParams& params) {
  if (params.dim < 2) throw ParameterError("octopus: dim must be at least 2");
  if (!(params.L > 0.0 && params.gamma > 0.0 && params.tau > 0.0)) {
    throw ParameterError("octopus: L, gamma and tau must be positive");
  }
  const OctopusTerms t = octopus_terms(params);
  Problem p;
  p.name = "octopus";
  p.dim = params.dim;
  p.value = [t](const Vec& x) { return octopus_eval(t, x.cwiseAbs(), nullptr, nullptr); };
  p.grad = [t](const Vec& x) -> Vec {
    Vec dz;
    octopus_eval(t, x.cwiseAbs(), &dz, nullptr);
    return reflection_signs(x).cwiseProduct(dz);
  };
  p.hess = [t](const Vec& x) -> Mat {
    Mat dzz;
    octopus_eval(t, x.cwiseAbs(), nullptr, &dzz);
    const Vec s = reflection_signs(x);
    return s.asDiagonal() * dzz * s.asDiagonal();
  };
  p.known_inf = octopus_min_value(params);
  return p;
}

}  // namespace aniso
