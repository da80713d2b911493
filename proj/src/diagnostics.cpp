#include "aniso/diagnostics.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "aniso/errors.hpp"
#include "aniso/saddle_escape.hpp"

namespace aniso {

std::vector<double> RayScan::geometric_radii(double r_min, double r_max, int per_decade) {
  if (!(r_min > 0.0 && r_max >= r_min) || per_decade < 1) {
    throw ParameterError("scan: need 0 < r_min <= r_max and per_decade >= 1");
  }
  const double decades = std::log10(r_max / r_min);
  const int steps = std::max(0, static_cast<int>(std::lround(decades * per_decade)));
  std::vector<double> radii;
  for (int i = 0; i < steps; ++i) radii.push_back(r_min * std::pow(10.0, static_cast<double>(i) / per_decade));
  radii.push_back(r_max);
  return radii;
}

RayScan RayScan::make(const Problem& p, const ScanSpec& spec) {
  RayScan scan;
  scan.radii = geometric_radii(spec.r_min, spec.r_max, spec.per_decade);
  auto add = [&](Vec v, bool adv) {
    const double n = v.norm();
    if (n == 0.0) return;
    scan.directions.push_back(v / n);
    scan.adversarial.push_back(adv);
  };
  for (const Vec& d : p.adversarial_directions) add(d, true);
  if (spec.include_axes) {
    for (Eigen::Index i = 0; i < p.dim; ++i) {
      add(Vec::Unit(p.dim, i), false);
      add(-Vec::Unit(p.dim, i), false);
    }
  }
  CounterRng rng(spec.seed);
  for (int k = 0; k < spec.random_directions; ++k) add(rng.normal_vector(p.dim), false);
  return scan;
}

namespace {

double spectral_max(const Mat& S) {
  Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

L0Report l0_for_l1(const Problem& p, double L1, const RayScan& scan) {
  if (!(L1 > 0.0)) throw ParameterError("l0_for_l1: L1 must be positive");
  L0Report rep;
  rep.l1 = L1;
  const double inner_cut = scan.radii.back() * 1e-2;
  rep.per_direction.assign(scan.directions.size(), 0.0);
  double worst_growth = -1.0;
  for (std::size_t d = 0; d < scan.directions.size(); ++d) {
    double full = 0.0, inner = 0.0;
    bool bad = false;
    for (double r : scan.radii) {
      const Vec x = r * scan.directions[d];
      const double gn = p.grad(x).norm();
      const double hn = p.hess(x).norm();
      if (!std::isfinite(gn) || !std::isfinite(hn)) {
        bad = true;
        break;
      }
      const double est = std::max(0.0, hn - L1 * gn);
      full = std::max(full, est);
      if (r <= inner_cut) inner = std::max(inner, est);
    }
    rep.per_direction[d] = bad ? std::numeric_limits<double>::infinity() : full;
    rep.l0 = std::max(rep.l0, rep.per_direction[d]);
    rep.l0_inner = std::max(rep.l0_inner, inner);
    rep.nonfinite = rep.nonfinite || bad;
    const double growth = bad ? std::numeric_limits<double>::infinity() : full / std::max(inner, 1e-300);
    if (growth > worst_growth) {
      worst_growth = growth;
      rep.worst_direction = static_cast<int>(d);
    }
  }
  rep.divergent = rep.nonfinite || rep.l0 > 1.05 * rep.l0_inner;
  if (rep.worst_direction >= 0) rep.worst_direction_vec = scan.directions[rep.worst_direction];
  return rep;
}

double second_order_char(const Problem& p, const ReferenceFunction& ref, double Lbar, const RayScan& scan) {
  if (!(Lbar > 0.0)) throw ParameterError("second_order_char: Lbar must be positive");
  const double lambda = 1.0 / Lbar;
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec& dir : scan.directions) {
    for (double r : scan.radii) {
      const double top = spectral_max(h_lambda_symmetrized(p, ref, r * dir, lambda));
      best = std::max(best, top / Lbar);
    }
  }
  return best;
}

double second_order_char_at(const Problem& p, const ReferenceFunction& ref, double Lbar,
                            const std::vector<Vec>& points) {
  if (!(Lbar > 0.0)) throw ParameterError("second_order_char: Lbar must be positive");
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec& x : points) best = std::max(best, spectral_max(h_lambda_symmetrized(p, ref, x, 1.0 / Lbar)) / Lbar);
  return best;
}

EnvelopeReport envelope_check(const Problem& p, const PolynomialBounds& bounds, const RayScan& scan,
                              double rel_tol) {
  bounds.validate();
  EnvelopeReport rep;
  for (const Vec& dir : scan.directions) {
    for (double r : scan.radii) {
      const Vec x = r * dir;
      ++rep.samples;
      const double hn = p.hess(x).norm();
      const double hb = bounds.hess_bound(r);
      if (!(hn <= hb + rel_tol * (1.0 + std::abs(hb)))) {
        rep = {false, rep.samples, "hessian", x, r, hn, hb};
        return rep;
      }
      const double gn = p.grad(x).norm();
      const double gb = bounds.grad_bound(r);
      if (!(gn >= gb - rel_tol * (1.0 + std::abs(gb)))) {
        rep = {false, rep.samples, "gradient", x, r, gn, gb};
        return rep;
      }
    }
  }
  return rep;
}

HLambdaReport h_lambda_bound_scan(const Problem& p, const ReferenceFunction& ref, double Lbar,
                                  const RayScan& scan) {
  if (!(Lbar > 0.0)) throw ParameterError("h_lambda_bound_scan: Lbar must be positive");
  const double lambda = 1.0 / Lbar;
  const std::size_t nr = scan.radii.size();
  const std::size_t decile = std::max<std::size_t>(1, nr / 10);
  HLambdaReport rep;
  for (const Vec& dir : scan.directions) {
    for (std::size_t i = 0; i < nr; ++i) {
      const double v = h_lambda(p, ref, scan.radii[i] * dir, lambda).norm();
      if (!std::isfinite(v)) {
        rep.nonfinite = true;
        continue;
      }
      rep.max_fro = std::max(rep.max_fro, v);
      if (i < decile) rep.head = std::max(rep.head, v);
      if (i + decile >= nr) rep.tail = std::max(rep.tail, v);
    }
  }
  rep.decreasing = !rep.nonfinite && rep.tail < rep.head;
  return rep;
}

FdReport fd_check(const Problem& p, int points, CounterRng& rng, double radius, double tol) {
  std::vector<Vec> xs;
  for (int k = 0; k < points; ++k) xs.push_back(sample_ball(p.dim, radius, rng));
  return fd_check_at(p, xs, tol);
}

FdReport fd_check_at(const Problem& p, const std::vector<Vec>& points, double tol) {
  FdReport rep;
  double worst = 0.0;
  const Eigen::Index n = p.dim;
  for (const Vec& x : points) {
    const Vec g = p.grad(x);
    const Mat H = p.hess(x);
    Vec g_fd(n);
    Mat H_fd(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
      Vec xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      g_fd[i] = (p.value(xp) - p.value(xm)) / (2.0 * h);
      H_fd.col(i) = (p.grad(xp) - p.grad(xm)) / (2.0 * h);
    }
    const double ge = (g_fd - g).cwiseAbs().maxCoeff() / std::max(1.0, g.cwiseAbs().maxCoeff());
    const double he = (H_fd - H).cwiseAbs().maxCoeff() / std::max(1.0, H.cwiseAbs().maxCoeff());
    const double err = std::max(ge, he);
    if (!rep.worst_point || !(err <= worst)) {
      worst = err;
      rep.worst_point = x;
    }
    rep.max_grad_error = std::max(rep.max_grad_error, ge);
    rep.max_hess_error = std::max(rep.max_hess_error, he);
    if (!(ge <= tol && he <= tol)) rep.pass = false;
  }
  return rep;
}

}  // namespace aniso
