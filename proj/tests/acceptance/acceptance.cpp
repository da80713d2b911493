// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "aniso/bench.hpp"
#include "aniso/diagnostics.hpp"
#include "aniso/precond.hpp"
#include "aniso/problems.hpp"
#include "aniso/saddle_escape.hpp"
#include "oracles.hpp"

using namespace aniso;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs > limit_seconds) {
    out.pass = false;
    out.detail += "; over the " + std::to_string(limit_seconds) + " s limit";
  }
  if (!out.pass) ++failures;
  std::printf("%s %2d %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", id, title, out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

const Kernel kQuad(KernelKind::Quadratic), kCosh(KernelKind::Cosh), kExp(KernelKind::ExpAbs),
    kLog(KernelKind::LogBarrier), kClip(KernelKind::HardClip);

// Counts unperturbed consecutive rows that break
// f_{k+1} - f_k <= -step^2 / (2 gamma lambda) + 1e-9 (1 + |f_k|).
long descent_violations(const RunTrace& t, double gamma, double lambda) {
  long bad = 0;
  for (std::size_t k = 0; k + 1 < t.rows.size(); ++k) {
    const TraceRow& r = t.rows[k];
    if (r.perturbed) continue;
    const double drop = t.rows[k + 1].f - r.f;
    const double bound = -r.step_norm * r.step_norm / (2.0 * gamma * lambda) + 1e-9 * (1.0 + std::abs(r.f));
    if (!(drop <= bound)) ++bad;
  }
  return bad;
}

// Shared by criteria 10 and 11.
EscapeResult escape_study() {
  static const EscapeResult result = [] {
    EscapeSpec spec;
    spec.dims = {5, 10};
    spec.Ls = {1.0, 2.0};
    spec.seeds = 20;
    return bench_escape(spec, resolve_threads(0));
  }();
  return result;
}

Mat symmetric_normal(CounterRng& rng, long n) {
  const Mat G = rng.normal_matrix(n, n);
  return 0.5 * (G + G.transpose());
}

}  // namespace

int main() {
  criterion(1, "kernel conjugate identities", 1.0, [] {
    double inv = 0.0, fd = 0.0;
    for (Kernel k : {kCosh, kExp, kLog}) {
      const double span = k.kind() == KernelKind::LogBarrier ? 0.999 : 10.0;
      for (int i = 0; i < 1000; ++i) {
        const double x = -span + 2.0 * span * i / 999.0;
        inv = std::max(inv, std::abs(k.conj_prime(k.derivative(x)) - x));
        const double y = -50.0 + 100.0 * i / 999.0;
        const double h = 1e-5 * std::max(1.0, std::abs(y));
        fd = std::max(fd, std::abs(k.conj_second(y) - (k.conj_prime(y + h) - k.conj_prime(y - h)) / (2.0 * h)));
      }
    }
    return Verdict{inv <= 1e-10 && fd <= 1e-6, "max |h*'(h'(x)) - x| = " + fmt(inv) + ", max FD gap = " + fmt(fd)};
  });

  criterion(2, "preconditioner Jacobian at zero is the identity", 0, [] {
    bool exact = true;
    double fd = 0.0;
    for (Kernel k : {kQuad, kCosh, kExp, kLog, kClip}) {
      const ReferenceFunction ref(k, 3);
      exact = exact && precondition_jacobian(ref, Vec::Zero(3)) == Mat::Identity(3, 3);
      Mat J(3, 3);
      for (int j = 0; j < 3; ++j) {
        Vec e = Vec::Zero(3);
        // The logbarrier conjugate has a |y| term, so the central difference is only O(step) accurate.
        e[j] = 1e-7;
        J.col(j) = (precondition(ref, e) - precondition(ref, -e)) / 2e-7;
      }
      fd = std::max(fd, (J - Mat::Identity(3, 3)).cwiseAbs().maxCoeff());
    }
    return Verdict{exact && fd <= 1e-6, std::string(exact ? "exact identity" : "NOT exact") + ", FD gap " + fmt(fd)};
  });

  criterion(3, "quadratic kernel reproduces plain GD bit for bit", 0, [] {
    CounterRng rng(3);
    const Mat Q = Vec{{3.0, 1.0, 0.2}}.asDiagonal();
    std::vector<std::pair<Problem, double>> cases = {
        {quadratic(Q, Vec{{1.0, -1.0, 0.5}}), 0.3},
        {phase_retrieval(random_phase_retrieval(3, 6, rng)), 1e-3},
        {sym_mf({Mat::Identity(3, 3), 2, 0.0}), 1e-2},
        {quartic_1d(), 1e-2},
        {octopus({5, 1.0, 1.0, std::numbers::e}), 0.1},
    };
    int identical = 0;
    for (auto& [p, gamma] : cases) {
      SolverConfig cfg;
      cfg.gamma = gamma;
      cfg.max_iters = 1000;
      cfg.record_path = true;
      const Vec x0 = rng.normal_vector(p.dim) * 0.8;
      const RunTrace t = run_pgd(p, ReferenceFunction(kQuad, p.dim), x0, cfg);
      const auto ref = oracle::plain_gd(p.grad, x0, gamma, 1000);
      if (t.iterations == 1000 && t.path == ref) ++identical;
    }
    return Verdict{identical == 5, std::to_string(identical) + "/5 problems identical over 1000 iterations"};
  });

  criterion(4, "descent lemma with the empirical L", 0, [] {
    struct Case {
      Problem p;
      Kernel k;
      double r_max;
      double start;
    };
    CounterRng rng(4);
    std::vector<Case> cases;
    for (Kernel k : {kCosh, kExp, kLog}) {
      cases.push_back({phase_retrieval(random_phase_retrieval(3, 5, rng)), k, 1e4, 3.0});
      cases.push_back({sym_mf({symmetric_normal(rng, 3), 2, 0.0}), k, 1e4, 3.0});
      cases.push_back({asym_mf({rng.normal_matrix(2, 3), 1, 0.1}), k, 1e4, 3.0});
      cases.push_back({burer_monteiro_alm(random_burer_monteiro(3, 2, 2.0, rng)), k, 1e4, 3.0});
      cases.push_back({quartic_1d(), k, 1e4, 3.0});
    }
    cases.push_back({exp_sq(2), kLog, 10.0, 1.0});
    cases.push_back({exp_sq_minus(2), kLog, 10.0, 1.0});
    long traces = 0, steps = 0, bad = 0, raised = 0;
    for (const Case& c : cases) {
      const ReferenceFunction ref(c.k, c.p.dim);
      ScanSpec scan;
      scan.r_max = c.r_max;
      const double L_scan = second_order_char(c.p, ref, 1.0, RayScan::make(c.p, scan));
      for (int s = 0; s < 5; ++s) {
        SolverConfig cfg;
        cfg.lambda = 1.0;
        cfg.max_iters = 2000;
        cfg.record_path = true;
        Vec x0 = rng.normal_vector(c.p.dim);
        x0 *= c.start / std::max(1.0, x0.norm());
        // Ray samples can miss the region the iterates visit, so the sample set
        // is grown by the trajectory until no iterate raises the estimate.
        double L = L_scan;
        RunTrace t;
        for (int round = 0; round < 20; ++round) {
          cfg.gamma = 1.0 / L;
          t = run_pgd(c.p, ref, x0, cfg);
          const double on_path = second_order_char_at(c.p, ref, 1.0, t.path);
          if (on_path <= L) break;
          L = on_path;
        }
        ++traces;
        raised += L > L_scan;
        steps += static_cast<long>(t.rows.size()) - 1;
        bad += descent_violations(t, cfg.gamma, cfg.lambda);
      }
    }
    return Verdict{bad == 0, std::to_string(bad) + " violations over " + std::to_string(steps) + " steps in " +
                                 std::to_string(traces) + " traces (" + std::to_string(raised) + " with L raised by their iterates)"};
  });

  criterion(5, "H_lambda closed form on the quartic", 0, [] {
    const Problem p = quartic_1d();
    const ReferenceFunction ref(kCosh, 1);
    double worst = 0.0;
    for (double lambda : {0.5, 1.0, 2.0}) {
      for (int i = -1000; i <= 1000; ++i) {
        const double x = i * 1e-2;
        worst = std::max(worst, std::abs(h_lambda(p, ref, Vec{{x}}, lambda)(0, 0) - oracle::quartic_h_lambda(x, lambda)));
      }
    }
    return Verdict{worst <= 1e-10, "max error " + fmt(worst)};
  });

  criterion(6, "gradient lower bounds of the applications", 30.0, [] {
    CounterRng rng(6);
    long bad = 0, checked = 0;
    auto radius = [&] { return 10.0 * rng.uniform(); };
    auto direction = [&](long n) { return Vec(rng.normal_vector(n).normalized()); };
    for (int i = 0; i < 1000; ++i) {
      // phase retrieval: ||grad|| >= C r^3 - (sum y_j^2 ||a_j||^2) r
      const auto d = random_phase_retrieval(3, 5, rng);
      const double C = oracle::phase_retrieval_C_certified(d.A);
      double lin = 0.0;
      for (Eigen::Index j = 0; j < d.A.rows(); ++j) lin += d.y[j] * d.y[j] * d.A.row(j).squaredNorm();
      const Vec x = direction(3) * radius();
      const double r = x.norm();
      const double rhs = C * r * r * r - lin * r;
      bad += phase_retrieval(d).grad(x).norm() < rhs - 1e-9 * (1.0 + std::abs(rhs));
      ++checked;
    }
    for (int i = 0; i < 1000; ++i) {
      // symmetric MF: ||grad||^2 >= u^6 / n^2 - 2 ||Y||_F u^4
      const long n = 2 + static_cast<long>(rng.uniform() * 4), r = 1 + static_cast<long>(rng.uniform() * n);
      const Mat G = rng.normal_matrix(n, n);
      const MatrixFactorizationData d{0.5 * (G + G.transpose()), r, 0.0};
      const Vec x = direction(n * r) * radius();
      const double u = x.norm(), nn = static_cast<double>(n);
      const double rhs = std::pow(u, 6) / (nn * nn) - 2.0 * d.Y.norm() * std::pow(u, 4);
      bad += sym_mf(d).grad(x).squaredNorm() < rhs - 1e-9 * (1.0 + std::abs(rhs));
      ++checked;
    }
    for (int i = 0; i < 1000; ++i) {
      // asymmetric MF, kappa = 0.1: ||grad||^2 >= kappa^2 V^6 - 4 (1 + kappa) ||Y||_F V^4
      const double kappa = 0.1;
      const MatrixFactorizationData d{rng.normal_matrix(3, 4), 2, kappa};
      const Vec x = direction(14) * radius();
      const auto [W, H] = asym_mf_unpack(d, x);
      const double V = std::max(W.norm(), H.norm());
      const double rhs = kappa * kappa * std::pow(V, 6) - 4.0 * (1.0 + kappa) * d.Y.norm() * std::pow(V, 4);
      bad += asym_mf(d).grad(x).squaredNorm() < rhs - 1e-9 * (1.0 + std::abs(rhs));
      ++checked;
    }
    for (int i = 0; i < 1000; ++i) {
      // Burer-Monteiro ALM: ||grad|| >= (2 beta / n) u^3 - (2 ||C||_F sqrt(n) + 2 beta + 4 ||y||_inf) u
      const long n = 2 + static_cast<long>(rng.uniform() * 8);
      auto d = random_burer_monteiro(n, 2, 0.5 + 4.5 * rng.uniform(), rng);
      d.multipliers = rng.normal_vector(n);
      const Vec x = direction(2 * n) * radius();
      const double u = x.norm(), nn = static_cast<double>(n);
      const double c1 = 2.0 * d.C.norm() * std::sqrt(nn) + 2.0 * d.beta + 4.0 * d.multipliers.cwiseAbs().maxCoeff();
      const double rhs = 2.0 * d.beta / nn * u * u * u - c1 * u;
      bad += burer_monteiro_alm(d).grad(x).norm() < rhs - 1e-9 * (1.0 + std::abs(rhs));
      ++checked;
    }
    return Verdict{bad == 0, std::to_string(bad) + " violations at " + std::to_string(checked) + " points"};
  });

  criterion(7, "certify separates applications from counterexamples", 0, [] {
    CounterRng rng(7);
    CertifySpec spec;
    std::vector<std::string> wrong;
    for (const Problem& p : {quartic_f1(), quartic_f2(), quartic_f3(), exp_sq(2)}) {
      const CertifyEntry e = certify_problem(p, kLog, spec);
      bool along = p.adversarial_directions.empty();
      for (const Vec& d : p.adversarial_directions) along = along || (e.l0.worst_direction_vec - d).norm() < 1e-12;
      if (!e.l0.divergent || !along) wrong.push_back(p.name);
    }
    const Problem apps[] = {phase_retrieval(random_phase_retrieval(3, 5, rng)),
                            sym_mf({symmetric_normal(rng, 3), 2, 0.0}),
                            asym_mf({rng.normal_matrix(2, 3), 1, 0.5}),
                            burer_monteiro_alm(random_burer_monteiro(3, 2, 2.0, rng))};
    for (const Problem& p : apps) {
      const CertifyEntry e = certify_problem(p, kLog, spec);
      if (!e.envelope || !e.envelope->pass || e.l0.divergent || !e.h_lambda.decreasing) wrong.push_back(p.name);
    }
    std::string detail = "4 counterexamples divergent, 4 applications pass";
    if (!wrong.empty()) {
      detail = "wrong verdict for";
      for (const auto& w : wrong) detail += " " + w;
    }
    return Verdict{wrong.empty(), detail};
  });

  criterion(8, "exp(||x||^2) anisotropic constants", 0, [] {
    ScanSpec scan;
    scan.r_max = 10.0;
    const Problem e = exp_sq(2), em = exp_sq_minus(2);
    const double L1 = second_order_char(e, ReferenceFunction(kLog, 2), 1.0, RayScan::make(e, scan));
    const double L2 = second_order_char(em, ReferenceFunction(kLog, 2), 1.0, RayScan::make(em, scan));
    return Verdict{L1 <= 2.05 && L2 <= 10.1, "empirical L " + fmt(L1) + " (<= 2.05) and " + fmt(L2) + " (<= 10.1)"};
  });

  criterion(9, "GD vs P-GD stepsize range on symmetric MF", 60.0, [] {
    const ExperimentConfig cfg = load_config(R"({
  "problem": {"problem": "sym_mf", "random": {"n": 2, "seed": 3, "scale": 1.0}, "rank": 1},
  "kernel": "cosh",
  "lambda": 1.0,
  "x0": [10, -7],
  "compare": {"gammas": {"min": 1e-4, "max": 10, "per_decade": 4}, "max_iters": 20000, "stat_tol": 1e-12}
})");
    const CompareResult r = bench_compare(cfg, resolve_threads(0));
    if (!r.largest_gd || !r.largest_pgd) return Verdict{false, "a solver never converged"};
    const double ratio = *r.largest_pgd / *r.largest_gd;
    return Verdict{ratio >= 10.0, "largest converging gamma: GD " + fmt(*r.largest_gd) + ", P-GD " +
                                      fmt(*r.largest_pgd) + ", ratio " + fmt(ratio)};
  });

  criterion(10, "octopus escape", 600.0, [] {
    const EscapeResult res = escape_study();
    bool ok = true;
    std::string detail;
    for (long n : {5L, 10L}) {
      for (double L : {1.0, 2.0}) {
        const EscapeCell *gd = nullptr, *pgd = nullptr, *alg = nullptr;
        for (const EscapeCell& c : res.cells) {
          if (c.n != n || c.L != L) continue;
          if (c.solver == "gd") gd = &c;
          if (c.solver == "perturbed_gd") pgd = &c;
          if (c.solver == "perturbed_pgd") alg = &c;
        }
        if (!gd || !pgd || !alg) return Verdict{false, "missing cell"};
        const double ratio = std::max(alg->median_iterations, pgd->median_iterations) /
                             std::min(alg->median_iterations, pgd->median_iterations);
        const bool cell = alg->escaped >= 18 && gd->escaped == 0 && ratio <= 3.0;
        ok = ok && cell;
        detail += (detail.empty() ? "" : "; ") + std::string("n=") + std::to_string(n) + " L=" + fmt(L) + ": alg " +
                  std::to_string(alg->escaped) + "/20 med " + fmt(alg->median_iterations) + ", pgd med " +
                  fmt(pgd->median_iterations) + ", gd " + std::to_string(gd->escaped) + "/20";
      }
    }
    return Verdict{ok, detail};
  });

  criterion(11, "perturbation bookkeeping", 0, [] {
    long events = 0, bad_gap = 0, bad_gate = 0, bad_cost = 0;
    auto audit = [&](const std::vector<PerturbationEvent>& evs, const PerturbSchedule& s, const Kernel& k) {
      const long gate = s.gate_iterations();
      const double cost = s.gamma / s.lambda * k.value(2.0 * s.radius_r);
      long last = 0;
      for (const PerturbationEvent& e : evs) {
        ++events;
        bad_gap += !(e.iter - last > gate);
        last = e.iter;
        bad_gate += !(e.precond_norm_before <= std::sqrt(s.lambda) * s.tol_G);
        bad_cost += !(e.f_after - e.f_before <= cost + 1e-9);
      }
    };
    for (const EscapeRun& run : escape_study().runs) {
      if (run.solver == "perturbed_pgd") audit(run.events, run.schedule, kCosh);
    }
    // Quartic saddle with the derived schedule.
    const Problem q = quartic_1d();
    const ReferenceFunction ref(kCosh, 1);
    CounterRng rr(2);
    const double rho = estimate_rho(q, ref, 1.0, 2.0, 500, rr);
    const PerturbSchedule s = derive_params(2.05, 1.0, rho, 1e-2, 0.1, 1.0, 1, std::pow(2.0, -39));
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      CounterRng rng(seed);
      const RunTrace t = run_perturbed_pgd(q, ref, Vec{{1e-8}}, s, {2000, std::nullopt, false}, rng);
      audit(t.events, s, kCosh);
    }
    const bool ok = events > 0 && bad_gap == 0 && bad_gate == 0 && bad_cost == 0;
    return Verdict{ok, std::to_string(events) + " events; gap/gate/cost violations " + std::to_string(bad_gap) + "/" +
                           std::to_string(bad_gate) + "/" + std::to_string(bad_cost)};
  });

  criterion(12, "uniform ball sampler", 0, [] {
    bool ok = true;
    std::string detail;
    for (long n : {2L, 5L}) {
      CounterRng rng(12 + n);
      double acc = 0.0;
      const int draws = 100000;
      for (int i = 0; i < draws; ++i) acc += sample_ball(n, 0.7, rng).squaredNorm() / 0.49;
      const double mean = acc / draws, want = static_cast<double>(n) / (n + 2.0);
      const double rel = std::abs(mean - want) / want;
      ok = ok && rel <= 0.01;
      detail += (detail.empty() ? "" : ", ") + std::string("n=") + std::to_string(n) + " mean " + fmt(mean) +
                " vs " + fmt(want);
    }
    return Verdict{ok, detail};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
