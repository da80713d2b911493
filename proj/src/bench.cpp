#include "aniso/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <thread>

#include "aniso/errors.hpp"
#include "aniso/problems.hpp"
#include "aniso/trace_io.hpp"

namespace aniso {

using nlohmann::json;
namespace fs = std::filesystem;

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ANISO_OPT_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

std::string join(const fs::path& dir, const std::string& name) { return (dir / name).string(); }

std::string trace_csv(const RunTrace& t) {
  std::ostringstream os;
  write_trace_csv(os, t);
  return os.str();
}

std::string path_csv(const RunTrace& t) {
  std::ostringstream os;
  write_path_csv(os, t);
  return os.str();
}

Problem single_problem(const ExperimentConfig& cfg) {
  if (!cfg.problem) throw ConfigError("config: this command needs a \"problem\" block");
  return build_problem(*cfg.problem);
}

RunTrace run_one(const ExperimentConfig& cfg, const Problem& p, std::uint64_t seed) {
  const Vec x0 = initial_point(cfg, p.dim, seed);
  const ReferenceFunction ref(cfg.kernel, p.dim);
  SolverConfig sc = cfg.solver_cfg;
  sc.seed = seed;
  CounterRng rng(seed);
  PerturbedOptions po{sc.max_iters, sc.target_value, sc.record_path};
  switch (cfg.solver) {
    case SolverKind::Pgd:
      return run_pgd(p, ref, x0, sc);
    case SolverKind::Gd:
      return run_gd(p, x0, sc);
    case SolverKind::Clipped:
      return run_clipped(p, x0, sc);
    case SolverKind::PerturbedPgd: {
      if (!cfg.schedule) throw ConfigError("config: solver perturbed_pgd needs a \"schedule\" block");
      return run_perturbed_pgd(p, ref, x0, resolve_schedule(*cfg.schedule, p), po, rng);
    }
    case SolverKind::PerturbedGd: {
      if (!cfg.perturbed_gd) throw ConfigError("config: solver perturbed_gd needs a \"perturbed_gd\" block");
      return run_perturbed_gd(p, x0, *cfg.perturbed_gd, po, rng);
    }
  }
  throw ConfigError("config: unknown solver");
}

double median(std::vector<long> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? static_cast<double>(v[m]) : 0.5 * static_cast<double>(v[m - 1] + v[m]);
}

std::string format_vec(const Vec& v) {
  std::ostringstream os;
  os.precision(4);
  os << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// run

std::vector<SeededRun> bench_run(const ExperimentConfig& cfg, int threads) {
  const Problem p = single_problem(cfg);
  if (cfg.solver == SolverKind::PerturbedPgd && cfg.schedule) resolve_schedule(*cfg.schedule, p);
  std::vector<SeededRun> runs(cfg.seeds.size());
  parallel_for(runs.size(), threads, [&](std::size_t i) {
    runs[i].seed = cfg.seeds[i];
    runs[i].trace = run_one(cfg, p, cfg.seeds[i]);
  });
  return runs;
}

json cmd_run(const ExperimentConfig& cfg, const std::string& out_dir, int threads) {
  const auto runs = bench_run(cfg, threads);
  const fs::path dir(out_dir);
  json summary;
  summary["problem"] = (*cfg.problem)["problem"];
  summary["solver"] = std::string(solver_name(cfg.solver));
  summary["kernel"] = std::string(cfg.kernel.name());
  summary["runs"] = json::array();
  for (const auto& r : runs) {
    const std::string tag = "seed" + std::to_string(r.seed);
    write_file_atomic(join(dir, "trace_" + tag + ".csv"), trace_csv(r.trace));
    if (cfg.solver_cfg.record_path) write_file_atomic(join(dir, "path_" + tag + ".csv"), path_csv(r.trace));
    json s = trace_summary_json(r.trace);
    s["seed"] = r.seed;
    s["trace"] = "trace_" + tag + ".csv";
    summary["runs"].push_back(s);
  }
  write_file_atomic(join(dir, "summary.json"), summary.dump(2) + "\n");
  return summary;
}

// ---------------------------------------------------------------------------
// compare

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Converged:
      return "converged";
    case Outcome::Diverged:
      return "diverged";
    case Outcome::Budget:
      return "budget";
  }
  return "unknown";
}

CompareResult bench_compare(const ExperimentConfig& cfg, int threads) {
  if (!cfg.compare) throw ConfigError("config: compare needs a \"compare\" block");
  const CompareSpec& spec = *cfg.compare;
  const Problem p = single_problem(cfg);
  const Vec x0 = initial_point(cfg, p.dim, cfg.seeds.front());
  const ReferenceFunction ref(cfg.kernel, p.dim);

  CompareResult res;
  if (spec.max_iters == 0) return res;
  const std::size_t ng = spec.gammas.size();
  res.rows.resize(2 * ng);
  res.traces.resize(2 * ng);
  parallel_for(2 * ng, threads, [&](std::size_t i) {
    SolverConfig sc = cfg.solver_cfg;
    sc.gamma = spec.gammas[i / 2];
    sc.max_iters = spec.max_iters;
    sc.stat_tol = spec.stat_tol;
    sc.target_value.reset();
    sc.record_path = spec.record_paths;
    const bool gd = i % 2 == 0;
    RunTrace t = gd ? run_gd(p, x0, sc) : run_pgd(p, ref, x0, sc);
    CompareRow row;
    row.gamma = sc.gamma;
    row.solver = gd ? "gd" : "pgd";
    row.outcome = t.termination == Termination::Tolerance        ? Outcome::Converged
                  : t.termination == Termination::NonfiniteValue ? Outcome::Diverged
                                                                 : Outcome::Budget;
    row.iterations = t.iterations;
    row.final_f = t.rows.back().f;
    res.rows[i] = row;
    res.traces[i] = std::move(t);
  });
  for (const auto& r : res.rows) {
    if (r.outcome != Outcome::Converged) continue;
    auto& slot = r.solver == "gd" ? res.largest_gd : res.largest_pgd;
    if (!slot || r.gamma > *slot) slot = r.gamma;
  }
  return res;
}

json cmd_compare(const ExperimentConfig& cfg, const std::string& out_dir, int threads) {
  const CompareResult res = bench_compare(cfg, threads);
  const fs::path dir(out_dir);
  std::ostringstream table;
  table << "gamma,solver,outcome,iterations,final_f\n";
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto& r = res.rows[i];
    table << format_double(r.gamma) << ',' << r.solver << ',' << outcome_name(r.outcome) << ','
          << r.iterations << ',' << format_double(r.final_f) << '\n';
    if (cfg.compare->record_paths) {
      char name[32];
      std::snprintf(name, sizeof name, "%s_%03zu.csv", r.solver.c_str(), i / 2);
      write_file_atomic(join(dir / "paths", name), path_csv(res.traces[i]));
    }
  }
  write_file_atomic(join(dir, "compare.csv"), table.str());
  json summary;
  summary["kernel"] = std::string(cfg.kernel.name());
  summary["largest_converging_gd"] = res.largest_gd ? json(*res.largest_gd) : json(nullptr);
  summary["largest_converging_pgd"] = res.largest_pgd ? json(*res.largest_pgd) : json(nullptr);
  if (res.largest_gd && res.largest_pgd) summary["ratio"] = *res.largest_pgd / *res.largest_gd;
  summary["rows"] = res.rows.size();
  write_file_atomic(join(dir, "summary.json"), summary.dump(2) + "\n");
  return summary;
}

// ---------------------------------------------------------------------------
// escape

long escape_budget(const EscapeSpec& spec, long n, double L) {
  if (spec.budget) return *spec.budget;
  return std::lround(spec.budget_per_unit * static_cast<double>(n) * (1.0 + L));
}

EscapeResult bench_escape(const EscapeSpec& spec, int threads) {
  static const char* kSolvers[] = {"gd", "perturbed_gd", "perturbed_pgd"};
  const auto kernel = kernel_from_name(spec.kernel);
  if (!kernel) throw ConfigError("escape: unknown kernel '" + spec.kernel + "'");

  struct Task {
    std::size_t cell;
    int solver;
    std::uint64_t seed;
  };
  std::vector<std::pair<long, double>> grid;
  for (long n : spec.dims)
    for (double L : spec.Ls) grid.emplace_back(n, L);
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < grid.size(); ++c)
    for (int s = 0; s < 3; ++s)
      for (int k = 0; k < spec.seeds; ++k) tasks.push_back({c, s, spec.seed_base + static_cast<std::uint64_t>(k)});

  EscapeResult res;
  res.runs.resize(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t i) {
    const Task& t = tasks[i];
    const auto [n, L] = grid[t.cell];
    OctopusParams op;
    op.dim = n;
    op.L = L;
    op.gamma = spec.octopus_gamma;
    op.tau = spec.tau;
    const Problem p = octopus(op);

    // Stepsize, radius and thresholds of the reference GD experiments.
    const double eta = 1.0 / (4.0 * L);
    const double radius = std::exp(1.0) / 100.0;
    const double g_thres = op.gamma * std::exp(1.0) / 100.0;
    const double t_thres = 1.0;

    CounterRng init(t.seed ^ 0xA5A5A5A5A5A5A5A5ULL);
    const Vec x0 = init.uniform_vector(n, -1.0, 1.0);
    CounterRng rng(t.seed);
    EscapeRun run;
    run.solver = kSolvers[t.solver];
    run.n = n;
    run.L = L;
    run.seed = t.seed;
    run.budget = escape_budget(spec, n, L);
    PerturbedOptions po{run.budget, octopus_escape_threshold(op), false};
    RunTrace trace;
    if (t.solver == 0) {
      SolverConfig sc;
      sc.gamma = eta;
      sc.max_iters = run.budget;
      sc.target_value = po.target_value;
      trace = run_gd(p, x0, sc);
    } else if (t.solver == 1) {
      trace = run_perturbed_gd(p, x0, {eta, radius, g_thres, t_thres}, po, rng);
    } else {
      PerturbSchedule s;
      s.gamma = eta;
      s.lambda = 1.0 / spec.Lbar;
      s.radius_r = radius;
      s.time_T = t_thres;
      s.tol_G = std::min(1.0, 1.0 / std::sqrt(s.lambda)) * radius;
      s.n = static_cast<double>(n);
      run.schedule = s;
      trace = run_perturbed_pgd(p, ReferenceFunction(*kernel, n), x0, s, po, rng);
    }
    run.termination = trace.termination;
    run.iterations = trace.iterations;
    run.events = std::move(trace.events);
    res.runs[i] = std::move(run);
  });

  for (std::size_t c = 0; c < grid.size(); ++c) {
    for (int s = 0; s < 3; ++s) {
      EscapeCell cell;
      cell.solver = kSolvers[s];
      cell.n = grid[c].first;
      cell.L = grid[c].second;
      cell.budget = escape_budget(spec, cell.n, cell.L);
      std::vector<long> iters;
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (tasks[i].cell != c || tasks[i].solver != s) continue;
        ++cell.seeds;
        if (res.runs[i].termination == Termination::Target) ++cell.escaped;
        iters.push_back(res.runs[i].iterations);
      }
      cell.median_iterations = median(iters);
      res.cells.push_back(cell);
    }
  }
  return res;
}

json cmd_escape(const ExperimentConfig& cfg, const std::string& out_dir, int threads) {
  const EscapeSpec spec = cfg.escape.value_or(EscapeSpec{});
  const EscapeResult res = bench_escape(spec, threads);
  const fs::path dir(out_dir);
  std::ostringstream cells, runs;
  cells << "solver,n,L,budget,seeds,escaped,median_iterations\n";
  for (const auto& c : res.cells) {
    cells << c.solver << ',' << c.n << ',' << format_double(c.L) << ',' << c.budget << ',' << c.seeds << ','
          << c.escaped << ',' << format_double(c.median_iterations) << '\n';
  }
  runs << "solver,n,L,seed,termination,iterations,perturbations\n";
  for (const auto& r : res.runs) {
    runs << r.solver << ',' << r.n << ',' << format_double(r.L) << ',' << r.seed << ','
         << termination_name(r.termination) << ',' << r.iterations << ',' << r.events.size() << '\n';
  }
  write_file_atomic(join(dir, "escape.csv"), cells.str());
  write_file_atomic(join(dir, "escape_runs.csv"), runs.str());
  json summary = json::array();
  for (const auto& c : res.cells) {
    summary.push_back({{"solver", c.solver},
                       {"n", c.n},
                       {"L", c.L},
                       {"budget", c.budget},
                       {"seeds", c.seeds},
                       {"escaped", c.escaped},
                       {"median_iterations", c.median_iterations}});
  }
  json out = {{"cells", summary}};
  write_file_atomic(join(dir, "summary.json"), out.dump(2) + "\n");
  return out;
}

// ---------------------------------------------------------------------------
// certify

CertifyEntry certify_problem(const Problem& p, const Kernel& kernel, const CertifySpec& spec) {
  CertifyEntry e;
  e.name = p.name;
  const RayScan scan = RayScan::make(p, spec.scan);
  const ReferenceFunction ref(kernel, p.dim);

  e.l0 = l0_for_l1(p, spec.L1, scan);
  {
    std::ostringstream os;
    if (e.l0.divergent) {
      os << "l0l1: DIVERGES (direction " << format_vec(e.l0.worst_direction_vec) << ")";
    } else {
      os << "l0l1: STABLE (L0 = " << e.l0.l0 << " for L1 = " << spec.L1 << ")";
    }
    e.lines.push_back(os.str());
  }

  ScanSpec inner = spec.scan;
  inner.r_max = std::min(spec.scan.r_max, spec.second_order_r_max);
  inner.r_min = std::min(inner.r_min, inner.r_max);
  e.empirical_L = second_order_char(p, ref, spec.Lbar, RayScan::make(p, inner));
  {
    std::ostringstream os;
    os << "empirical L <= " << e.empirical_L << " (Lbar = " << spec.Lbar << ", kernel " << kernel.name()
       << ", ||x|| <= " << inner.r_max << ")";
    e.lines.push_back(os.str());
  }

  if (p.envelope && !p.envelope_expected_to_fail) {
    e.envelope = envelope_check(p, *p.envelope, scan);
    std::ostringstream os;
    if (e.envelope->pass) {
      os << "envelope: PASS (" << e.envelope->samples << " samples)";
    } else {
      os << "envelope: FAIL (" << e.envelope->violated << " bound at r = " << e.envelope->radius << ")";
    }
    e.lines.push_back(os.str());
  } else {
    e.lines.push_back(p.envelope_expected_to_fail ? "envelope: SKIPPED (known to fail for this instance)"
                                                  : "envelope: SKIPPED (no envelope)");
  }

  e.h_lambda = h_lambda_bound_scan(p, ref, spec.Lbar, scan);
  {
    std::ostringstream os;
    os << "h_lambda tail: " << (e.h_lambda.decreasing ? "DECREASING" : "NOT DECREASING") << " (head "
       << e.h_lambda.head << ", tail " << e.h_lambda.tail
       << (e.h_lambda.nonfinite ? ", non-finite samples skipped" : "") << ")";
    e.lines.push_back(os.str());
  }

  CounterRng rng(spec.scan.seed);
  e.fd = fd_check(p, spec.fd_points, rng);
  e.lines.push_back(std::string("derivatives: ") + (e.fd.pass ? "PASS" : "FAIL"));
  return e;
}

std::vector<CertifyEntry> bench_certify(const ExperimentConfig& cfg, int threads) {
  std::vector<json> specs = cfg.problems;
  if (cfg.problem) specs.insert(specs.begin(), *cfg.problem);
  if (specs.empty()) throw ConfigError("config: certify needs \"problem\" or \"problems\"");
  const CertifySpec spec = cfg.certify.value_or(CertifySpec{});
  std::vector<CertifyEntry> out(specs.size());
  parallel_for(specs.size(), threads, [&](std::size_t i) {
    out[i] = certify_problem(build_problem(specs[i]), cfg.kernel, spec);
  });
  return out;
}

json cmd_certify(const ExperimentConfig& cfg, const std::string& out_dir, int threads) {
  const auto entries = bench_certify(cfg, threads);
  const fs::path dir(out_dir);
  json report = json::array();
  std::ostringstream text;
  for (const auto& e : entries) {
    json j;
    j["problem"] = e.name;
    j["l0l1"] = to_json(e.l0);
    j["empirical_L"] = e.empirical_L;
    j["envelope"] = e.envelope ? to_json(*e.envelope) : json(nullptr);
    j["h_lambda"] = to_json(e.h_lambda);
    j["fd"] = to_json(e.fd);
    j["verdicts"] = e.lines;
    report.push_back(j);
    text << e.name << '\n';
    for (const auto& l : e.lines) {
      const auto colon = l.find(": ");
      if (colon == std::string::npos) {
        text << "  " << l << '\n';
        continue;
      }
      std::string key = l.substr(0, colon + 1);
      key.resize(std::max<std::size_t>(key.size(), 16), ' ');
      text << "  " << key << l.substr(colon + 2) << '\n';
    }
  }
  write_file_atomic(join(dir, "certify.json"), report.dump(2) + "\n");
  write_file_atomic(join(dir, "certify.txt"), text.str());
  return report;
}

// ---------------------------------------------------------------------------
// params

json cmd_params(const ExperimentConfig& cfg, std::vector<std::string>* warnings) {
  if (!cfg.params) throw ConfigError("config: params needs a \"params\" block");
  const ParamsSpec& ps = *cfg.params;
  long n = 0;
  if (ps.n) {
    n = *ps.n;
  } else if (cfg.problem) {
    n = build_problem(*cfg.problem).dim;
  } else {
    throw ConfigError("config: params.n is required when no problem is given");
  }
  if (warnings && epsilon_too_large(ps.L, ps.rho, ps.eps)) {
    warnings->push_back("eps exceeds L^2/rho; the escape analysis assumes smaller eps");
  }
  return schedule_to_json(derive_params(ps.L, ps.Lbar, ps.rho, ps.eps, ps.delta, ps.delta_f, n, ps.c));
}

}  // namespace aniso
