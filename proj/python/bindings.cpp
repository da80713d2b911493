#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>

#include "aniso/bench.hpp"
#include "aniso/config.hpp"
#include "aniso/diagnostics.hpp"
#include "aniso/errors.hpp"
#include "aniso/precond.hpp"
#include "aniso/problems.hpp"
#include "aniso/saddle_escape.hpp"
#include "aniso/trace_io.hpp"

namespace py = pybind11;
using namespace aniso;

namespace {

Kernel kernel_arg(const std::string& name) {
  const auto k = kernel_from_name(name);
  if (!k) throw py::value_error("unknown kernel '" + name + "'");
  return *k;
}

// JSON crosses the boundary as text; the Python side wraps json.dumps/json.loads.
Problem problem_from_json(const std::string& text) { return build_problem(nlohmann::json::parse(text)); }

py::dict trace_dict(const RunTrace& t) {
  const std::size_t n = t.rows.size();
  py::array_t<long> iter(n);
  py::array_t<double> f(n), stat(n), step(n);
  py::array_t<bool> perturbed(n);
  auto it = iter.mutable_unchecked<1>();
  auto fv = f.mutable_unchecked<1>();
  auto sv = stat.mutable_unchecked<1>();
  auto st = step.mutable_unchecked<1>();
  auto pv = perturbed.mutable_unchecked<1>();
  for (std::size_t i = 0; i < n; ++i) {
    it(i) = t.rows[i].iter;
    fv(i) = t.rows[i].f;
    sv(i) = t.rows[i].stationarity;
    st(i) = t.rows[i].step_norm;
    pv(i) = t.rows[i].perturbed;
  }
  py::dict d;
  d["iter"] = iter;
  d["f"] = f;
  d["stationarity"] = stat;
  d["step_norm"] = step;
  d["perturbed"] = perturbed;
  d["termination"] = std::string(termination_name(t.termination));
  d["iterations"] = t.iterations;
  d["x"] = t.terminal_x;
  if (!t.path.empty()) {
    Mat path(static_cast<Eigen::Index>(t.path.size()), t.path.front().size());
    for (std::size_t k = 0; k < t.path.size(); ++k) path.row(static_cast<Eigen::Index>(k)) = t.path[k].transpose();
    d["path"] = path;
  }
  py::list events;
  for (const PerturbationEvent& e : t.events) {
    py::dict ev;
    ev["iter"] = e.iter;
    ev["f_before"] = e.f_before;
    ev["f_after"] = e.f_after;
    ev["stat_before"] = e.stat_before;
    ev["precond_norm_before"] = e.precond_norm_before;
    ev["xi_norm"] = e.xi_norm;
    events.append(ev);
  }
  d["events"] = events;
  return d;
}

SolverConfig solver_config(double gamma, double lambda, long max_iters, double stat_tol,
                           std::optional<double> target, bool record_path) {
  SolverConfig cfg;
  cfg.gamma = gamma;
  cfg.lambda = lambda;
  cfg.max_iters = max_iters;
  cfg.stat_tol = stat_tol;
  cfg.target_value = target;
  cfg.record_path = record_path;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Nonlinearly preconditioned gradient methods (C++ core)";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SpanningError>(m, "SpanningError", PyExc_ValueError);
  py::register_exception<NondifferentiableError>(m, "NondifferentiableError", PyExc_ValueError);

  m.def("kernel_names", [] {
    std::vector<std::string> out;
    for (auto k : {KernelKind::Quadratic, KernelKind::Cosh, KernelKind::ExpAbs, KernelKind::LogBarrier,
                   KernelKind::HardClip}) {
      out.emplace_back(Kernel(k).name());
    }
    return out;
  });
  m.def("kernel_value", [](const std::string& k, double x) { return kernel_arg(k).value(x); });
  m.def("kernel_derivative", [](const std::string& k, double x) { return kernel_arg(k).derivative(x); });
  m.def("conj_prime", [](const std::string& k, double y) { return kernel_arg(k).conj_prime(y); });
  m.def("conj_second", [](const std::string& k, double y) { return kernel_arg(k).conj_second(y); });
  m.def("precondition", [](const std::string& k, const Vec& g) {
    return precondition(ReferenceFunction(kernel_arg(k), g.size()), g);
  });
  m.def("precondition_jacobian", [](const std::string& k, const Vec& g) {
    return precondition_jacobian(ReferenceFunction(kernel_arg(k), g.size()), g);
  });

  py::class_<Problem>(m, "Problem")
      .def_readonly("name", &Problem::name)
      .def_readonly("dim", &Problem::dim)
      .def_readonly("known_inf", &Problem::known_inf)
      .def("value", [](const Problem& p, const Vec& x) { return p.value(x); })
      .def("grad", [](const Problem& p, const Vec& x) { return p.grad(x); })
      .def("hess", [](const Problem& p, const Vec& x) { return p.hess(x); });
  m.def("_build_problem", &problem_from_json);
  m.def("octopus_escape_threshold", [](long dim, double L, double gamma, double tau) {
    return octopus_escape_threshold({dim, L, gamma, tau});
  });

  m.def("run_pgd",
        [](const Problem& p, const std::string& k, const Vec& x0, double gamma, double lambda, long max_iters,
           double stat_tol, std::optional<double> target, bool record_path) {
          const SolverConfig cfg = solver_config(gamma, lambda, max_iters, stat_tol, target, record_path);
          return trace_dict(run_pgd(p, ReferenceFunction(kernel_arg(k), p.dim), x0, cfg));
        },
        py::arg("problem"), py::arg("kernel"), py::arg("x0"), py::arg("gamma"), py::arg("lam") = 1.0,
        py::arg("max_iters") = 1000, py::arg("stat_tol") = 0.0, py::arg("target") = py::none(),
        py::arg("record_path") = false);
  m.def("run_gd",
        [](const Problem& p, const Vec& x0, double gamma, long max_iters, double stat_tol,
           std::optional<double> target, bool record_path) {
          return trace_dict(run_gd(p, x0, solver_config(gamma, 1.0, max_iters, stat_tol, target, record_path)));
        },
        py::arg("problem"), py::arg("x0"), py::arg("gamma"), py::arg("max_iters") = 1000, py::arg("stat_tol") = 0.0,
        py::arg("target") = py::none(), py::arg("record_path") = false);
  m.def("run_clipped",
        [](const Problem& p, const Vec& x0, double gamma, double lambda, long max_iters, double stat_tol,
           bool record_path) {
          return trace_dict(
              run_clipped(p, x0, solver_config(gamma, lambda, max_iters, stat_tol, std::nullopt, record_path)));
        },
        py::arg("problem"), py::arg("x0"), py::arg("gamma"), py::arg("lam") = 1.0, py::arg("max_iters") = 1000,
        py::arg("stat_tol") = 0.0, py::arg("record_path") = false);
  m.def("run_perturbed_pgd",
        [](const Problem& p, const std::string& k, const Vec& x0, const std::string& schedule_json, long max_iters,
           std::optional<double> target, std::uint64_t seed, bool record_path) {
          const PerturbSchedule s = resolve_schedule(nlohmann::json::parse(schedule_json), p);
          CounterRng rng(seed);
          return trace_dict(run_perturbed_pgd(p, ReferenceFunction(kernel_arg(k), p.dim), x0, s,
                                              {max_iters, target, record_path}, rng));
        },
        py::arg("problem"), py::arg("kernel"), py::arg("x0"), py::arg("schedule"), py::arg("max_iters") = 1000,
        py::arg("target") = py::none(), py::arg("seed") = 0, py::arg("record_path") = false);

  m.def("_derive_params",
        [](double L, double Lbar, double rho, double eps, double delta, double delta_f, long n, double c) {
          return schedule_to_json(derive_params(L, Lbar, rho, eps, delta, delta_f, n, c)).dump();
        });
  m.def("h_lambda", [](const Problem& p, const std::string& k, const Vec& x, double lambda) {
    return h_lambda(p, ReferenceFunction(kernel_arg(k), p.dim), x, lambda);
  });
  m.def("h_lambda_eigenvalues", [](const Problem& p, const std::string& k, const Vec& x, double lambda) {
    return h_lambda_eigenvalues(p, ReferenceFunction(kernel_arg(k), p.dim), x, lambda);
  });
  m.def("estimate_rho",
        [](const Problem& p, const std::string& k, double lambda, double radius, int samples, std::uint64_t seed) {
          CounterRng rng(seed);
          return estimate_rho(p, ReferenceFunction(kernel_arg(k), p.dim), lambda, radius, samples, rng);
        },
        py::arg("problem"), py::arg("kernel"), py::arg("lam"), py::arg("radius"), py::arg("samples") = 200,
        py::arg("seed") = 0);
  m.def("sample_ball", [](long n, double radius, std::uint64_t seed, long count) {
    CounterRng rng(seed);
    Mat out(count, n);
    for (long i = 0; i < count; ++i) out.row(i) = sample_ball(n, radius, rng).transpose();
    return out;
  });

  m.def("second_order_char", [](const Problem& p, const std::string& k, double Lbar, double r_max) {
    ScanSpec scan;
    scan.r_max = r_max;
    return second_order_char(p, ReferenceFunction(kernel_arg(k), p.dim), Lbar, RayScan::make(p, scan));
  });
  m.def("certify", [](const Problem& p, const std::string& k, double L1, double Lbar) {
    CertifySpec spec;
    spec.L1 = L1;
    spec.Lbar = Lbar;
    return certify_problem(p, kernel_arg(k), spec).lines;
  });

  m.def("_validate_config", [](const std::string& text) { load_config(text); });
  m.def("_run_command",
        [](const std::string& command, const std::string& text, const std::string& out_dir, int threads) {
          const ExperimentConfig cfg = load_config(text);
          const int workers = resolve_threads(threads);
          py::gil_scoped_release release;
          nlohmann::json j;
          if (command == "run") {
            j = cmd_run(cfg, out_dir, workers);
          } else if (command == "compare") {
            j = cmd_compare(cfg, out_dir, workers);
          } else if (command == "escape") {
            j = cmd_escape(cfg, out_dir, workers);
          } else if (command == "certify") {
            j = cmd_certify(cfg, out_dir, workers);
          } else if (command == "params") {
            j = cmd_params(cfg, nullptr);
          } else {
            throw std::invalid_argument("unknown command '" + command + "'");
          }
          return j.dump();
        });
}
