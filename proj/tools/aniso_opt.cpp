// aniso-opt: command-line front end for runs, comparisons, escape studies,
// smoothness certification and parameter derivation.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aniso/bench.hpp"
#include "aniso/errors.hpp"

namespace {

struct Common {
  std::string config;
  std::string out;
  std::vector<std::uint64_t> seeds;
  int threads = 0;
};

void add_common(CLI::App* sub, Common& c, bool config_required) {
  auto* opt = sub->add_option("--config", c.config, "JSON experiment config");
  if (config_required) opt->required();
  sub->add_option("--out", c.out, "output directory (overrides config \"output\")");
  sub->add_option("--seeds", c.seeds, "comma-separated seeds (overrides config \"seeds\")")->delimiter(',');
  sub->add_option("--threads", c.threads, "worker threads (default: ANISO_OPT_THREADS or all cores)");
}

aniso::ExperimentConfig load(const Common& c) {
  aniso::ExperimentConfig cfg = c.config.empty() ? aniso::ExperimentConfig{} : aniso::load_config_file(c.config);
  if (!c.seeds.empty()) cfg.seeds = c.seeds;
  if (!c.out.empty()) cfg.output = c.out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinearly preconditioned gradient methods: runs, comparisons and certificates"};
  app.require_subcommand(1);

  Common run_opts, compare_opts, escape_opts, certify_opts, params_opts;
  auto* run = app.add_subcommand("run", "run one solver per seed and write CSV traces");
  add_common(run, run_opts, true);
  auto* compare = app.add_subcommand("compare", "GD vs preconditioned GD over a stepsize grid");
  add_common(compare, compare_opts, true);
  auto* escape = app.add_subcommand("escape", "octopus saddle-escape study");
  add_common(escape, escape_opts, false);
  auto* certify = app.add_subcommand("certify", "smoothness certificates for problems");
  add_common(certify, certify_opts, true);
  auto* params = app.add_subcommand("params", "derive the perturbation schedule");
  add_common(params, params_opts, false);

  std::optional<double> pL, pLbar, prho, peps, pdelta, pdelta_f, pc;
  std::optional<long> pn;
  params->add_option("--L", pL, "Lipschitz constant of the Hessian-like term");
  params->add_option("--Lbar", pLbar, "reference-function scale");
  params->add_option("--rho", prho, "Lipschitz constant of H_lambda");
  params->add_option("--eps", peps, "target accuracy");
  params->add_option("--delta", pdelta, "failure probability");
  params->add_option("--delta-f", pdelta_f, "initial suboptimality bound");
  params->add_option("--n", pn, "dimension");
  params->add_option("--c", pc, "schedule constant");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto cfg = load(run_opts);
      const auto summary = aniso::cmd_run(cfg, cfg.output, aniso::resolve_threads(run_opts.threads));
      for (const auto& r : summary["runs"]) {
        std::cout << "seed " << r["seed"] << ": " << r["termination"].get<std::string>() << " after "
                  << r["iterations"] << " iterations\n";
      }
    } else if (compare->parsed()) {
      const auto cfg = load(compare_opts);
      const auto s = aniso::cmd_compare(cfg, cfg.output, aniso::resolve_threads(compare_opts.threads));
      std::cout << "largest converging gamma: gd " << s["largest_converging_gd"] << ", pgd "
                << s["largest_converging_pgd"] << '\n';
    } else if (escape->parsed()) {
      const auto cfg = load(escape_opts);
      const auto s = aniso::cmd_escape(cfg, cfg.output, aniso::resolve_threads(escape_opts.threads));
      for (const auto& c : s["cells"]) {
        std::cout << c["solver"].get<std::string>() << " n=" << c["n"] << " L=" << c["L"] << ": "
                  << c["escaped"] << "/" << c["seeds"] << " escaped, median " << c["median_iterations"] << '\n';
      }
    } else if (certify->parsed()) {
      const auto cfg = load(certify_opts);
      const auto report = aniso::cmd_certify(cfg, cfg.output, aniso::resolve_threads(certify_opts.threads));
      for (const auto& e : report) {
        std::cout << e["problem"].get<std::string>() << '\n';
        for (const auto& l : e["verdicts"]) std::cout << "  " << l.get<std::string>() << '\n';
      }
    } else if (params->parsed()) {
      auto cfg = load(params_opts);
      aniso::ParamsSpec ps = cfg.params.value_or(aniso::ParamsSpec{});
      if (pL) ps.L = *pL;
      if (pLbar) ps.Lbar = *pLbar;
      if (prho) ps.rho = *prho;
      if (peps) ps.eps = *peps;
      if (pdelta) ps.delta = *pdelta;
      if (pdelta_f) ps.delta_f = *pdelta_f;
      if (pc) ps.c = *pc;
      if (pn) ps.n = *pn;
      cfg.params = ps;
      std::vector<std::string> warnings;
      const auto j = aniso::cmd_params(cfg, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
      std::cout << j.dump(2) << '\n';
    }
  } catch (const aniso::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const aniso::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
