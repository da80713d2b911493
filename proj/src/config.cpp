#include "aniso/config.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "aniso/errors.hpp"
#include "aniso/problems.hpp"
#include "aniso/trace_io.hpp"

namespace aniso {

using nlohmann::json;

std::string_view solver_name(SolverKind s) {
  switch (s) {
    case SolverKind::Pgd:
      return "pgd";
    case SolverKind::PerturbedPgd:
      return "perturbed_pgd";
    case SolverKind::Gd:
      return "gd";
    case SolverKind::Clipped:
      return "clipped";
    case SolverKind::PerturbedGd:
      return "perturbed_gd";
  }
  return "unknown";
}

namespace {

int line_at(const std::string& text, std::size_t offset) {
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + std::min(offset, text.size()), '\n'));
}

// Walks a JSON object while remembering where in the source text it starts,
// so that errors can point at the line of the offending key.
class Node {
 public:
  Node(const json& j, const std::string* text, std::size_t from, std::string path)
      : j_(j), text_(text), from_(from), path_(std::move(path)) {}

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }
  bool has(const char* key) const { return j_.contains(key); }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    // A missing key is reported at the object that should have held it.
    std::size_t at = locate(key);
    if (at == std::string::npos && text_) at = from_;
    const int line = at == std::string::npos ? 0 : line_at(*text_, at);
    std::string where = path_.empty() ? key : (key.empty() ? path_ : path_ + "." + key);
    std::string prefix = line > 0 ? "line " + std::to_string(line) + ": " : "";
    throw ConfigError(prefix + where + ": " + msg, line);
  }

  void require_object() const {
    if (!j_.is_object()) fail("", "expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    require_object();
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!ok.count(it.key())) fail(it.key(), "unknown field");
    }
  }

  Node child(const char* key) const {
    const std::size_t at = locate(key);
    return Node(j_.at(key), text_, at == std::string::npos ? from_ : at,
                path_.empty() ? key : path_ + "." + key);
  }

  Node element(std::size_t i) const {
    return Node(j_.at(i), text_, from_, path_ + "[" + std::to_string(i) + "]");
  }

  double number(const char* key) const {
    if (!has(key)) fail(key, "missing required field");
    if (!j_[key].is_number()) fail(key, "expected a number");
    return j_[key].get<double>();
  }
  double number(const char* key, double dflt) const { return has(key) ? number(key) : dflt; }

  double positive(const char* key) const {
    const double v = number(key);
    if (!(v > 0.0)) fail(key, "must be positive");
    return v;
  }
  double positive(const char* key, double dflt) const { return has(key) ? positive(key) : dflt; }

  long integer(const char* key) const {
    if (!has(key)) fail(key, "missing required field");
    if (!j_[key].is_number_integer()) fail(key, "expected an integer");
    return j_[key].get<long>();
  }
  long integer(const char* key, long dflt) const { return has(key) ? integer(key) : dflt; }

  long count(const char* key) const {
    const long v = integer(key);
    if (v < 1) fail(key, "must be at least 1");
    return v;
  }
  long count(const char* key, long dflt) const { return has(key) ? count(key) : dflt; }

  std::string string(const char* key) const {
    if (!has(key)) fail(key, "missing required field");
    if (!j_[key].is_string()) fail(key, "expected a string");
    return j_[key].get<std::string>();
  }

  bool boolean(const char* key, bool dflt) const {
    if (!has(key)) return dflt;
    if (!j_[key].is_boolean()) fail(key, "expected true or false");
    return j_[key].get<bool>();
  }

  Vec vector(const char* key) const {
    if (!has(key)) fail(key, "missing required field");
    const json& a = j_[key];
    if (!a.is_array() || a.empty()) fail(key, "expected a nonempty array of numbers");
    Vec v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!a[i].is_number()) fail(key, "expected a nonempty array of numbers");
      v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    }
    return v;
  }

  Mat matrix(const char* key) const {
    if (!has(key)) fail(key, "missing required field");
    const json& a = j_[key];
    if (!a.is_array() || a.empty() || !a[0].is_array() || a[0].empty()) {
      fail(key, "expected a nonempty array of rows");
    }
    const std::size_t rows = a.size(), cols = a[0].size();
    Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
      if (!a[i].is_array() || a[i].size() != cols) fail(key, "rows must have equal length");
      for (std::size_t k = 0; k < cols; ++k) {
        if (!a[i][k].is_number()) fail(key, "matrix entries must be numbers");
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = a[i][k].get<double>();
      }
    }
    return m;
  }

  std::uint64_t seed(const char* key, std::uint64_t dflt) const {
    if (!has(key)) return dflt;
    if (!j_[key].is_number_unsigned() && !(j_[key].is_number_integer() && j_[key].get<long>() >= 0)) {
      fail(key, "expected a nonnegative integer");
    }
    return j_[key].get<std::uint64_t>();
  }

 private:
  std::size_t locate(const std::string& key) const {
    if (!text_ || key.empty()) return key.empty() && text_ ? from_ : std::string::npos;
    const std::regex pat("\"" + std::regex_replace(key, std::regex(R"([.^$|()\[\]{}*+?\\])"), R"(\$&)") +
                         "\"\\s*:");
    std::smatch m;
    auto begin = text_->cbegin() + static_cast<std::ptrdiff_t>(std::min(from_, text_->size()));
    if (std::regex_search(begin, text_->cend(), m, pat)) {
      return static_cast<std::size_t>(m.position(0)) + (begin - text_->cbegin());
    }
    return std::string::npos;
  }

  const json& j_;
  const std::string* text_;
  std::size_t from_;
  std::string path_;
};

Problem build_problem_node(const Node& n) {
  n.require_object();
  const std::string kind = n.string("problem");
  const bool random = n.has("random");

  auto random_node = [&]() { return n.child("random"); };

  if (kind == "phase_retrieval") {
    n.allow({"problem", "A", "y", "random", "spanning"});
    PhaseRetrievalData d;
    if (random) {
      const Node r = random_node();
      r.allow({"n", "m", "seed"});
      CounterRng rng(r.seed("seed", 0));
      d = random_phase_retrieval(r.count("n"), r.count("m"), rng);
    } else {
      d.A = n.matrix("A");
      d.y = n.vector("y");
      if (d.y.size() != d.A.rows()) n.fail("y", "length must equal the number of rows of A");
    }
    try {
      return phase_retrieval(d, n.boolean("spanning", true));
    } catch (const SpanningError& e) {
      n.fail(random ? "random" : "A", e.what());
    }
  }
  if (kind == "sym_mf") {
    n.allow({"problem", "Y", "rank", "random"});
    MatrixFactorizationData d;
    d.rank_r = n.count("rank", 1);
    if (random) {
      const Node r = random_node();
      r.allow({"n", "seed", "scale"});
      CounterRng rng(r.seed("seed", 0));
      const Mat G = rng.normal_matrix(r.count("n"), r.count("n"));
      d.Y = r.positive("scale", 1.0) * G * G.transpose() / static_cast<double>(G.rows());
    } else {
      d.Y = n.matrix("Y");
      if (d.Y.rows() != d.Y.cols() || !d.Y.isApprox(d.Y.transpose(), 1e-12)) {
        n.fail("Y", "must be square and symmetric");
      }
    }
    return sym_mf(d);
  }
  if (kind == "asym_mf") {
    n.allow({"problem", "Y", "rank", "kappa", "random"});
    MatrixFactorizationData d;
    d.rank_r = n.count("rank", 1);
    d.kappa = n.number("kappa", 0.0);
    if (d.kappa < 0.0) n.fail("kappa", "must be nonnegative");
    if (random) {
      const Node r = random_node();
      r.allow({"m", "n", "seed"});
      CounterRng rng(r.seed("seed", 0));
      d.Y = rng.normal_matrix(r.count("m"), r.count("n"));
    } else {
      d.Y = n.matrix("Y");
    }
    return asym_mf(d);
  }
  if (kind == "burer_monteiro") {
    n.allow({"problem", "C", "rank", "beta", "multipliers", "random"});
    BurerMonteiroData d;
    const long rank = n.count("rank", 1);
    const double beta = n.positive("beta", 1.0);
    if (random) {
      const Node r = random_node();
      r.allow({"n", "seed"});
      CounterRng rng(r.seed("seed", 0));
      d = random_burer_monteiro(r.count("n"), rank, beta, rng);
    } else {
      d.C = n.matrix("C");
      if (d.C.rows() != d.C.cols() || !d.C.isApprox(d.C.transpose(), 1e-12)) {
        n.fail("C", "must be square and symmetric");
      }
      d.rank_r = rank;
      d.beta = beta;
      d.multipliers = Vec::Zero(d.C.rows());
    }
    if (n.has("multipliers")) {
      d.multipliers = n.vector("multipliers");
      if (d.multipliers.size() != d.C.rows()) n.fail("multipliers", "length must equal n");
    }
    return burer_monteiro_alm(d);
  }
  if (kind == "octopus") {
    n.allow({"problem", "dim", "L", "gamma", "tau"});
    OctopusParams op;
    op.dim = n.count("dim", 5);
    if (op.dim < 2) n.fail("dim", "must be at least 2");
    op.L = n.positive("L", 1.0);
    op.gamma = n.positive("gamma", 1.0);
    op.tau = n.positive("tau", op.tau);
    return octopus(op);
  }
  if (random) n.fail("random", "random instances are not available for '" + kind + "'");
  if (kind == "quartic1d" || kind == "f1" || kind == "f2" || kind == "f3") {
    n.allow({"problem"});
    if (kind == "quartic1d") return quartic_1d();
    if (kind == "f1") return quartic_f1();
    if (kind == "f2") return quartic_f2();
    return quartic_f3();
  }
  if (kind == "exp_sq" || kind == "exp_sq_minus") {
    n.allow({"problem", "dim"});
    const long dim = n.count("dim", 2);
    return kind == "exp_sq" ? exp_sq(dim) : exp_sq_minus(dim);
  }
  if (kind == "polynomial") {
    n.allow({"problem", "coeffs"});
    const Vec c = n.vector("coeffs");
    try {
      return univariate_polynomial(std::vector<double>(c.data(), c.data() + c.size()));
    } catch (const ParameterError& e) {
      n.fail("coeffs", e.what());
    }
  }
  if (kind == "quadratic") {
    n.allow({"problem", "Q", "b"});
    const Mat Q = n.matrix("Q");
    const Vec b = n.has("b") ? n.vector("b") : Vec::Zero(Q.rows());
    if (Q.rows() != Q.cols() || Q.rows() != b.size()) n.fail("Q", "must be square and match b");
    return quadratic(Q, b);
  }
  if (kind == "affine") {
    n.allow({"problem", "b", "c"});
    return affine(n.vector("b"), n.number("c", 0.0));
  }
  n.fail("problem", "unknown problem '" + kind + "'");
}

ScanSpec parse_scan(const Node& n, ScanSpec s) {
  n.allow({"r_min", "r_max", "per_decade", "random_directions", "include_axes", "seed"});
  s.r_min = n.positive("r_min", s.r_min);
  s.r_max = n.positive("r_max", s.r_max);
  if (s.r_max < s.r_min) n.fail("r_max", "must be at least r_min");
  s.per_decade = static_cast<int>(n.count("per_decade", s.per_decade));
  s.random_directions = static_cast<int>(n.integer("random_directions", s.random_directions));
  if (s.random_directions < 0) n.fail("random_directions", "must be nonnegative");
  s.include_axes = n.boolean("include_axes", s.include_axes);
  s.seed = n.seed("seed", s.seed);
  return s;
}

std::vector<double> parse_gamma_grid(const Node& parent) {
  const json& g = parent.raw()["gammas"];
  if (g.is_array()) {
    const Vec v = parent.vector("gammas");
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (!(v[i] > 0.0)) parent.fail("gammas", "stepsizes must be positive");
    }
    return {v.data(), v.data() + v.size()};
  }
  const Node n = parent.child("gammas");
  n.allow({"min", "max", "per_decade"});
  const double lo = n.positive("min"), hi = n.positive("max");
  if (hi < lo) n.fail("max", "must be at least min");
  return RayScan::geometric_radii(lo, hi, static_cast<int>(n.count("per_decade", 4)));
}

ExperimentConfig parse_root(const Node& root) {
  root.allow({"description", "problem", "problems", "kernel", "solver", "gamma", "lambda", "max_iters",
              "stat_tol", "target_value", "record_path", "x0", "init", "schedule", "perturbed_gd",
              "seeds", "output", "compare", "escape", "certify", "params"});
  ExperimentConfig cfg;
  if (root.has("description") && !root.raw()["description"].is_string()) {
    root.fail("description", "expected a string");
  }
  if (root.has("problem")) {
    build_problem_node(root.child("problem"));
    cfg.problem = root.raw()["problem"];
  }
  if (root.has("problems")) {
    const json& arr = root.raw()["problems"];
    if (!arr.is_array() || arr.empty()) root.fail("problems", "expected a nonempty array");
    const Node list = root.child("problems");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      build_problem_node(list.element(i));
      cfg.problems.push_back(arr[i]);
    }
  }
  if (root.has("kernel")) {
    const auto k = kernel_from_name(root.string("kernel"));
    if (!k) root.fail("kernel", "expected one of quadratic, cosh, expabs, logbarrier, hardclip");
    cfg.kernel = *k;
  }
  if (root.has("solver")) {
    const std::string s = root.string("solver");
    bool found = false;
    for (auto kind : {SolverKind::Pgd, SolverKind::PerturbedPgd, SolverKind::Gd, SolverKind::Clipped,
                      SolverKind::PerturbedGd}) {
      if (solver_name(kind) == s) {
        cfg.solver = kind;
        found = true;
      }
    }
    if (!found) root.fail("solver", "expected one of pgd, perturbed_pgd, gd, clipped, perturbed_gd");
  }
  cfg.solver_cfg.gamma = root.positive("gamma", 1.0);
  cfg.solver_cfg.lambda = root.positive("lambda", 1.0);
  cfg.solver_cfg.max_iters = root.integer("max_iters", 1000);
  if (cfg.solver_cfg.max_iters < 0) root.fail("max_iters", "must be nonnegative");
  if (root.has("stat_tol")) {
    if (root.raw()["stat_tol"].is_string() && root.raw()["stat_tol"] == "inf") {
      cfg.solver_cfg.stat_tol = std::numeric_limits<double>::infinity();
    } else {
      cfg.solver_cfg.stat_tol = root.number("stat_tol");
      if (cfg.solver_cfg.stat_tol < 0.0) root.fail("stat_tol", "must be nonnegative");
    }
  }
  if (root.has("target_value")) cfg.solver_cfg.target_value = root.number("target_value");
  cfg.solver_cfg.record_path = root.boolean("record_path", false);
  if (root.has("x0")) cfg.x0 = root.vector("x0");
  if (root.has("init")) {
    const Node n = root.child("init");
    n.allow({"uniform", "normal", "ball"});
    if (n.raw().size() != 1) n.fail("", "specify exactly one of uniform, normal, ball");
    if (n.has("uniform")) {
      const Vec box = n.vector("uniform");
      if (box.size() != 2 || !(box[0] < box[1])) n.fail("uniform", "expected [lo, hi] with lo < hi");
      cfg.init.kind = InitSpec::Kind::Uniform;
      cfg.init.lo = box[0];
      cfg.init.hi = box[1];
    } else if (n.has("normal")) {
      cfg.init.kind = InitSpec::Kind::Normal;
      cfg.init.scale = n.positive("normal");
    } else {
      cfg.init.kind = InitSpec::Kind::Ball;
      cfg.init.scale = n.positive("ball");
    }
  }
  if (root.has("schedule")) {
    const Node n = root.child("schedule");
    if (n.has("derive")) {
      n.allow({"derive"});
      const Node d = n.child("derive");
      d.allow({"L", "Lbar", "rho", "rho_estimate", "eps", "delta", "delta_f", "n", "c"});
      for (const char* k : {"L", "Lbar", "eps", "delta", "delta_f"}) d.positive(k);
      if (d.has("rho") == d.has("rho_estimate")) d.fail("rho", "give exactly one of rho, rho_estimate");
      if (d.has("rho")) d.positive("rho");
      if (d.has("rho_estimate")) {
        const Node r = d.child("rho_estimate");
        r.allow({"region_radius", "samples", "seed"});
        r.positive("region_radius");
        if (r.count("samples", 200) < 2) r.fail("samples", "must be at least 2");
        r.seed("seed", 0);
      }
      if (d.has("n")) d.count("n");
      if (d.has("c")) d.positive("c");
    } else {
      n.allow({"gamma", "lambda", "radius_r", "time_T", "tol_G", "F_decrement", "Z_radius", "chi",
               "epsilon", "rho", "delta", "delta_f", "n", "c"});
      for (const char* k : {"gamma", "lambda", "time_T", "tol_G"}) n.positive(k);
      if (n.number("radius_r") < 0.0) n.fail("radius_r", "must be nonnegative");
      for (const char* k : {"F_decrement", "Z_radius", "chi", "epsilon", "rho", "delta", "delta_f", "n", "c"}) {
        if (n.has(k)) n.number(k);
      }
    }
    cfg.schedule = root.raw()["schedule"];
  }
  if (root.has("perturbed_gd")) {
    const Node n = root.child("perturbed_gd");
    n.allow({"eta", "radius", "g_thres", "t_thres"});
    PerturbedGdParams pg;
    pg.eta = n.positive("eta");
    pg.radius = n.number("radius");
    if (pg.radius < 0.0) n.fail("radius", "must be nonnegative");
    pg.g_thres = n.number("g_thres");
    pg.t_thres = n.number("t_thres");
    cfg.perturbed_gd = pg;
  }
  if (root.has("seeds")) {
    const json& s = root.raw()["seeds"];
    if (!s.is_array() || s.empty()) root.fail("seeds", "expected a nonempty array of integers");
    cfg.seeds.clear();
    for (const json& v : s) {
      if (!v.is_number_integer() || v.get<long long>() < 0) root.fail("seeds", "seeds must be nonnegative integers");
      cfg.seeds.push_back(v.get<std::uint64_t>());
    }
  }
  if (root.has("output")) cfg.output = root.string("output");

  if (root.has("compare")) {
    const Node n = root.child("compare");
    n.allow({"gammas", "max_iters", "stat_tol", "record_paths"});
    CompareSpec c;
    if (!n.has("gammas")) n.fail("gammas", "missing required field");
    c.gammas = parse_gamma_grid(n);
    c.max_iters = n.integer("max_iters", c.max_iters);
    if (c.max_iters < 0) n.fail("max_iters", "must be nonnegative");
    c.stat_tol = n.number("stat_tol", c.stat_tol);
    c.record_paths = n.boolean("record_paths", c.record_paths);
    cfg.compare = c;
  }
  if (root.has("escape")) {
    const Node n = root.child("escape");
    n.allow({"dims", "Ls", "seeds", "seed_base", "budget", "budget_per_unit", "Lbar", "kernel",
             "octopus_gamma", "tau"});
    EscapeSpec e;
    if (n.has("dims")) {
      const Vec d = n.vector("dims");
      e.dims.clear();
      for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (d[i] < 2 || d[i] != std::floor(d[i])) n.fail("dims", "dimensions must be integers >= 2");
        e.dims.push_back(static_cast<long>(d[i]));
      }
    }
    if (n.has("Ls")) {
      const Vec l = n.vector("Ls");
      e.Ls.assign(l.data(), l.data() + l.size());
      for (double v : e.Ls) {
        if (!(v > 0.0)) n.fail("Ls", "must be positive");
      }
    }
    e.seeds = static_cast<int>(n.count("seeds", e.seeds));
    e.seed_base = n.seed("seed_base", e.seed_base);
    if (n.has("budget")) e.budget = n.count("budget");
    e.budget_per_unit = n.positive("budget_per_unit", e.budget_per_unit);
    e.Lbar = n.positive("Lbar", e.Lbar);
    if (n.has("kernel")) {
      e.kernel = n.string("kernel");
      if (!kernel_from_name(e.kernel)) n.fail("kernel", "unknown kernel");
    }
    e.octopus_gamma = n.positive("octopus_gamma", e.octopus_gamma);
    e.tau = n.positive("tau", e.tau);
    cfg.escape = e;
  }
  if (root.has("certify")) {
    const Node n = root.child("certify");
    n.allow({"L1", "Lbar", "scan", "second_order_r_max", "fd_points"});
    CertifySpec c;
    c.L1 = n.positive("L1", c.L1);
    c.Lbar = n.positive("Lbar", c.Lbar);
    if (n.has("scan")) c.scan = parse_scan(n.child("scan"), c.scan);
    c.second_order_r_max = n.positive("second_order_r_max", c.second_order_r_max);
    c.fd_points = static_cast<int>(n.integer("fd_points", c.fd_points));
    cfg.certify = c;
  }
  if (root.has("params")) {
    const Node n = root.child("params");
    n.allow({"L", "Lbar", "rho", "eps", "delta", "delta_f", "n", "c"});
    ParamsSpec p;
    p.L = n.positive("L");
    p.Lbar = n.positive("Lbar");
    p.rho = n.positive("rho");
    p.eps = n.positive("eps");
    p.delta = n.positive("delta");
    p.delta_f = n.positive("delta_f");
    if (n.has("n")) p.n = n.count("n");
    p.c = n.positive("c", p.c);
    cfg.params = p;
  }
  return cfg;
}

}  // namespace

ExperimentConfig load_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const int line = line_at(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError("line " + std::to_string(line) + ": JSON parse error: " + e.what(), line);
  }
  const Node root(j, &text, 0, "");
  return parse_root(root);
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str());
}

Problem build_problem(const json& spec) { return build_problem_node(Node(spec, nullptr, 0, "problem")); }

PerturbSchedule resolve_schedule(const json& spec, const Problem& p) {
  if (!spec.contains("derive")) {
    try {
      return schedule_from_json(spec);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  const json& d = spec["derive"];
  double rho;
  if (d.contains("rho")) {
    rho = d["rho"].get<double>();
  } else {
    const json& r = d["rho_estimate"];
    CounterRng rng(r.value("seed", std::uint64_t{0}));
    const ReferenceFunction ref(Kernel(KernelKind::Cosh), p.dim);
    rho = estimate_rho(p, ref, 1.0 / d["Lbar"].get<double>(), r["region_radius"].get<double>(),
                       r.value("samples", 200), rng);
    if (!(rho > 0.0)) throw ConfigError("schedule.derive.rho_estimate: estimated rho is zero");
  }
  return derive_params(d["L"].get<double>(), d["Lbar"].get<double>(), rho, d["eps"].get<double>(),
                       d["delta"].get<double>(), d["delta_f"].get<double>(),
                       d.value("n", static_cast<long>(p.dim)), d.value("c", 0x1.0p-39));
}

Vec initial_point(const ExperimentConfig& cfg, Eigen::Index dim, std::uint64_t seed) {
  if (cfg.x0) {
    if (cfg.x0->size() != dim) {
      throw ConfigError("x0 has length " + std::to_string(cfg.x0->size()) + " but the problem has dimension " +
                        std::to_string(dim));
    }
    return *cfg.x0;
  }
  // Offset keeps the init stream distinct from the solver stream of the same seed.
  CounterRng rng(seed ^ 0xA5A5A5A5A5A5A5A5ULL);
  switch (cfg.init.kind) {
    case InitSpec::Kind::Uniform:
      return rng.uniform_vector(dim, cfg.init.lo, cfg.init.hi);
    case InitSpec::Kind::Normal:
      return cfg.init.scale * rng.normal_vector(dim);
    case InitSpec::Kind::Ball:
      return sample_ball(dim, cfg.init.scale, rng);
  }
  return Vec::Zero(dim);
}

}  // namespace aniso
