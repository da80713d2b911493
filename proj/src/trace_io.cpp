#include "aniso/trace_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace aniso {

namespace {

constexpr const char* kTraceHeader = "iter,f,stationarity,step_norm,perturbed";

double parse_double(const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw std::runtime_error("trace csv: bad number '" + s + "'");
  return v;
}

// nlohmann::json serializes non-finite doubles as null; keep them readable.
nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& os, const RunTrace& trace) {
  os << kTraceHeader << '\n';
  for (const TraceRow& r : trace.rows) {
    os << r.iter << ',' << format_double(r.f) << ',' << format_double(r.stationarity) << ','
       << format_double(r.step_norm) << ',' << (r.perturbed ? 1 : 0) << '\n';
  }
}

RunTrace read_trace_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kTraceHeader) {
    throw std::runtime_error("trace csv: missing header");
  }
  RunTrace trace;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell[5];
    for (int i = 0; i < 5; ++i) {
      if (!std::getline(ss, cell[i], ',')) throw std::runtime_error("trace csv: short row");
    }
    TraceRow r;
    r.iter = std::stol(cell[0]);
    r.f = parse_double(cell[1]);
    r.stationarity = parse_double(cell[2]);
    r.step_norm = parse_double(cell[3]);
    r.perturbed = cell[4] == "1";
    trace.rows.push_back(r);
  }
  return trace;
}

void write_path_csv(std::ostream& os, const RunTrace& trace) {
  const Eigen::Index n = trace.path.empty() ? 0 : trace.path.front().size();
  os << "iter";
  for (Eigen::Index i = 0; i < n; ++i) os << ",x" << i;
  os << '\n';
  for (std::size_t k = 0; k < trace.path.size(); ++k) {
    os << trace.rows[k].iter;
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << format_double(trace.path[k][i]);
    os << '\n';
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

nlohmann::json schedule_to_json(const PerturbSchedule& s) {
  return {{"gamma", s.gamma},     {"lambda", s.lambda},
          {"radius_r", s.radius_r}, {"time_T", s.time_T},
          {"tol_G", s.tol_G},     {"F_decrement", s.F_decrement},
          {"Z_radius", s.Z_radius}, {"chi", s.chi},
          {"epsilon", s.epsilon}, {"rho", s.rho},
          {"delta", s.delta},     {"delta_f", s.delta_f},
          {"n", s.n},             {"c", s.c}};
}

PerturbSchedule schedule_from_json(const nlohmann::json& j) {
  PerturbSchedule s;
  auto req = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number()) {
      throw std::invalid_argument(std::string("schedule: missing numeric field '") + key + "'");
    }
    return j[key].get<double>();
  };
  auto opt = [&](const char* key) { return j.contains(key) ? j[key].get<double>() : 0.0; };
  s.gamma = req("gamma");
  s.lambda = req("lambda");
  s.radius_r = req("radius_r");
  s.time_T = req("time_T");
  s.tol_G = req("tol_G");
  s.F_decrement = opt("F_decrement");
  s.Z_radius = opt("Z_radius");
  s.chi = opt("chi");
  s.epsilon = opt("epsilon");
  s.rho = opt("rho");
  s.delta = opt("delta");
  s.delta_f = opt("delta_f");
  s.n = opt("n");
  s.c = opt("c");
  return s;
}

nlohmann::json trace_summary_json(const RunTrace& trace) {
  nlohmann::json j;
  j["termination"] = std::string(termination_name(trace.termination));
  j["iterations"] = trace.iterations;
  j["rows"] = trace.rows.size();
  j["stride"] = trace.stride;
  j["perturbations"] = trace.events.size();
  if (!trace.rows.empty()) {
    j["final_f"] = number(trace.rows.back().f);
    j["final_stationarity"] = number(trace.rows.back().stationarity);
  }
  return j;
}

nlohmann::json vec_to_json(const Vec& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
  return a;
}

nlohmann::json to_json(const L0Report& r) {
  nlohmann::json per = nlohmann::json::array();
  for (double v : r.per_direction) per.push_back(number(v));
  return {{"L1", r.l1},
          {"L0", number(r.l0)},
          {"L0_inner", number(r.l0_inner)},
          {"divergent", r.divergent},
          {"nonfinite", r.nonfinite},
          {"worst_direction", vec_to_json(r.worst_direction_vec)},
          {"per_direction", per}};
}

nlohmann::json to_json(const EnvelopeReport& r) {
  nlohmann::json j = {{"pass", r.pass}, {"samples", r.samples}};
  if (!r.pass) {
    j["violated"] = r.violated;
    j["witness"] = vec_to_json(*r.witness);
    j["radius"] = r.radius;
    j["observed"] = number(r.observed);
    j["bound"] = number(r.bound);
  }
  return j;
}

nlohmann::json to_json(const HLambdaReport& r) {
  return {{"max_fro", number(r.max_fro)},
          {"head", number(r.head)},
          {"tail", number(r.tail)},
          {"decreasing", r.decreasing},
          {"nonfinite", r.nonfinite}};
}

nlohmann::json to_json(const FdReport& r) {
  nlohmann::json j = {{"pass", r.pass},
                      {"max_grad_error", number(r.max_grad_error)},
                      {"max_hess_error", number(r.max_hess_error)}};
  if (r.worst_point) j["worst_point"] = vec_to_json(*r.worst_point);
  return j;
}

}  // namespace aniso
