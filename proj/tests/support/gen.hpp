#pragma once

// Small seeded generators for property tests. Deliberately separate from the
// library's CounterRng so a bug there cannot hide a bug here.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Core>
#include <doctest.h>

namespace gen {

struct Gen {
  std::mt19937_64 eng;
  explicit Gen(std::uint64_t seed) : eng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng); }
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng); }
  // 10^U(lo_exp, hi_exp)
  double log_uniform(double lo_exp, double hi_exp) { return std::pow(10.0, uniform(lo_exp, hi_exp)); }

  Eigen::VectorXd normal_vec(long n) {
    Eigen::VectorXd v(n);
    for (long i = 0; i < n; ++i) v[i] = normal();
    return v;
  }
  Eigen::MatrixXd normal_mat(long r, long c) {
    Eigen::MatrixXd m(r, c);
    for (long j = 0; j < c; ++j)
      for (long i = 0; i < r; ++i) m(i, j) = normal();
    return m;
  }
  // Direction uniform on the sphere, radius log-uniform in [10^lo, 10^hi].
  Eigen::VectorXd scaled_vec(long n, double lo_exp, double hi_exp) {
    Eigen::VectorXd v = normal_vec(n);
    return v.normalized() * log_uniform(lo_exp, hi_exp);
  }
};

// Runs `prop` on `cases` fresh generators; the first failing case reports its seed.
inline void for_all(int cases, std::uint64_t base_seed, const std::function<bool(Gen&, std::string&)>& prop) {
  for (int i = 0; i < cases; ++i) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
    Gen g(seed);
    std::string why;
    if (!prop(g, why)) {
      FAIL("property failed for seed " << seed << ": " << why);
      return;
    }
  }
}

inline std::string describe(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (long i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

}  // namespace gen
