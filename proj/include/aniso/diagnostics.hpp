#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aniso/problem.hpp"
#include "aniso/rng.hpp"

namespace aniso {

struct ScanSpec {
  double r_min = 1e-2;
  double r_max = 1e4;
  int per_decade = 25;
  int random_directions = 8;
  bool include_axes = true;
  std::uint64_t seed = 7;
};

/// Sample geometry: unit directions crossed with a radius grid.
struct RayScan {
  std::vector<Vec> directions;
  std::vector<double> radii;  // strictly increasing
  std::vector<bool> adversarial;  // parallel to directions

  /// Problem-specific adversarial directions first, then coordinate axes
  /// (both signs) and seeded random directions.
  static RayScan make(const Problem& p, const ScanSpec& spec);
  /// Geometric grid from r_min to r_max inclusive.
  static std::vector<double> geometric_radii(double r_min, double r_max, int per_decade);
};

struct L0Report {
  double l1 = 0.0;
  double l0 = 0.0;        // over the full radius grid
  double l0_inner = 0.0;  // over radii <= r_max / 100
  bool divergent = false;
  bool nonfinite = false;
  int worst_direction = -1;
  Vec worst_direction_vec;
  std::vector<double> per_direction;  // full-grid estimate per direction
};

/// max over samples of (||hess f||_F - L1 ||grad f||)_+, plus the two-decade
/// stability verdict (estimates within 5%, all samples finite).
L0Report l0_for_l1(const Problem& p, double L1, const RayScan& scan);

/// max over samples of lambda_max(P^{1/2} hess f P^{1/2}) / Lbar, P = hess phi*(grad f / Lbar).
double second_order_char(const Problem& p, const ReferenceFunction& ref, double Lbar, const RayScan& scan);
/// Same estimate over explicit points, e.g. the iterates of a run.
double second_order_char_at(const Problem& p, const ReferenceFunction& ref, double Lbar,
                            const std::vector<Vec>& points);

struct EnvelopeReport {
  bool pass = true;
  long samples = 0;
  std::string violated;  // "hessian" or "gradient"
  std::optional<Vec> witness;
  double radius = 0.0;
  double observed = 0.0;
  double bound = 0.0;
};

EnvelopeReport envelope_check(const Problem& p, const PolynomialBounds& bounds, const RayScan& scan,
                              double rel_tol = 1e-9);

struct HLambdaReport {
  double max_fro = 0.0;
  double head = 0.0;  // max over the smallest radius decile
  double tail = 0.0;  // max over the largest radius decile
  bool decreasing = false;
  bool nonfinite = false;
};

HLambdaReport h_lambda_bound_scan(const Problem& p, const ReferenceFunction& ref, double Lbar,
                                  const RayScan& scan);

struct FdReport {
  bool pass = true;
  double max_grad_error = 0.0;
  double max_hess_error = 0.0;
  std::optional<Vec> worst_point;
};

/// Central differences at random points in the ball of the given radius.
FdReport fd_check(const Problem& p, int points, CounterRng& rng, double radius = 1.0,
                  double tol = 1e-4);
FdReport fd_check_at(const Problem& p, const std::vector<Vec>& points, double tol = 1e-4);

}  // namespace aniso
