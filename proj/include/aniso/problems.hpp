#pragma once

#include <cstdint>

#include "aniso/problem.hpp"
#include "aniso/rng.hpp"

namespace aniso {

// ---- phase retrieval: f(x) = 1/4 sum_i (y_i^2 - (a_i^T x)^2)^2 -------------

struct PhaseRetrievalData {
  Mat A;  // m x n, rows are the measurement vectors
  Vec y;  // m
};

/// Gaussian measurement vectors and y_i = |a_i^T x_true| for a Gaussian x_true.
PhaseRetrievalData random_phase_retrieval(Eigen::Index n, Eigen::Index m, CounterRng& rng);

bool spans(const Mat& A);

/// Builds the problem. When `require_spanning` is set, a rank-deficient A
/// raises SpanningError and the envelope is attached.
Problem phase_retrieval(const PhaseRetrievalData& data, bool require_spanning = true);

/// min over the unit sphere of ||sum_i (a_i^T u)^3 a_i||, estimated by
/// multistart projected descent. Throws SpanningError if rank(A) < n.
double phase_retrieval_C(const PhaseRetrievalData& data, int refine_iters, CounterRng& rng);

/// sigma_min(A)^4 / m, a certified lower bound on the constant above.
double phase_retrieval_C_floor(const PhaseRetrievalData& data);

/// sum_i y_i^2 ||a_i||^2, the linear coefficient in the gradient lower bound.
double phase_retrieval_linear_coeff(const PhaseRetrievalData& data);

// ---- matrix factorization --------------------------------------------------

struct MatrixFactorizationData {
  Mat Y;
  Eigen::Index rank_r = 1;
  double kappa = 0.0;  // asymmetric case only
};

/// f(U) = 1/4 ||U U^T - Y||_F^2 over vec(U) (column-major, U is n x r).
Problem sym_mf(const MatrixFactorizationData& data);

/// f(W, H) = 1/2 ||W H - Y||_F^2 + kappa/4 (||W||_F^4 + ||H||_F^4) over
/// [vec(W); vec(H)], W is m x r and H is r x n.
Problem asym_mf(const MatrixFactorizationData& data);

/// Splits an asymmetric-MF variable into (W, H).
std::pair<Mat, Mat> asym_mf_unpack(const MatrixFactorizationData& data, const Vec& x);
Vec asym_mf_pack(const Mat& W, const Mat& H);

// ---- Burer-Monteiro augmented Lagrangian -----------------------------------

struct BurerMonteiroData {
  Mat C;  // n x n symmetric cost
  Eigen::Index rank_r = 1;
  double beta = 1.0;
  Vec multipliers;  // n
};

/// L_beta(x, y) = -<C, V V^T> + <A(x), y> + beta/2 ||A(x)||^2 with
/// A(x)_i = ||x_i||^2 - 1 and x = rows of V stacked (row i at [i*r, i*r + r)).
Problem burer_monteiro_alm(const BurerMonteiroData& data);

/// A(x) = diag(V V^T) - 1.
Vec bm_constraint(const BurerMonteiroData& data, const Vec& x);

/// y <- y + beta A(x).
Vec bm_multiplier_update(const BurerMonteiroData& data, const Vec& x);

/// Constants of ||grad L_beta|| >= (2 beta / n)||x||^3 - c1 ||x|| - c0.
struct BmLowerBound {
  double cubic;
  double c1;
  double c0;
};
BmLowerBound bm_lower_bound_constants(const BurerMonteiroData& data);

/// Random symmetric cost with zero diagonal (MaxCut-style).
BurerMonteiroData random_burer_monteiro(Eigen::Index n, Eigen::Index r, double beta, CounterRng& rng);

struct AlmResult {
  Vec x;
  Vec multipliers;
  int outer_iterations = 0;
  double constraint_violation = 0.0;
};

/// Alternates an inner solve (the caller's minimizer) with multiplier updates.
AlmResult run_alm(BurerMonteiroData data, const Vec& x0, int outer_iters,
                  const std::function<Vec(const Problem&, const Vec&)>& inner_solve);

// ---- fixtures ---------------------------------------------------------------

/// 1/4 x^4 - 1/2 x^2.
Problem quartic_1d();
/// f1 = 1/4 (x^4 + y^4) - 1/2 x^2 y^2, f2 = f1 + x, f3 = f1 + x^2.
Problem quartic_f1();
Problem quartic_f2();
Problem quartic_f3();
/// exp(||x||^2) and exp(||x||^2) - 2||x||^2.
Problem exp_sq(Eigen::Index dim);
Problem exp_sq_minus(Eigen::Index dim);
/// sum_i coeffs[i] x^i with the univariate envelope attached (degree >= 2).
Problem univariate_polynomial(std::vector<double> coeffs);
/// 1/2 x^T Q x - b^T x.
Problem quadratic(const Mat& Q, const Vec& b);
/// b^T x + c.
Problem affine(const Vec& b, double c);

std::vector<Problem> fixture_problems();

// ---- octopus ---------------------------------------------------------------

struct OctopusParams {
  Eigen::Index dim = 5;
  double L = 1.0;       // curvature of the escape wells
  double gamma = 1.0;   // negative curvature at each saddle
  double tau = 2.718281828459045;
};

/// Chain of dim strict saddles followed by a minimum; evaluated on |x|.
Problem octopus(const OctopusParams& params);
double octopus_min_value(const OctopusParams& params);
/// f <= f_min + 0.1 |f_min|.
double octopus_escape_threshold(const OctopusParams& params);

}  // namespace aniso
