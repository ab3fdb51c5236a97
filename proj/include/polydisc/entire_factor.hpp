#pragma once

#include <string>
#include <vector>

#include "polydisc/evaluator.hpp"

namespace polydisc {

struct GrowthCertificate {
  double A = 1.0;
  double B = 1.0;
  int m = 0;
  std::vector<double> radii;
  std::vector<double> log_max_abs;  // log max |F| over the grid per radius
  std::vector<bool> radius_pass;    // log max <= log A + B r^m + slack
  bool pass = false;
};

// max |F| over tensor grids at each radius against A e^{B r^m}
GrowthCertificate check_growth(const Evaluator& F, double A, double B, int m,
                               std::span<const double> radii,
                               int points_per_circle = 32, double slack = 1e-9);

struct LogBranch {
  std::vector<cplx> direction;  // the ray z; samples at lambda_j * z
  std::vector<double> lambdas;
  std::vector<cplx> values;  // branch-continued G(lambda_j z), G(0) principal
};

// Continuous branch of log F along the segment [0, z]:
// G(lambda_{j+1}) = G(lambda_j) + Log(F(lambda_{j+1} z) / F(lambda_j z)).
// Steps are uniform; a log increment of modulus >= pi aborts with
// StepTooCoarse, |F| below the floor aborts with NonVanishingViolation.
LogBranch log_along_ray(const Evaluator& F, std::span<const cplx> z, int steps,
                        double floor_abs = 1e-300);

struct ExponentRecovery {
  TruncatedSeries p;        // fitted exponent, truncated at fit degree M
  double residual = 0.0;    // max |G_sample - p(sample)| over fit samples
  double holdout_rel = 0.0;  // max relative |e^p - F| at held-out points
  // l2 norm of the fitted homogeneous part of each degree k in (m, M]
  std::vector<double> homogeneous_tail;
  double max_tail = 0.0;
  bool certificate_consistent = true;  // tail below tolerance
};

struct RecoveryOptions {
  int fit_guard = 2;        // fit degree M = m + fit_guard
  double sample_radius = 2.0;
  int initial_steps = 16;   // per ray, doubled until log steps are tame
  unsigned long seed = 0;   // random ray directions
  double tail_tol = 1e-6;
  double residual_tol = 1e-6;
};

// Recovers p with F = e^p from branch-continued logs along a spanning ray
// set, by global polynomial least squares of total degree <= m + guard.
// The homogeneous tail above degree m reports whether the declared growth
// exponent is consistent.
ExponentRecovery recover_exponent(const Evaluator& F, int n, int m,
                                  const RecoveryOptions& opts = {});

// a-priori modulus bound on the exponent implied by a growth certificate:
// |G(z)| <= 2 C (1 + 2^m |z|^m) + 3 |G(0)| with C = max(ln A, B) + 1.
// Returns the largest violation of the fitted p against it (0 if none).
double exponent_bound_violation(const TruncatedSeries& p, double A, double B, int m,
                                std::span<const std::vector<cplx>> sample_points);

}  // namespace polydisc
