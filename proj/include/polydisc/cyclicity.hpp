#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polydisc/evaluator.hpp"
#include "polydisc/spaces.hpp"

namespace polydisc {

struct ApproximantSolve {
  double distance = 0.0;        // d_N = min_{deg p <= N} ||p f - 1||
  TruncatedSeries optimal_p;    // the minimizer, over Truncation(n, N)
  double condition = 0.0;       // Gram condition-number estimate
  double solve_residual = 0.0;  // ||G c - v|| / ||v||
};

// Solves the least-squares problem min ||p f - 1||^2 over polynomials of
// total degree <= N through the Gram system of the shifted basis
// {z^alpha f}. Products p f are formed at an enlarged working cap so no
// retained term is truncated away.
ApproximantSolve approximant_distance(const TruncatedSeries& f, const SpaceSpec& spec,
                                      int N);

enum class CurveVerdict { CyclicConsistent, NonCyclicConsistent, Inconclusive };

std::string to_string(CurveVerdict v);

struct ApproximantResult {
  SpaceSpec spec;
  std::vector<int> degrees;
  std::vector<double> distances;
  std::vector<double> conditions;
  TruncatedSeries optimal_p;  // at the largest degree
  bool monotone = true;       // d_N nonincreasing within tolerance
  double decay_exponent = 0.0;  // fitted gamma in d_N ~ C (N+2)^{-gamma}
  CurveVerdict verdict = CurveVerdict::Inconclusive;
};

struct CurveOptions {
  double decay_floor = 1e-6;    // d below this is decisively cyclic-consistent
  double plateau_level = 1e-2;  // plateau above this reads non-cyclic-consistent
  double plateau_tol = 1e-2;    // relative decrease over the last window
  int plateau_window = 3;
  double min_decay_exponent = 0.05;
};

ApproximantResult cyclicity_curve(const TruncatedSeries& f, const SpaceSpec& spec,
                                  int N_max, const CurveOptions& opts = {});

std::string curve_to_csv(const ApproximantResult& r);

enum class OuterVerdict { Outer, NotOuter, Inconclusive };

std::string to_string(OuterVerdict v);

struct OuterOptions {
  double tol_outer = 1e-3;
  double floor_abs = 1e-14;      // |f| clipped below this in log quadratures
  double reliable_frac = 1e-4;   // max clipped-node fraction to trust a radius
  int points_per_circle = 0;     // 0: pick from n (256^2 total nodes)
  std::vector<double> radii;     // empty: 1 - 2^{-k}, k = 1..9, then 1.0
};

struct OuterReport {
  std::string function_name;
  double lhs = 0.0;  // log|f(0)|
  std::vector<double> radii;
  std::vector<double> rhs;            // clipped quadrature means per radius
  std::vector<double> clip_fraction;  // clipped-node fraction per radius
  int chosen_radius = -1;             // largest reliable radius (index)
  double rhs_extrapolated = 0.0;
  double defect = 0.0;  // lhs - rhs_extrapolated
  OuterVerdict verdict = OuterVerdict::Inconclusive;
  bool quadrature_failure = false;   // monotonicity of rhs violated
  bool positive_defect_flag = false;  // defect > tol (sub-mean-value breach)
  double clipped_drift = 0.0;  // rhs rise beyond the chosen radius (diagnostic)
  std::string diagnostic;
};

// Boundary-mean test of log|f|: compares log|f(0)| against torus
// quadratures of log|f(r w)| along the radius schedule. The schedule ends
// at r = 1; each radius is trusted only if the log floor clipped at most
// reliable_frac of its nodes, and the extrapolated mean is taken at the
// largest trusted radius.
OuterReport outer_test(const Evaluator& f, const OuterOptions& opts = {});
OuterReport outer_test(const TruncatedSeries& f, const OuterOptions& opts = {});

struct ExpCyclicReport {
  ApproximantResult curve;
  int exp_cap = 0;                  // truncation used for e^{w.z}
  double tail_bound = 0.0;          // shift-norm series tail at that cap
  double cosine_similarity = 0.0;   // optimal_p vs truncation of e^{-w.z}
  double direct_bound = 0.0;        // ||q_N e^{w.z} - 1|| with q_N = trunc e^{-w.z}
};

// Runs the approximant curve on a truncated e^{w.z} and reports how the
// optimal polynomials track the truncations of e^{-w.z}.
ExpCyclicReport exp_is_cyclic_check(std::span<const cplx> w, const SpaceSpec& spec,
                                    int N_max, double tail_tol = 1e-10);

// Norm-tail bound sum_{|alpha|>cap} |w|^alpha ||S||^alpha ||1|| / alpha!
// evaluated through the multinomial collapse to a single-variable series.
double exp_norm_tail(const SpaceSpec& spec, std::span<const cplx> w, int cap);

// Named closed-form built-ins: "rudin-outer-2d", "rudin-image-1d".
std::optional<Evaluator> named_evaluator(const std::string& name);

}  // namespace polydisc
