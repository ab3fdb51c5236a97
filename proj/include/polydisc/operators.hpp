#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polydisc/cyclicity.hpp"
#include "polydisc/spaces.hpp"

namespace polydisc {

struct OperatorScope {
  Truncation trunc;
  SpaceSpec spec;
};

// A linear map between truncated monomial coefficient spaces. Column j
// holds the codomain coefficients of the image of the j-th domain
// monomial (graded-lex order on both sides).
class OperatorMatrix {
 public:
  OperatorMatrix(OperatorScope domain, OperatorScope codomain);

  const OperatorScope& domain() const { return domain_; }
  const OperatorScope& codomain() const { return codomain_; }
  Eigen::MatrixXcd& entries() { return entries_; }
  const Eigen::MatrixXcd& entries() const { return entries_; }

  std::vector<int>& truncated_columns() { return truncated_cols_; }
  const std::vector<int>& truncated_columns() const { return truncated_cols_; }

  TruncatedSeries apply(const TruncatedSeries& f) const;
  TruncatedSeries column_series(int j) const;

  // operator-norm estimate between the weighted spaces: largest singular
  // value of W_out^{1/2} M W_in^{-1/2}
  double norm_estimate() const;

 private:
  OperatorScope domain_;
  OperatorScope codomain_;
  Eigen::MatrixXcd entries_;
  std::vector<int> truncated_cols_;
};

// f -> z_i f between the given truncations; columns whose image spills
// past the codomain cap are flagged truncated.
OperatorMatrix shift_matrix(int i, const Truncation& trunc, const SpaceSpec& spec,
                            std::optional<Truncation> codomain_trunc = std::nullopt);

// f -> phi f; exact when codomain cap >= domain cap + deg phi
OperatorMatrix multiplier_matrix(const TruncatedSeries& phi, const Truncation& trunc,
                                 const SpaceSpec& spec,
                                 std::optional<Truncation> codomain_trunc = std::nullopt);

// Weight/symbol pair of a weighted composition candidate Tf = a (f o b).
struct WCOSpec {
  TruncatedSeries a;                // weight over m vars
  std::vector<TruncatedSeries> b;   // n symbols over m vars
  bool symbol_in_polydisc = true;   // sup-node check |b_i| < 1
  bool weight_nonvanishing = true;  // min-node |a| above the floor
};

// column alpha = a * b^alpha in the truncated codomain algebra
OperatorMatrix wco_matrix(const WCOSpec& spec, const OperatorScope& domain,
                          const OperatorScope& codomain);

// a = T(1), b_i = T(z_i)/T(1) by formal series division; requires the
// recovered weight not to vanish at the origin.
WCOSpec recover_wco(const OperatorMatrix& T);

struct WcoVerification {
  double max_defect = 0.0;  // max_alpha ||T(z^alpha) - a b^alpha||_codomain
  int worst_column = -1;
  std::vector<double> column_defects;
};

WcoVerification verify_wco(const OperatorMatrix& T, const WCOSpec& spec);

struct ExpProbeResult {
  std::vector<cplx> w;
  double min_abs = 0.0;
  std::vector<cplx> argmin_node;
  bool witness = false;  // image of e^{w.z} dips below the vanishing floor
};

struct ExpProbeOptions {
  std::vector<double> radii = {0.25, 0.5, 0.75, 0.95};
  int points_per_circle = 64;
  bool include_origin = true;
  double floor_rel = 1e-12;  // vanishing floor, scaled by the column sup
  double exp_tail_tol = 1e-10;
};

// For each w, pushes the truncated e^{w.z} through T and scans the image
// modulus over the codomain node grid for a vanishing witness.
std::vector<ExpProbeResult> exp_probe(const OperatorMatrix& T,
                                      std::span<const std::vector<cplx>> w_samples,
                                      const ExpProbeOptions& opts = {});

struct CompositionBoundReport {
  double bound = 0.0;      // ((1+|b(0)|)/(1-|b(0)|))^{1/p}
  double max_ratio = 0.0;  // max over samples of ||f o b|| / ||f||
  bool pass = false;
  double p = 0.0;
};

// One-variable Hardy composition bound: quadrature p-means of f o b
// against the bound times ||f||_p, over a radius schedule ending at 1.
CompositionBoundReport composition_bound_check(const TruncatedSeries& b, double p,
                                               std::span<const TruncatedSeries> f_samples,
                                               double quad_tol = 1e-3);

struct PreservationCase {
  std::string input_name;
  CurveVerdict input_verdict;
  CurveVerdict image_verdict;
  bool violation_candidate = false;  // cyclic-consistent in, non-cyclic out
};

struct PreservationReport {
  std::vector<PreservationCase> cases;
  double wco_defect = 0.0;        // verify_wco against the recovered spec
  bool wco_structure = false;     // defect below tolerance
  bool weight_cyclic_consistent = false;  // curve verdict for a = T(1)
  int violations = 0;
  bool codomain_hardy = true;  // preservation claims need a Hardy codomain
};

// Cross-tabulates cyclicity-curve verdicts of a test family against the
// weighted-composition verdict of T. Default family: envelope polynomials
// z_1 - beta (beta in {1, 2, 1+i}), truncated exponentials, and z - 1/2.
PreservationReport cyclicity_preservation_suite(const OperatorMatrix& T,
                                                int N_max = 10,
                                                double wco_tol = 1e-10);

// Operator JSON: domain/codomain descriptors plus dense column-major
// [re, im] pairs.
std::string operator_to_json(const OperatorMatrix& T);
OperatorMatrix operator_from_json(const std::string& text);

// Named built-ins: "shift:i=1", "rudin", "average".
std::optional<OperatorMatrix> named_operator(const std::string& name, int cap);

}  // namespace polydisc
