#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polydisc/spaces.hpp"

namespace polydisc {

struct GrowthBound {
  double C = 0.0;
  std::vector<double> rho;  // |lambda_alpha| <= C rho_1^a1 ... rho_n^an
};

// The moment sequence lambda_alpha = Lambda(z^alpha) of a linear
// functional, stored up to a truncation cap, together with an optional
// growth bound certifying the entire transform F(w).
class MomentFunctional {
 public:
  MomentFunctional(Truncation trunc, std::vector<cplx> moments,
                   std::optional<GrowthBound> growth = std::nullopt);

  // point-evaluation moments lambda_alpha = a * b^alpha
  static MomentFunctional point_evaluation(const Truncation& trunc, cplx a,
                                           std::span<const cplx> b);

  const Truncation& trunc() const { return trunc_; }
  int n() const { return trunc_.n(); }
  cplx moment(const MultiIndex& alpha) const { return moments_[trunc_.rank(alpha)]; }
  cplx moment_at_rank(int r) const { return moments_[r]; }
  const std::optional<GrowthBound>& growth() const { return growth_; }

  // Lambda(p) = sum phat(alpha) lambda_alpha for a polynomial p within cap
  cplx apply(const TruncatedSeries& p) const;

 private:
  Truncation trunc_;
  std::vector<cplx> moments_;
  std::optional<GrowthBound> growth_;
};

struct MomentTransformValue {
  cplx value;                      // partial sum of F(w) up to |alpha| <= K
  std::optional<double> tail_bound;  // present when a growth bound is stored
  double eval_noise;               // rounding-noise estimate for the partial sum
};

// F(w) = sum lambda_alpha w^alpha / alpha!, truncated at total degree K.
MomentTransformValue moment_transform(const MomentFunctional& lam,
                                      std::span<const cplx> w, int K);

struct ClassifyGrid {
  std::vector<double> radii = {1.0, 2.0, 4.0};
  int points_per_circle = 64;
};

enum class ClassifyVerdict { PointEvaluation, VanishingWitness, Inconclusive };

struct ClassificationResult {
  ClassifyVerdict verdict;
  // PointEvaluation payload: a = lambda_0, b_i = lambda_{e_i} / lambda_0
  cplx a{};
  std::vector<cplx> b;
  double fit_residual = 0.0;      // max |lambda_alpha - a b^alpha| over stored alpha
  bool b_in_open_polydisc = false;
  std::vector<int> boundary_indices;  // coordinates with |b_i| in [1-tol, 1+tol]
  // VanishingWitness payload
  std::vector<cplx> witness_w;
  double witness_abs_F = 0.0;
  // Inconclusive payload
  double min_abs_F = 0.0;
  std::vector<cplx> min_abs_w;
};

// Decides between scaled point evaluation and vanishing transform:
// fits (a, b) forced by the moments, else scans the grid (plus an
// in-cell shrinking pattern search) for w where |F(w)| falls below the
// truncation-tail + rounding certificate.
ClassificationResult classify(const MomentFunctional& lam,
                              const ClassifyGrid& grid = {},
                              double fit_tol = 1e-10);

struct EnvelopeCheck {
  bool inside = true;
  int violated_coordinate = -1;  // i with |b_i| >= 1
  cplx violated_beta{};          // b_i / |b_i|, the reported factor z_i - beta
};

// true iff |b_i| < 1 for all i, i.e. no member of the cyclic family
// {z_i - beta : beta outside the open disc} vanishes at b
EnvelopeCheck envelope_check(std::span<const cplx> b);

enum class MultiplicativityMode { M0, M1, M2 };

struct DefectReport {
  double max_defect = 0.0;
  bool truncation_approximate = false;  // pair products were truncated at cap
};

// max over sample pairs of |Lambda(fg) - Lambda(f) Lambda(g)|.
// M0 requires deg f + deg g <= cap (exact products); M1/M2 samples with
// overflowing products are evaluated on the truncated product and flagged.
DefectReport multiplicativity_defect(
    const MomentFunctional& lam, MultiplicativityMode mode,
    std::span<const std::pair<TruncatedSeries, TruncatedSeries>> samples);

// defect over the exhaustive monomial pair set {(z^a, z^b) : |a|+|b| <= cap}
double m0_exhaustive_defect(const MomentFunctional& lam);

struct GkzReport {
  bool nonvanishing_pass = false;   // (i)  no vanishing witness on the grid
  bool point_eval_pass = false;     // (ii) moments fit a * b^alpha
  bool m2_pass = false;             // (iii)
  bool m1_pass = false;             // (iv)
  double m2_defect = 0.0;
  double m1_defect = 0.0;
  bool consistent = false;          // all four verdicts agree
  ClassificationResult classification;
  EnvelopeCheck envelope;           // domain flag for the fitted b
};

// Evaluates the four equivalent conditions at truncation scale for a
// normalized functional (Lambda(1) = 1 required).
GkzReport gkz_equivalence_suite(const MomentFunctional& lam,
                                const ClassifyGrid& grid = {},
                                unsigned long seed = 0, double tol = 1e-8);

enum class MembershipVerdict { Member, NotMember, SlowConvergence };

struct DomainMembership {
  MembershipVerdict verdict;
  std::vector<double> partial_norms;  // sqrt(sum_{|alpha|<=N} |b^alpha|^2 / weight)
};

// Point-evaluation extendability probe: growth of the truncated
// Riesz-vector norms of Lambda_b under the spec across a cap ladder.
DomainMembership domain_membership(const SpaceSpec& spec, std::span<const cplx> b,
                                   int cap_max = 24);

// Moments JSON:
//   {"n":int, "degree_cap":int,
//    "moments":[{"alpha":[...],"re":...,"im":...}],
//    "growth": {"C":..., "rho":[...]} | null}
std::string moments_to_json(const MomentFunctional& lam);
MomentFunctional moments_from_json(const std::string& text);

}  // namespace polydisc
