#include "polydisc/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

namespace polydisc {

MomentFunctional::MomentFunctional(Truncation trunc, std::vector<cplx> moments,
                                   std::optional<GrowthBound> growth)
    : trunc_(std::move(trunc)), moments_(std::move(moments)), growth_(std::move(growth)) {
  if (static_cast<int>(moments_.size()) != trunc_.basis_size())
    throw Error(ErrorCode::DimensionMismatch,
                "MomentFunctional: moment table size != basis size");
  if (growth_) {
    if (static_cast<int>(growth_->rho.size()) != trunc_.n())
      throw Error(ErrorCode::DimensionMismatch, "MomentFunctional: rho size != n");
    for (int r = 0; r < trunc_.basis_size(); ++r) {
      const MultiIndex& a = trunc_.index(r);
      double bound = growth_->C;
      for (int i = 0; i < trunc_.n(); ++i)
        bound *= std::pow(growth_->rho[i], a[i]);
      if (std::abs(moments_[r]) > bound + 1e-9)
        throw Error(ErrorCode::InvalidArgument,
                    "MomentFunctional: stored moment violates growth bound");
    }
  }
}

MomentFunctional MomentFunctional::point_evaluation(const Truncation& trunc, cplx a,
                                                    std::span<const cplx> b) {
  if (static_cast<int>(b.size()) != trunc.n())
    throw Error(ErrorCode::DimensionMismatch, "point_evaluation: b dimension");
  std::vector<cplx> moments(trunc.basis_size());
  for (int r = 0; r < trunc.basis_size(); ++r) {
    const MultiIndex& al = trunc.index(r);
    cplx v = a;
    for (int i = 0; i < trunc.n(); ++i)
      for (int k = 0; k < al[i]; ++k) v *= b[i];
    moments[r] = v;
  }
  GrowthBound g;
  g.C = std::abs(a);
  for (cplx bi : b) g.rho.push_back(std::max(std::abs(bi), 1e-300));
  return MomentFunctional(trunc, std::move(moments), g);
}

cplx MomentFunctional::apply(const TruncatedSeries& p) const {
  if (!(p.trunc() == trunc_))
    throw Error(ErrorCode::DimensionMismatch, "apply: truncation scope mismatch");
  cplx s = 0.0;
  for (int r = 0; r < trunc_.basis_size(); ++r) {
    cplx c = p.coeff_at_rank(r);
    if (c != cplx(0.0)) s += c * moments_[r];
  }
  return s;
}

MomentTransformValue moment_transform(const MomentFunctional& lam,
                                      std::span<const cplx> w, int K) {
  if (static_cast<int>(w.size()) != lam.n())
    throw Error(ErrorCode::DimensionMismatch, "moment_transform: w dimension");
  if (K > lam.trunc().degree_cap())
    throw Error(ErrorCode::InvalidArgument, "moment_transform: K beyond stored cap");
  const Truncation& tr = lam.trunc();
  std::vector<std::vector<cplx>> pows(lam.n());
  for (int i = 0; i < lam.n(); ++i) {
    pows[i].resize(K + 1);
    pows[i][0] = 1.0;
    for (int k = 1; k <= K; ++k) pows[i][k] = pows[i][k - 1] * w[i];
  }
  cplx acc = 0.0;
  double abs_acc = 0.0;
  int terms = 0;
  for (int r = 0; r < tr.basis_size(); ++r) {
    const MultiIndex& a = tr.index(r);
    if (a.total_degree() > K) break;
    cplx m = lam.moment_at_rank(r);
    if (m == cplx(0.0)) continue;
    cplx t = m;
    for (int i = 0; i < lam.n(); ++i) t *= pows[i][a[i]];
    t /= a.factorial();
    acc += t;
    abs_acc += std::abs(t);
    ++terms;
  }

  MomentTransformValue out;
  out.value = acc;
  out.eval_noise =
      (terms + 1) * std::numeric_limits<double>::epsilon() * abs_acc;
  if (lam.growth()) {
    // tail = C * sum_{|alpha|>K} (rho |w|)^alpha / alpha!
    //      = C * sum_{k>K} s^k / k!   with s = sum_i rho_i |w_i|
    double s = 0.0;
    for (int i = 0; i < lam.n(); ++i)
      s += lam.growth()->rho[i] * std::abs(w[i]);
    double term = 1.0;
    for (int k = 1; k <= K + 1; ++k) term *= s / k;
    double tail = 0.0;
    int k = K + 1;
    while (term > tail * 1e-18 || k <= K + 2) {
      tail += term;
      ++k;
      term *= s / k;
      if (k > K + 10000) break;
    }
    out.tail_bound = lam.growth()->C * tail;
  }
  return out;
}

namespace {

struct ScanHit {
  double abs_F = std::numeric_limits<double>::infinity();
  std::vector<cplx> w;
  bool certified = false;
};

bool certified_possible_zero(const MomentTransformValue& v) {
  double tail = v.tail_bound.value_or(0.0);
  return std::abs(v.value) <= tail + v.eval_noise;
}

// shrinking coordinate-wise pattern search for min |F| near w0
ScanHit refine_minimum(const MomentFunctional& lam, std::vector<cplx> w0,
                       double step, int K) {
  ScanHit best;
  best.w = w0;
  {
    auto v = moment_transform(lam, w0, K);
    best.abs_F = std::abs(v.value);
    best.certified = certified_possible_zero(v);
  }
  const int n = lam.n();
  int evals = 0;
  while (step > 1e-13 && evals < 20000 && !best.certified) {
    bool improved = false;
    for (int i = 0; i < n && !best.certified; ++i) {
      for (cplx dir : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}) {
        std::vector<cplx> w = best.w;
        w[i] += step * dir;
        auto v = moment_transform(lam, w, K);
        ++evals;
        double m = std::abs(v.value);
        if (m < best.abs_F) {
          best.abs_F = m;
          best.w = w;
          best.certified = certified_possible_zero(v);
          improved = true;
          if (best.certified) break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace

ClassificationResult classify(const MomentFunctional& lam, const ClassifyGrid& grid,
                              double fit_tol) {
  ClassificationResult res{};
  const Truncation& tr = lam.trunc();
  const int n = lam.n();
  cplx lam0 = lam.moment(MultiIndex::zero(n));

  if (std::abs(lam0) == 0.0) {
    // F(0) = lambda_0 = 0: the transform vanishes at the origin
    res.verdict = ClassifyVerdict::VanishingWitness;
    res.witness_w.assign(n, cplx(0.0));
    res.witness_abs_F = 0.0;
    return res;
  }

  // candidate forced by lambda_alpha = a b^alpha
  res.a = lam0;
  res.b.resize(n);
  for (int i = 0; i < n; ++i)
    res.b[i] = lam.moment(MultiIndex::unit(n, i)) / lam0;

  double scale = std::abs(lam0);
  double resid = 0.0;
  for (int r = 0; r < tr.basis_size(); ++r) {
    const MultiIndex& a = tr.index(r);
    cplx model = res.a;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < a[i]; ++k) model *= res.b[i];
    resid = std::max(resid, std::abs(lam.moment_at_rank(r) - model));
  }
  res.fit_residual = resid;
  if (resid <= fit_tol * std::max(1.0, scale)) {
    res.verdict = ClassifyVerdict::PointEvaluation;
    auto env = envelope_check(res.b);
    res.b_in_open_polydisc = env.inside;
    for (int i = 0; i < n; ++i)
      if (std::abs(std::abs(res.b[i]) - 1.0) <= 1e-12)
        res.boundary_indices.push_back(i);
    return res;
  }

  // grid scan for a vanishing witness of F
  const int K = tr.degree_cap();
  ScanHit best;
  std::vector<int> j(n, 0);
  for (double radius : grid.radii) {
    std::vector<cplx> unit(grid.points_per_circle);
    for (int k = 0; k < grid.points_per_circle; ++k) {
      double th = 2.0 * std::numbers::pi * k / grid.points_per_circle;
      unit[k] = cplx(std::cos(th), std::sin(th));
    }
    std::fill(j.begin(), j.end(), 0);
    std::vector<cplx> w(n);
    for (;;) {
      for (int i = 0; i < n; ++i) w[i] = radius * unit[j[i]];
      auto v = moment_transform(lam, w, K);
      double m = std::abs(v.value);
      if (m < best.abs_F) {
        best.abs_F = m;
        best.w = w;
        best.certified = certified_possible_zero(v);
      }
      int i = n - 1;
      while (i >= 0 && ++j[i] == grid.points_per_circle) j[i--] = 0;
      if (i < 0) break;
    }
  }

  if (!best.certified && !best.w.empty()) {
    // in-cell refinement around the grid argmin; initial step spans the
    // largest gap between adjacent radii and the tangential spacing
    std::vector<double> radii = grid.radii;
    std::sort(radii.begin(), radii.end());
    double max_r = radii.back();
    double radial_gap = radii.front();
    for (size_t i = 1; i < radii.size(); ++i)
      radial_gap = std::max(radial_gap, radii[i] - radii[i - 1]);
    double tangential = max_r * 2.0 * std::numbers::pi / grid.points_per_circle;
    double step = std::max(radial_gap, tangential) * 0.75;
    best = refine_minimum(lam, best.w, step, K);
  }

  if (best.certified) {
    res.verdict = ClassifyVerdict::VanishingWitness;
    res.witness_w = best.w;
    res.witness_abs_F = best.abs_F;
  } else {
    res.verdict = ClassifyVerdict::Inconclusive;
    res.min_abs_F = best.abs_F;
    res.min_abs_w = best.w;
  }
  return res;
}

EnvelopeCheck envelope_check(std::span<const cplx> b) {
  EnvelopeCheck out;
  for (size_t i = 0; i < b.size(); ++i) {
    double m = std::abs(b[i]);
    if (m >= 1.0) {
      out.inside = false;
      out.violated_coordinate = static_cast<int>(i);
      out.violated_beta = b[i] / m;
      return out;
    }
  }
  return out;
}

DefectReport multiplicativity_defect(
    const MomentFunctional& lam, MultiplicativityMode mode,
    std::span<const std::pair<TruncatedSeries, TruncatedSeries>> samples) {
  DefectReport rep;
  const int cap = lam.trunc().degree_cap();
  for (const auto& [f, g] : samples) {
    int overflow = f.degree_support() + g.degree_support() - cap;
    if (overflow > 0) {
      if (mode == MultiplicativityMode::M0)
        throw Error(ErrorCode::DegreeOverflow,
                    "M0 defect requires deg f + deg g <= cap");
      rep.truncation_approximate = true;
    }
    TruncatedSeries fe = f.embedded(cap, /*allow_drop=*/true);
    TruncatedSeries ge = g.embedded(cap, /*allow_drop=*/true);
    cplx lhs = lam.apply(series_mul(fe, ge));
    cplx rhs = lam.apply(fe) * lam.apply(ge);
    rep.max_defect = std::max(rep.max_defect, std::abs(lhs - rhs));
  }
  return rep;
}

double m0_exhaustive_defect(const MomentFunctional& lam) {
  const Truncation& tr = lam.trunc();
  const int cap = tr.degree_cap();
  double defect = 0.0;
  for (int ra = 0; ra < tr.basis_size(); ++ra) {
    const MultiIndex& a = tr.index(ra);
    for (int rb = 0; rb <= ra; ++rb) {
      const MultiIndex& b = tr.index(rb);
      if (a.total_degree() + b.total_degree() > cap) break;
      cplx lhs = lam.moment(a.plus(b));
      cplx rhs = lam.moment_at_rank(ra) * lam.moment_at_rank(rb);
      defect = std::max(defect, std::abs(lhs - rhs));
    }
  }
  return defect;
}

GkzReport gkz_equivalence_suite(const MomentFunctional& lam, const ClassifyGrid& grid,
                                unsigned long seed, double tol) {
  GkzReport rep;
  cplx lam0 = lam.moment(MultiIndex::zero(lam.n()));
  if (std::abs(lam0 - cplx(1.0)) > 1e-8)
    throw Error(ErrorCode::InvalidArgument,
                "gkz_equivalence_suite: requires normalized Lambda(1) = 1");

  rep.classification = classify(lam, grid);
  rep.point_eval_pass =
      rep.classification.verdict == ClassifyVerdict::PointEvaluation;
  rep.nonvanishing_pass =
      rep.classification.verdict != ClassifyVerdict::VanishingWitness;
  if (rep.point_eval_pass) rep.envelope = envelope_check(rep.classification.b);

  // sampled product defects; degrees bounded by cap/2 so products are exact
  const Truncation& tr = lam.trunc();
  const int half_cap = tr.degree_cap() / 2;
  Truncation half_tr(lam.n(), std::max(1, half_cap));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  auto random_series = [&]() {
    TruncatedSeries s(half_tr);
    for (auto& c : s.coeffs()) c = cplx(box(rng), box(rng));
    return s;
  };

  std::vector<std::pair<TruncatedSeries, TruncatedSeries>> pairs;
  for (int t = 0; t < 24; ++t) pairs.emplace_back(random_series(), random_series());
  rep.m2_defect =
      multiplicativity_defect(lam, MultiplicativityMode::M2, pairs).max_defect;
  rep.m2_pass = rep.m2_defect <= tol;

  // M1 samples: polynomial multipliers (low-degree polynomials) times series
  std::vector<std::pair<TruncatedSeries, TruncatedSeries>> m1_pairs;
  for (int t = 0; t < 24; ++t) {
    TruncatedSeries phi(half_tr);
    for (int r = 0; r < half_tr.basis_size(); ++r)
      if (half_tr.index(r).total_degree() <= std::max(1, half_cap / 2))
        phi.coeffs()[r] = cplx(box(rng), box(rng));
    m1_pairs.emplace_back(phi, random_series());
  }
  rep.m1_defect =
      multiplicativity_defect(lam, MultiplicativityMode::M1, m1_pairs).max_defect;
  rep.m1_pass = rep.m1_defect <= tol;

  rep.consistent = (rep.nonvanishing_pass == rep.point_eval_pass) &&
                   (rep.point_eval_pass == rep.m2_pass) &&
                   (rep.m2_pass == rep.m1_pass);
  return rep;
}

DomainMembership domain_membership(const SpaceSpec& spec, std::span<const cplx> b,
                                   int cap_max) {
  if (static_cast<int>(b.size()) != spec.n())
    throw Error(ErrorCode::DimensionMismatch, "domain_membership: b dimension");
  DomainMembership out;
  Truncation tr(spec.n(), cap_max);
  std::vector<double> partial(cap_max + 1, 0.0);
  for (int r = 0; r < tr.basis_size(); ++r) {
    const MultiIndex& a = tr.index(r);
    double t = 1.0;
    for (int i = 0; i < spec.n(); ++i) t *= std::pow(std::abs(b[i]), 2.0 * a[i]);
    partial[a.total_degree()] += t / spec.weight(a);
  }
  double run = 0.0;
  for (int d = 0; d <= cap_max; ++d) {
    run += partial[d];
    out.partial_norms.push_back(std::sqrt(run));
  }
  // decide from the decay of the degree-d increments: geometric decay or a
  // power-law exponent > 1 means the Riesz-vector norm stays bounded
  double last = partial[cap_max];
  double prev = partial[cap_max - 1];
  double total = run;
  if (last <= 1e-12 * total) {
    out.verdict = MembershipVerdict::Member;
  } else if (prev <= 0.0 || last >= prev) {
    out.verdict = MembershipVerdict::NotMember;
  } else {
    double p_hat = std::log(prev / last) /
                   std::log(double(cap_max + 1) / double(cap_max));
    if (p_hat >= 1.5)
      out.verdict = MembershipVerdict::Member;
    else if (p_hat > 1.05)
      out.verdict = MembershipVerdict::SlowConvergence;
    else
      out.verdict = MembershipVerdict::NotMember;
  }
  return out;
}

std::string moments_to_json(const MomentFunctional& lam) {
  nlohmann::ordered_json j;
  j["n"] = lam.n();
  j["degree_cap"] = lam.trunc().degree_cap();
  auto arr = nlohmann::ordered_json::array();
  for (int r = 0; r < lam.trunc().basis_size(); ++r) {
    cplx m = lam.moment_at_rank(r);
    if (m == cplx(0.0)) continue;
    nlohmann::ordered_json t;
    t["alpha"] = lam.trunc().index(r).entries();
    t["re"] = m.real();
    t["im"] = m.imag();
    arr.push_back(t);
  }
  j["moments"] = arr;
  if (lam.growth()) {
    j["growth"] = {{"C", lam.growth()->C}, {"rho", lam.growth()->rho}};
  } else {
    j["growth"] = nullptr;
  }
  return j.dump(2);
}

MomentFunctional moments_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("moments JSON: ") + e.what());
  }
  try {
    int n = j.at("n").get<int>();
    int cap = j.at("degree_cap").get<int>();
    Truncation tr(n, cap);
    std::vector<cplx> moments(tr.basis_size(), cplx(0.0));
    for (const auto& t : j.at("moments")) {
      MultiIndex a(t.at("alpha").get<std::vector<int>>());
      if (a.total_degree() > cap)
        throw Error(ErrorCode::ParseError, "moments JSON: |alpha| > degree_cap");
      moments[tr.rank(a)] = cplx(t.at("re").get<double>(), t.at("im").get<double>());
    }
    std::optional<GrowthBound> growth;
    if (j.contains("growth") && !j.at("growth").is_null()) {
      GrowthBound g;
      g.C = j.at("growth").at("C").get<double>();
      g.rho = j.at("growth").at("rho").get<std::vector<double>>();
      growth = g;
    }
    return MomentFunctional(std::move(tr), std::move(moments), std::move(growth));
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("moments JSON: ") + e.what());
  }
}

}  // namespace polydisc
