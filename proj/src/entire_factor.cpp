#include "polydisc/entire_factor.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "polydisc/spaces.hpp"

namespace polydisc {

GrowthCertificate check_growth(const Evaluator& F, double A, double B, int m,
                               std::span<const double> radii, int points_per_circle,
                               double slack) {
  GrowthCertificate cert;
  cert.A = A;
  cert.B = B;
  cert.m = m;
  cert.pass = true;
  for (double r : radii) {
    QuadratureRule rule(F.n, points_per_circle, r);
    double log_max = -std::numeric_limits<double>::infinity();
    rule.for_each_node([&](std::span<const cplx> z) {
      log_max = std::max(log_max, F.log_abs_at(z));
    });
    bool ok = log_max <= std::log(A) + B * std::pow(r, m) + slack;
    cert.radii.push_back(r);
    cert.log_max_abs.push_back(log_max);
    cert.radius_pass.push_back(ok);
    if (!ok) cert.pass = false;
  }
  return cert;
}

LogBranch log_along_ray(const Evaluator& F, std::span<const cplx> z, int steps,
                        double floor_abs) {
  if (steps < 1)
    throw Error(ErrorCode::InvalidArgument, "log_along_ray: steps >= 1");
  LogBranch br;
  br.direction.assign(z.begin(), z.end());
  const int n = static_cast<int>(z.size());

  std::vector<cplx> pt(n, cplx(0.0));
  cplx f_prev = F.value(pt);
  if (!(std::abs(f_prev) > floor_abs))
    throw Error(ErrorCode::NonVanishingViolation,
                "log_along_ray: |F| at the ray origin is below the floor");
  cplx g = std::log(f_prev);  // principal anchor at F(0)
  br.lambdas.push_back(0.0);
  br.values.push_back(g);

  for (int j = 1; j <= steps; ++j) {
    double lam = double(j) / steps;
    for (int i = 0; i < n; ++i) pt[i] = lam * z[i];
    cplx f = F.value(pt);
    if (!(std::abs(f) > floor_abs)) {
      std::ostringstream os;
      os << "log_along_ray: |F| below floor at lambda=" << lam;
      throw Error(ErrorCode::NonVanishingViolation, os.str());
    }
    cplx inc = std::log(f / f_prev);
    if (std::abs(inc) >= std::numbers::pi)
      throw Error(ErrorCode::StepTooCoarse,
                  "log_along_ray: log increment reached pi; refine steps");
    g += inc;
    f_prev = f;
    br.lambdas.push_back(lam);
    br.values.push_back(g);
  }
  return br;
}

ExponentRecovery recover_exponent(const Evaluator& F, int n, int m,
                                  const RecoveryOptions& opts) {
  const int M = m + opts.fit_guard;
  Truncation fit_tr(n, M);
  const int unknowns = fit_tr.basis_size();

  // ray set: coordinate directions, the diagonal, and random unit rays
  std::vector<std::vector<cplx>> rays;
  for (int i = 0; i < n; ++i) {
    std::vector<cplx> e(n, cplx(0.0));
    e[i] = opts.sample_radius;
    rays.push_back(e);
  }
  rays.emplace_back(n, cplx(opts.sample_radius / std::sqrt(double(n))));
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int random_rays = 2 * unknowns;
  for (int t = 0; t < random_rays; ++t) {
    std::vector<cplx> d(n);
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
      d[i] = cplx(gauss(rng), gauss(rng));
      norm += std::norm(d[i]);
    }
    norm = std::sqrt(norm);
    for (int i = 0; i < n; ++i) d[i] *= opts.sample_radius / norm;
    rays.push_back(std::move(d));
  }

  std::vector<std::vector<cplx>> fit_pts, holdout_pts;
  std::vector<cplx> fit_vals, holdout_vals;
  for (const auto& ray : rays) {
    LogBranch br;
    int steps = opts.initial_steps;
    for (;;) {
      try {
        br = log_along_ray(F, ray, steps);
        // adaptive halving until every increment is below pi/4
        double max_inc = 0.0;
        for (size_t j = 1; j < br.values.size(); ++j)
          max_inc = std::max(max_inc, std::abs(br.values[j] - br.values[j - 1]));
        if (max_inc < std::numbers::pi / 4.0) break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::StepTooCoarse) throw;
      }
      steps *= 2;
      if (steps > (1 << 20))
        throw Error(ErrorCode::StepTooCoarse,
                    "recover_exponent: adaptive step refinement exhausted");
    }
    // thin the branch: 16 evenly spaced samples are plenty per ray,
    // alternating between the fit and the holdout set
    size_t count = br.lambdas.size() - 1;
    size_t stride = std::max<size_t>(1, count / 16);
    size_t picked = 0;
    for (size_t j = stride; j < br.lambdas.size(); j += stride, ++picked) {
      std::vector<cplx> pt(n);
      for (int i = 0; i < n; ++i) pt[i] = br.lambdas[j] * ray[i];
      if (picked % 2 == 0) {
        fit_pts.push_back(pt);
        fit_vals.push_back(br.values[j]);
      } else {
        holdout_pts.push_back(pt);
        holdout_vals.push_back(br.values[j]);
      }
    }
  }
  // the shared origin anchors the constant coefficient
  {
    std::vector<cplx> origin(n, cplx(0.0));
    fit_pts.push_back(origin);
    std::vector<cplx> pt(n, cplx(0.0));
    fit_vals.push_back(std::log(F.value(pt)));
  }

  if (static_cast<int>(fit_pts.size()) < unknowns)
    throw Error(ErrorCode::RankDeficient,
                "recover_exponent: not enough samples for the fit degree");

  Eigen::MatrixXcd Amat(fit_pts.size(), unknowns);
  Eigen::VectorXcd rhs(fit_pts.size());
  for (size_t s = 0; s < fit_pts.size(); ++s) {
    for (int c = 0; c < unknowns; ++c) {
      const MultiIndex& a = fit_tr.index(c);
      cplx v = 1.0;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < a[i]; ++k) v *= fit_pts[s][i];
      Amat(static_cast<Eigen::Index>(s), c) = v;
    }
    rhs(static_cast<Eigen::Index>(s)) = fit_vals[s];
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(Amat);
  if (qr.rank() < unknowns)
    throw Error(ErrorCode::RankDeficient,
                "recover_exponent: sample matrix is rank deficient");
  Eigen::VectorXcd coef = qr.solve(rhs);

  ExponentRecovery out;
  out.p = TruncatedSeries(fit_tr);
  for (int c = 0; c < unknowns; ++c) out.p.coeffs()[c] = coef(c);

  Eigen::VectorXcd resid = Amat * coef - rhs;
  for (Eigen::Index s = 0; s < resid.size(); ++s)
    out.residual = std::max(out.residual, std::abs(resid(s)));
  if (out.residual > opts.residual_tol)
    throw Error(ErrorCode::FitFailed,
                "recover_exponent: fit residual above tolerance; F may vanish "
                "off the rays or the growth bound is wrong");

  for (size_t s = 0; s < holdout_pts.size(); ++s) {
    cplx model = std::exp(series_eval(out.p, holdout_pts[s]));
    cplx truth = std::exp(holdout_vals[s]);
    double denom = std::max(std::abs(truth), 1e-300);
    out.holdout_rel = std::max(out.holdout_rel, std::abs(model - truth) / denom);
  }

  for (int k = m + 1; k <= M; ++k) {
    double norm2 = 0.0;
    for (int c = 0; c < unknowns; ++c)
      if (fit_tr.index(c).total_degree() == k) norm2 += std::norm(coef(c));
    out.homogeneous_tail.push_back(std::sqrt(norm2));
  }
  for (double t : out.homogeneous_tail) out.max_tail = std::max(out.max_tail, t);
  out.certificate_consistent = out.max_tail <= opts.tail_tol;
  return out;
}

double exponent_bound_violation(const TruncatedSeries& p, double A, double B, int m,
                                std::span<const std::vector<cplx>> sample_points) {
  double C = std::max(std::log(A), B) + 1.0;
  std::vector<cplx> origin(p.n(), cplx(0.0));
  double g0 = std::abs(series_eval(p, origin));
  double worst = 0.0;
  for (const auto& z : sample_points) {
    double zmax = 0.0;
    for (cplx zi : z) zmax = std::max(zmax, std::abs(zi));
    double bound = 2.0 * C * (1.0 + std::pow(2.0, m) * std::pow(zmax, m)) + 3.0 * g0;
    double val = std::abs(series_eval(p, z));
    worst = std::max(worst, val - bound);
  }
  return std::max(worst, 0.0);
}

}  // namespace polydisc
