#include "polydisc/cyclicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

namespace polydisc {

double Evaluator::log_abs_at(std::span<const cplx> z) const {
  if (log_abs) return log_abs(z);
  return std::log(std::abs(value(z)));
}

Evaluator Evaluator::from_series(const TruncatedSeries& f, std::string name) {
  Evaluator ev;
  ev.n = f.n();
  ev.name = std::move(name);
  ev.value = [f](std::span<const cplx> z) { return series_eval(f, z); };
  return ev;
}

ApproximantSolve approximant_distance(const TruncatedSeries& f, const SpaceSpec& spec,
                                      int N) {
  if (spec.n() != f.n())
    throw Error(ErrorCode::DimensionMismatch, "approximant_distance: space/f mismatch");
  if (f.max_abs_coeff() == 0.0)
    throw Error(ErrorCode::InvalidArgument, "approximant_distance: f = 0");
  if (N < 0) throw Error(ErrorCode::InvalidArgument, "approximant_distance: N < 0");

  const int n = f.n();
  const int work_cap = f.degree_support() + N;
  Truncation work(n, work_cap);
  Truncation poly(n, N);
  TruncatedSeries fw = f.embedded(work_cap);

  // shifted basis u_j = z^{alpha_j} f, exact in the working cap
  std::vector<TruncatedSeries> basis;
  basis.reserve(poly.basis_size());
  for (int j = 0; j < poly.basis_size(); ++j)
    basis.push_back(series_mul(TruncatedSeries::monomial(work, poly.index(j)), fw));

  const int m = poly.basis_size();
  TruncatedSeries one = TruncatedSeries::constant(work, 1.0);

  // normal equations M c = v with M_{jk} = <u_k, u_j>, v_j = <1, u_j>;
  // M is the transpose of the Gram matrix G_{jk} = <u_j, u_k>
  Eigen::MatrixXcd M(m, m);
  Eigen::VectorXcd v(m);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k <= j; ++k) {
      cplx val = space_inner(spec, basis[k], basis[j]);
      M(j, k) = val;
      M(k, j) = std::conj(val);
    }
    v(j) = space_inner(spec, one, basis[j]);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
  double ev_min = es.eigenvalues().minCoeff();
  double ev_max = es.eigenvalues().maxCoeff();
  double cond = (ev_min > 0.0) ? ev_max / ev_min
                               : std::numeric_limits<double>::infinity();

  Eigen::LLT<Eigen::MatrixXcd> llt(M);
  if (llt.info() != Eigen::Success) {
    double jitter = 1e-12 * M.real().trace() / m;
    Eigen::MatrixXcd Mj =
        M + jitter * Eigen::MatrixXcd::Identity(m, m);
    llt.compute(Mj);
    if (llt.info() != Eigen::Success) {
      std::ostringstream os;
      os << "approximant_distance: Gram factorization failed, cond~" << cond;
      throw Error(ErrorCode::SingularGram, os.str());
    }
  }
  Eigen::VectorXcd c = llt.solve(v);

  ApproximantSolve out;
  out.condition = cond;
  out.solve_residual =
      v.norm() > 0.0 ? (M * c - v).norm() / v.norm() : (M * c - v).norm();

  double ones_sq = 1.0;  // weight(0) = 1 in every spec
  double dist_sq = ones_sq - (v.adjoint() * c)(0).real();
  out.distance = std::sqrt(std::max(0.0, dist_sq));

  out.optimal_p = TruncatedSeries(poly);
  for (int j = 0; j < m; ++j) out.optimal_p.coeffs()[j] = c(j);
  return out;
}

std::string to_string(CurveVerdict v) {
  switch (v) {
    case CurveVerdict::CyclicConsistent: return "cyclic-consistent";
    case CurveVerdict::NonCyclicConsistent: return "non-cyclic-consistent";
    case CurveVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

ApproximantResult cyclicity_curve(const TruncatedSeries& f, const SpaceSpec& spec,
                                  int N_max, const CurveOptions& opts) {
  ApproximantResult res{spec, {}, {}, {}, TruncatedSeries(), true, 0.0,
                        CurveVerdict::Inconclusive};
  for (int N = 0; N <= N_max; ++N) {
    ApproximantSolve s = approximant_distance(f, spec, N);
    res.degrees.push_back(N);
    res.distances.push_back(s.distance);
    res.conditions.push_back(s.condition);
    if (N == N_max) res.optimal_p = s.optimal_p;
    if (N > 0 && s.distance > res.distances[N - 1] + 1e-12) res.monotone = false;
  }

  // fitted decay exponent over the trailing half of the curve
  const int count = static_cast<int>(res.distances.size());
  int start = count / 2;
  int pts = 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = start; i < count; ++i) {
    double d = res.distances[i];
    if (d <= 0.0) continue;
    double x = std::log(res.degrees[i] + 2.0), y = std::log(d);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++pts;
  }
  if (pts >= 2 && sxx * pts - sx * sx > 1e-12)
    res.decay_exponent = -(pts * sxy - sx * sy) / (pts * sxx - sx * sx);

  double d_last = res.distances.back();
  if (d_last <= opts.decay_floor) {
    res.verdict = CurveVerdict::CyclicConsistent;
  } else {
    bool plateau = false;
    if (count > opts.plateau_window) {
      double d_prev = res.distances[count - 1 - opts.plateau_window];
      plateau = (d_prev - d_last) <= opts.plateau_tol * std::max(d_last, 1e-30);
    }
    if (plateau && d_last > opts.plateau_level &&
        res.decay_exponent < opts.min_decay_exponent)
      res.verdict = CurveVerdict::NonCyclicConsistent;
    else if (res.decay_exponent >= opts.min_decay_exponent)
      res.verdict = CurveVerdict::CyclicConsistent;
    else
      res.verdict = CurveVerdict::Inconclusive;
  }
  return res;
}

std::string curve_to_csv(const ApproximantResult& r) {
  std::ostringstream os;
  os.precision(17);
  os << "N,d_N,cond_G\n";
  for (size_t i = 0; i < r.degrees.size(); ++i)
    os << r.degrees[i] << "," << r.distances[i] << "," << r.conditions[i] << "\n";
  return os.str();
}

std::string to_string(OuterVerdict v) {
  switch (v) {
    case OuterVerdict::Outer: return "Outer";
    case OuterVerdict::NotOuter: return "NotOuter";
    case OuterVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

int outer_default_K(int n) {
  // about 256^2 total nodes spread over the n circles
  double per = std::pow(65536.0, 1.0 / n);
  int k = 1;
  while (2 * k <= static_cast<int>(per)) k <<= 1;
  return std::max(k, 16);
}

std::vector<double> default_radius_schedule() {
  std::vector<double> r;
  for (int k = 1; k <= 9; ++k) r.push_back(1.0 - std::pow(2.0, -k));
  r.push_back(1.0);
  return r;
}

}  // namespace

OuterReport outer_test(const Evaluator& f, const OuterOptions& opts) {
  OuterReport rep;
  rep.function_name = f.name;
  rep.radii = opts.radii.empty() ? default_radius_schedule() : opts.radii;
  const int n = f.n;
  const int K = opts.points_per_circle > 0 ? opts.points_per_circle
                                           : outer_default_K(n);
  const double log_floor = std::log(opts.floor_abs);

  std::vector<cplx> origin(n, cplx(0.0));
  double lhs = f.log_abs_at(origin);
  if (!std::isfinite(lhs) || lhs < log_floor)
    throw Error(ErrorCode::InvalidArgument, "outer_test: f(0) vanishes (log|f(0)| below floor)");
  rep.lhs = lhs;

  std::vector<cplx> unit(K);
  for (int j = 0; j < K; ++j) {
    double th = 2.0 * std::numbers::pi * j / K;
    unit[j] = cplx(std::cos(th), std::sin(th));
  }

  for (double r : rep.radii) {
    double acc = 0.0;
    long clipped = 0;
    std::vector<int> j(n, 0);
    std::vector<cplx> z(n);
    long total = 1;
    for (int i = 0; i < n; ++i) total *= K;
    for (;;) {
      for (int i = 0; i < n; ++i) z[i] = r * unit[j[i]];
      double v = f.log_abs_at(z);
      if (!std::isfinite(v) || v < log_floor) {
        v = log_floor;
        ++clipped;
      }
      acc += v;
      int i = n - 1;
      while (i >= 0 && ++j[i] == K) j[i--] = 0;
      if (i < 0) break;
    }
    rep.rhs.push_back(acc / total);
    rep.clip_fraction.push_back(double(clipped) / double(total));
  }

  // nondecreasing check, with slack for floor-clip perturbations
  for (size_t i = 1; i < rep.rhs.size(); ++i) {
    double slack = 1e-9 + std::abs(log_floor) *
                              (rep.clip_fraction[i] + rep.clip_fraction[i - 1]);
    if (rep.rhs[i] < rep.rhs[i - 1] - slack) rep.quadrature_failure = true;
  }

  for (size_t i = 0; i < rep.radii.size(); ++i)
    if (rep.clip_fraction[i] <= opts.reliable_frac)
      rep.chosen_radius = static_cast<int>(i);

  if (rep.chosen_radius < 0) {
    rep.verdict = OuterVerdict::Inconclusive;
    rep.diagnostic = "log floor clipped too many nodes at every radius";
    rep.defect = lhs - rep.rhs.back();
    rep.rhs_extrapolated = rep.rhs.back();
    return rep;
  }

  rep.rhs_extrapolated = rep.rhs[rep.chosen_radius];
  rep.defect = lhs - rep.rhs_extrapolated;
  for (size_t i = rep.chosen_radius + 1; i < rep.rhs.size(); ++i)
    rep.clipped_drift = std::max(rep.clipped_drift,
                                 rep.rhs[i] - rep.rhs_extrapolated);

  if (rep.defect > opts.tol_outer) rep.positive_defect_flag = true;

  bool chosen_is_last =
      rep.chosen_radius == static_cast<int>(rep.radii.size()) - 1;
  bool converged = false;
  if (rep.chosen_radius > 0)
    converged = std::abs(rep.rhs[rep.chosen_radius] -
                         rep.rhs[rep.chosen_radius - 1]) <= 10 * opts.tol_outer;

  if (std::abs(rep.defect) <= opts.tol_outer)
    rep.verdict = OuterVerdict::Outer;
  else if (rep.defect < -opts.tol_outer && (chosen_is_last || converged))
    rep.verdict = OuterVerdict::NotOuter;
  else {
    rep.verdict = OuterVerdict::Inconclusive;
    rep.diagnostic = "no stable trend at trusted radii";
  }
  return rep;
}

OuterReport outer_test(const TruncatedSeries& f, const OuterOptions& opts) {
  return outer_test(Evaluator::from_series(f), opts);
}

double exp_norm_tail(const SpaceSpec& spec, std::span<const cplx> w, int cap) {
  // sum_{|alpha|=k} |w|^alpha ||S||^alpha / alpha! = s^k / k! with
  // s = sum_i |w_i| ||S_i||; ||1|| = 1 in all three specs
  std::vector<double> sn = shift_norms(spec, Truncation(spec.n(), std::max(cap, 4)));
  double s = 0.0;
  for (int i = 0; i < spec.n(); ++i) s += std::abs(w[i]) * sn[i];
  double term = 1.0;
  for (int k = 1; k <= cap + 1; ++k) term *= s / k;
  double tail = 0.0;
  int k = cap + 1;
  while ((term > tail * 1e-18 || k <= cap + 2) && k <= cap + 10000) {
    tail += term;
    ++k;
    term *= s / k;
  }
  return tail;
}

ExpCyclicReport exp_is_cyclic_check(std::span<const cplx> w, const SpaceSpec& spec,
                                    int N_max, double tail_tol) {
  ExpCyclicReport rep;
  const int n = spec.n();
  int cap = -1;
  for (int c = 2; c <= 60; ++c) {
    double t = exp_norm_tail(spec, w, c);
    if (t < tail_tol) {
      cap = c;
      rep.tail_bound = t;
      break;
    }
  }
  if (cap < 0)
    throw Error(ErrorCode::InsufficientCap,
                "exp_is_cyclic_check: exponential tail does not reach tolerance");
  rep.exp_cap = cap;

  Truncation tr(n, cap);
  TruncatedSeries f = exponential_series(tr, w);
  rep.curve = cyclicity_curve(f, spec, N_max);

  // the optimal polynomials should track truncations of e^{-w.z}
  std::vector<cplx> minus_w(w.begin(), w.end());
  for (cplx& x : minus_w) x = -x;
  TruncatedSeries q = exponential_series(Truncation(n, N_max), minus_w);
  const TruncatedSeries& p = rep.curve.optimal_p;
  cplx ip = space_inner(spec, p, q);
  double np = space_norm(spec, p), nq = space_norm(spec, q);
  rep.cosine_similarity = (np > 0 && nq > 0) ? std::abs(ip) / (np * nq) : 0.0;

  // direct bound ||q_N f - 1|| computed in exact series arithmetic
  int work_cap = cap + N_max;
  TruncatedSeries prod = series_mul(f.embedded(work_cap), q.embedded(work_cap));
  prod -= TruncatedSeries::constant(Truncation(n, work_cap), 1.0);
  rep.direct_bound = space_norm(spec, prod);
  return rep;
}

std::optional<Evaluator> named_evaluator(const std::string& name) {
  if (name == "rudin-outer-2d") {
    Evaluator ev;
    ev.n = 2;
    ev.name = name;
    ev.value = [](std::span<const cplx> z) {
      return std::exp((z[0] + z[1] + 2.0) / (z[0] + z[1] - 2.0));
    };
    ev.log_abs = [](std::span<const cplx> z) {
      return ((z[0] + z[1] + 2.0) / (z[0] + z[1] - 2.0)).real();
    };
    return ev;
  }
  if (name == "rudin-image-1d") {
    Evaluator ev;
    ev.n = 1;
    ev.name = name;
    ev.value = [](std::span<const cplx> z) {
      return std::exp((z[0] + 3.0) / (z[0] - 1.0));
    };
    ev.log_abs = [](std::span<const cplx> z) {
      return ((z[0] + 3.0) / (z[0] - 1.0)).real();
    };
    return ev;
  }
  return std::nullopt;
}

}  // namespace polydisc
