#include "polydisc/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

namespace polydisc {

OperatorMatrix::OperatorMatrix(OperatorScope domain, OperatorScope codomain)
    : domain_(std::move(domain)), codomain_(std::move(codomain)) {
  if (domain_.trunc.n() != domain_.spec.n() ||
      codomain_.trunc.n() != codomain_.spec.n())
    throw Error(ErrorCode::DimensionMismatch,
                "OperatorMatrix: spec/truncation variable counts differ");
  entries_ = Eigen::MatrixXcd::Zero(codomain_.trunc.basis_size(),
                                    domain_.trunc.basis_size());
}

TruncatedSeries OperatorMatrix::apply(const TruncatedSeries& f) const {
  if (!(f.trunc() == domain_.trunc))
    throw Error(ErrorCode::DimensionMismatch, "apply: series not in domain scope");
  Eigen::VectorXcd x(domain_.trunc.basis_size());
  for (int r = 0; r < domain_.trunc.basis_size(); ++r) x(r) = f.coeff_at_rank(r);
  Eigen::VectorXcd y = entries_ * x;
  TruncatedSeries g(codomain_.trunc);
  for (int r = 0; r < codomain_.trunc.basis_size(); ++r) g.coeffs()[r] = y(r);
  return g;
}

TruncatedSeries OperatorMatrix::column_series(int j) const {
  TruncatedSeries g(codomain_.trunc);
  for (int r = 0; r < codomain_.trunc.basis_size(); ++r) g.coeffs()[r] = entries_(r, j);
  return g;
}

double OperatorMatrix::norm_estimate() const {
  Eigen::VectorXd win(domain_.trunc.basis_size());
  for (int r = 0; r < domain_.trunc.basis_size(); ++r)
    win(r) = std::sqrt(domain_.spec.weight(domain_.trunc.index(r)));
  Eigen::VectorXd wout(codomain_.trunc.basis_size());
  for (int r = 0; r < codomain_.trunc.basis_size(); ++r)
    wout(r) = std::sqrt(codomain_.spec.weight(codomain_.trunc.index(r)));
  Eigen::MatrixXcd scaled =
      wout.asDiagonal() * entries_ * win.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(scaled);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

OperatorMatrix multiplier_matrix(const TruncatedSeries& phi, const Truncation& trunc,
                                 const SpaceSpec& spec,
                                 std::optional<Truncation> codomain_trunc) {
  if (phi.n() != trunc.n())
    throw Error(ErrorCode::DimensionMismatch, "multiplier_matrix: phi dimension");
  Truncation cod = codomain_trunc.value_or(
      Truncation(trunc.n(), trunc.degree_cap() + phi.degree_support()));
  OperatorMatrix T({trunc, spec}, {cod, spec});
  int work_cap = std::max(cod.degree_cap(), trunc.degree_cap() + phi.degree_support());
  Truncation work(trunc.n(), work_cap);
  TruncatedSeries phiw = phi.embedded(work_cap);
  for (int j = 0; j < trunc.basis_size(); ++j) {
    TruncatedSeries img =
        series_mul(TruncatedSeries::monomial(work, trunc.index(j)), phiw);
    if (img.degree_support() > cod.degree_cap()) T.truncated_columns().push_back(j);
    for (int r = 0; r < cod.basis_size(); ++r)
      T.entries()(r, j) = img.coeff(cod.index(r));
  }
  return T;
}

OperatorMatrix shift_matrix(int i, const Truncation& trunc, const SpaceSpec& spec,
                            std::optional<Truncation> codomain_trunc) {
  Truncation cod = codomain_trunc.value_or(trunc);
  return multiplier_matrix(TruncatedSeries::coordinate(trunc, i), trunc, spec, cod);
}

OperatorMatrix wco_matrix(const WCOSpec& spec, const OperatorScope& domain,
                          const OperatorScope& codomain) {
  const int n = domain.trunc.n();
  if (static_cast<int>(spec.b.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "wco_matrix: need n symbol components");
  for (const TruncatedSeries& bi : spec.b)
    if (!(bi.trunc() == codomain.trunc))
      throw Error(ErrorCode::DimensionMismatch,
                  "wco_matrix: symbols must live in the codomain scope");
  if (!(spec.a.trunc() == codomain.trunc))
    throw Error(ErrorCode::DimensionMismatch,
                "wco_matrix: weight must live in the codomain scope");

  OperatorMatrix T(domain, codomain);
  // monomial powers of b assembled incrementally along graded-lex order
  std::vector<TruncatedSeries> pow(domain.trunc.basis_size());
  pow[0] = TruncatedSeries::constant(codomain.trunc, 1.0);
  for (int j = 1; j < domain.trunc.basis_size(); ++j) {
    const MultiIndex& a = domain.trunc.index(j);
    int i = 0;
    while (a[i] == 0) ++i;
    MultiIndex prev = a;
    {
      std::vector<int> e = a.entries();
      e[i] -= 1;
      prev = MultiIndex(e);
    }
    pow[j] = series_mul(pow[domain.trunc.rank(prev)], spec.b[i]);
  }
  for (int j = 0; j < domain.trunc.basis_size(); ++j) {
    TruncatedSeries col = series_mul(spec.a, pow[j]);
    for (int r = 0; r < codomain.trunc.basis_size(); ++r)
      T.entries()(r, j) = col.coeff_at_rank(r);
  }
  return T;
}

WCOSpec recover_wco(const OperatorMatrix& T) {
  TruncatedSeries a = T.column_series(0);  // image of the constant monomial
  if (a.max_abs_coeff() == 0.0)
    throw Error(ErrorCode::InvalidArgument, "recover_wco: T(1) is identically zero");
  if (std::abs(a.coeff_at_rank(0)) < 1e-300)
    throw Error(ErrorCode::InvalidArgument,
                "recover_wco: weight vanishes at origin; division undefined at "
                "truncation scale");
  WCOSpec spec;
  spec.a = a;
  TruncatedSeries inv_a = series_reciprocal(a);
  const int n = T.domain().trunc.n();
  for (int i = 0; i < n; ++i) {
    TruncatedSeries ti =
        T.column_series(T.domain().trunc.rank(MultiIndex::unit(n, i)));
    spec.b.push_back(series_mul(ti, inv_a));
  }
  // sup-node check of the symbol over a near-boundary circle grid, and a
  // min-node check of the weight across a radius ladder and the origin
  const int m = T.codomain().trunc.n();
  {
    QuadratureRule rim(m, 64, 0.95);
    for (const TruncatedSeries& bi : spec.b) {
      double sup = 0.0;
      rim.for_each_node([&](std::span<const cplx> z) {
        sup = std::max(sup, std::abs(series_eval(bi, z)));
      });
      if (sup >= 1.0) spec.symbol_in_polydisc = false;
    }
  }
  {
    double amin = std::abs(a.coeff_at_rank(0));
    double asup = amin;
    for (double r : {0.25, 0.5, 0.75, 0.95}) {
      QuadratureRule rule(m, 64, r);
      rule.for_each_node([&](std::span<const cplx> z) {
        double v = std::abs(series_eval(spec.a, z));
        amin = std::min(amin, v);
        asup = std::max(asup, v);
      });
    }
    spec.weight_nonvanishing = amin > 1e-12 * std::max(1.0, asup);
  }
  return spec;
}

WcoVerification verify_wco(const OperatorMatrix& T, const WCOSpec& spec) {
  OperatorMatrix model = wco_matrix(spec, T.domain(), T.codomain());
  WcoVerification out;
  const int cols = static_cast<int>(T.entries().cols());
  for (int j = 0; j < cols; ++j) {
    TruncatedSeries diff = T.column_series(j);
    diff -= model.column_series(j);
    double d = space_norm(T.codomain().spec, diff);
    out.column_defects.push_back(d);
    if (d > out.max_defect) {
      out.max_defect = d;
      out.worst_column = j;
    }
  }
  return out;
}

std::vector<ExpProbeResult> exp_probe(const OperatorMatrix& T,
                                      std::span<const std::vector<cplx>> w_samples,
                                      const ExpProbeOptions& opts) {
  const int n = T.domain().trunc.n();
  const int m = T.codomain().trunc.n();
  std::vector<ExpProbeResult> results;
  for (const std::vector<cplx>& w : w_samples) {
    if (static_cast<int>(w.size()) != n)
      throw Error(ErrorCode::DimensionMismatch, "exp_probe: w dimension");
    double tail = exp_norm_tail(T.domain().spec, w, T.domain().trunc.degree_cap());
    if (tail > opts.exp_tail_tol)
      throw Error(ErrorCode::InsufficientCap,
                  "exp_probe: domain cap too small for this w (exponential tail)");
    TruncatedSeries ew = exponential_series(T.domain().trunc, w);
    TruncatedSeries img = T.apply(ew);

    ExpProbeResult res;
    res.w = w;
    res.min_abs = std::numeric_limits<double>::infinity();
    double sup = 0.0;
    auto visit = [&](std::span<const cplx> z) {
      double v = std::abs(series_eval(img, z));
      sup = std::max(sup, v);
      if (v < res.min_abs) {
        res.min_abs = v;
        res.argmin_node.assign(z.begin(), z.end());
      }
    };
    if (opts.include_origin) {
      std::vector<cplx> origin(m, cplx(0.0));
      visit(origin);
    }
    for (double r : opts.radii) {
      QuadratureRule rule(m, opts.points_per_circle, r);
      rule.for_each_node(visit);
    }
    res.witness = res.min_abs <= opts.floor_rel * std::max(1.0, sup);
    results.push_back(std::move(res));
  }
  return results;
}

CompositionBoundReport composition_bound_check(const TruncatedSeries& b, double p,
                                               std::span<const TruncatedSeries> f_samples,
                                               double quad_tol) {
  if (!(p >= 1.0))
    throw Error(ErrorCode::InvalidArgument, "composition_bound_check: needs p >= 1");
  std::vector<cplx> origin(b.n(), cplx(0.0));
  double b0 = std::abs(series_eval(b, origin));
  if (b0 >= 1.0)
    throw Error(ErrorCode::InvalidArgument, "composition_bound_check: |b(0)| >= 1");

  CompositionBoundReport rep;
  rep.p = p;
  rep.bound = std::pow((1.0 + b0) / (1.0 - b0), 1.0 / p);

  const int m = b.n();
  for (const TruncatedSeries& f : f_samples) {
    if (f.n() != 1)
      throw Error(ErrorCode::DimensionMismatch,
                  "composition_bound_check: samples must be one-variable");
    int deg_f = f.degree_support();
    int comp_cap = std::max(1, deg_f * std::max(1, b.degree_support()));
    std::vector<TruncatedSeries> inner = {b.embedded(comp_cap)};
    TruncatedSeries comp = series_compose(f.embedded(comp_cap), inner);

    // polynomials extend continuously to the closed polydisc, so the sup
    // over r is attained at the boundary quadrature
    int K = default_points_per_circle(comp.degree_support() * 2 + 2);
    K = std::max(K, 64);
    double num = p_mean(QuadratureRule(m, K, 1.0), comp, p);
    int K1 = std::max(default_points_per_circle(deg_f * 2 + 2), 64);
    double den = p_mean(QuadratureRule(1, K1, 1.0), f, p);
    if (den == 0.0) continue;
    rep.max_ratio = std::max(rep.max_ratio, num / den);
  }
  rep.pass = rep.max_ratio <= rep.bound + quad_tol;
  return rep;
}

PreservationReport cyclicity_preservation_suite(const OperatorMatrix& T, int N_max,
                                                double wco_tol) {
  PreservationReport rep;
  rep.codomain_hardy = T.codomain().spec.kind() == SpaceKind::HardyH2;

  try {
    WCOSpec spec = recover_wco(T);
    rep.wco_defect = verify_wco(T, spec).max_defect;
    rep.wco_structure = rep.wco_defect <= wco_tol;
    ApproximantResult weight_curve =
        cyclicity_curve(spec.a, T.codomain().spec,
                        std::min(N_max, std::max(1, T.codomain().trunc.degree_cap() / 2)));
    rep.weight_cyclic_consistent =
        weight_curve.verdict == CurveVerdict::CyclicConsistent;
  } catch (const Error&) {
    rep.wco_structure = false;
    rep.wco_defect = std::numeric_limits<double>::infinity();
  }

  const int n = T.domain().trunc.n();
  const int dom_cap = T.domain().trunc.degree_cap();
  std::vector<std::pair<std::string, TruncatedSeries>> family;

  for (cplx beta : {cplx(1, 0), cplx(2, 0), cplx(1, 1)}) {
    TruncatedSeries f = TruncatedSeries::coordinate(T.domain().trunc, 0);
    f -= TruncatedSeries::constant(T.domain().trunc, beta);
    std::ostringstream name;
    name << "z1-(" << beta.real() << (beta.imag() >= 0 ? "+" : "") << beta.imag()
         << "i)";
    family.emplace_back(name.str(), f);
  }
  {
    std::vector<cplx> w(n, cplx(1.0));
    double tail = exp_norm_tail(T.domain().spec, w, dom_cap);
    if (tail < 1e-6)
      family.emplace_back("exp(sum z_i)",
                          exponential_series(T.domain().trunc, w));
  }
  {
    // a faster exponential: its image under a parity-averaging map picks
    // up zeros inside the disc, which the curves should flag
    std::vector<cplx> w(n, cplx(0.0));
    w[0] = 4.0;
    double tail = exp_norm_tail(T.domain().spec, w, dom_cap);
    if (tail < 1e-6)
      family.emplace_back("exp(4 z_1)", exponential_series(T.domain().trunc, w));
  }
  {
    TruncatedSeries f = TruncatedSeries::coordinate(T.domain().trunc, 0);
    f -= TruncatedSeries::constant(T.domain().trunc, cplx(0.5));
    family.emplace_back("z1-1/2", f);
  }

  int dom_N = std::min(N_max, std::max(1, dom_cap / 2));
  int cod_N = std::min(N_max, std::max(1, T.codomain().trunc.degree_cap() / 2));
  for (auto& [name, f] : family) {
    PreservationCase c;
    c.input_name = name;
    c.input_verdict =
        cyclicity_curve(f.embedded(f.degree_support(), true), T.domain().spec, dom_N)
            .verdict;
    TruncatedSeries img = T.apply(f);
    if (img.max_abs_coeff() == 0.0) {
      c.image_verdict = CurveVerdict::NonCyclicConsistent;
    } else {
      c.image_verdict =
          cyclicity_curve(img.embedded(img.degree_support(), true),
                          T.codomain().spec, cod_N)
              .verdict;
    }
    c.violation_candidate = c.input_verdict == CurveVerdict::CyclicConsistent &&
                            c.image_verdict == CurveVerdict::NonCyclicConsistent;
    if (c.violation_candidate) ++rep.violations;
    rep.cases.push_back(std::move(c));
  }
  return rep;
}

std::string operator_to_json(const OperatorMatrix& T) {
  nlohmann::ordered_json j;
  j["domain"] = {{"n", T.domain().trunc.n()},
                 {"degree_cap", T.domain().trunc.degree_cap()},
                 {"space", T.domain().spec.to_string()}};
  j["codomain"] = {{"n", T.codomain().trunc.n()},
                   {"degree_cap", T.codomain().trunc.degree_cap()},
                   {"space", T.codomain().spec.to_string()}};
  auto arr = nlohmann::ordered_json::array();
  const auto& M = T.entries();
  for (Eigen::Index c = 0; c < M.cols(); ++c)
    for (Eigen::Index r = 0; r < M.rows(); ++r)
      arr.push_back({M(r, c).real(), M(r, c).imag()});
  j["entries"] = arr;
  return j.dump();
}

OperatorMatrix operator_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("operator JSON: ") + e.what());
  }
  try {
    auto scope = [&](const char* key) {
      return OperatorScope{
          Truncation(j.at(key).at("n").get<int>(),
                     j.at(key).at("degree_cap").get<int>()),
          SpaceSpec::parse(j.at(key).at("space").get<std::string>())};
    };
    OperatorMatrix T(scope("domain"), scope("codomain"));
    const auto& arr = j.at("entries");
    auto& M = T.entries();
    if (static_cast<Eigen::Index>(arr.size()) != M.rows() * M.cols())
      throw Error(ErrorCode::ParseError, "operator JSON: entry count mismatch");
    Eigen::Index idx = 0;
    for (Eigen::Index c = 0; c < M.cols(); ++c)
      for (Eigen::Index r = 0; r < M.rows(); ++r, ++idx)
        M(r, c) = cplx(arr[idx][0].get<double>(), arr[idx][1].get<double>());
    return T;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("operator JSON: ") + e.what());
  }
}

std::optional<OperatorMatrix> named_operator(const std::string& name, int cap) {
  if (name.rfind("shift:i=", 0) == 0) {
    int i = std::stoi(name.substr(8)) - 1;
    Truncation tr(1, cap);
    if (i != 0) {
      // general n: "shift:i=k" acts on an n >= k variable scope
      int n = i + 1;
      Truncation trn(n, cap);
      return shift_matrix(i, trn, SpaceSpec::hardy_h2(n));
    }
    return shift_matrix(0, tr, SpaceSpec::hardy_h2(1));
  }
  if (name == "rudin") {
    // Tf(z) = f((1+z)/2, (1+z)/2): H^2(D^2) -> H^q(D); assembled as the
    // weighted composition with a = 1 and both symbols (1+z)/2
    OperatorScope dom{Truncation(2, cap), SpaceSpec::hardy_h2(2)};
    OperatorScope cod{Truncation(1, cap), SpaceSpec::hardy_h2(1)};
    WCOSpec w;
    w.a = TruncatedSeries::constant(cod.trunc, 1.0);
    TruncatedSeries half = TruncatedSeries::coordinate(cod.trunc, 0);
    half *= cplx(0.5);
    half += TruncatedSeries::constant(cod.trunc, 0.5);
    w.b = {half, half};
    return wco_matrix(w, dom, cod);
  }
  if (name == "average") {
    // Tf(z) = (f(z/2) + f(-z/2)) / 2 on one variable
    OperatorScope dom{Truncation(1, cap), SpaceSpec::hardy_h2(1)};
    OperatorScope cod{Truncation(1, cap), SpaceSpec::hardy_h2(1)};
    OperatorMatrix T(dom, cod);
    for (int j = 0; j <= cap; ++j) {
      // z^j -> ((1/2)^j + (-1/2)^j)/2 z^j
      double v = (std::pow(0.5, j) + std::pow(-0.5, j)) / 2.0;
      T.entries()(j, j) = v;
    }
    return T;
  }
  return std::nullopt;
}

}  // namespace polydisc
