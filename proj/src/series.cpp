#include "polydisc/series.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace polydisc {

TruncatedSeries::TruncatedSeries(Truncation trunc)
    : trunc_(std::move(trunc)), coeffs_(trunc_.basis_size(), cplx(0.0)) {}

TruncatedSeries TruncatedSeries::constant(const Truncation& trunc, cplx value) {
  TruncatedSeries f(trunc);
  f.coeffs_[0] = value;
  return f;
}

TruncatedSeries TruncatedSeries::monomial(const Truncation& trunc,
                                          const MultiIndex& alpha, cplx value) {
  TruncatedSeries f(trunc);
  f.coeffs_[trunc.rank(alpha)] = value;
  return f;
}

TruncatedSeries TruncatedSeries::coordinate(const Truncation& trunc, int i) {
  return monomial(trunc, MultiIndex::unit(trunc.n(), i));
}

cplx TruncatedSeries::coeff(const MultiIndex& alpha) const {
  if (alpha.total_degree() > degree_cap()) return 0.0;
  return coeffs_[trunc_.rank(alpha)];
}

void TruncatedSeries::set_coeff(const MultiIndex& alpha, cplx value) {
  coeffs_[trunc_.rank(alpha)] = value;
}

int TruncatedSeries::degree_support(double tol) const {
  int deg = 0;
  for (int r = 0; r < trunc_.basis_size(); ++r)
    if (std::abs(coeffs_[r]) > tol) deg = std::max(deg, trunc_.index(r).total_degree());
  return deg;
}

TruncatedSeries TruncatedSeries::embedded(int new_cap, bool allow_drop) const {
  if (!allow_drop && new_cap < degree_support())
    throw Error(ErrorCode::DegreeOverflow,
                "embedded: shrinking cap would drop nonzero terms");
  TruncatedSeries g(Truncation(n(), new_cap));
  int m = std::min(g.trunc_.basis_size(), trunc_.basis_size());
  std::copy(coeffs_.begin(), coeffs_.begin() + m, g.coeffs_.begin());
  return g;
}

double TruncatedSeries::max_abs_coeff() const {
  double m = 0.0;
  for (const cplx& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

namespace {
void require_same_scope(const TruncatedSeries& f, const TruncatedSeries& g,
                        const char* op) {
  if (!(f.trunc() == g.trunc()))
    throw Error(ErrorCode::DimensionMismatch,
                std::string(op) + ": operands have different truncation scopes");
}
}  // namespace

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& g) {
  require_same_scope(*this, g, "add");
  for (size_t r = 0; r < coeffs_.size(); ++r) coeffs_[r] += g.coeffs_[r];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& g) {
  require_same_scope(*this, g, "sub");
  for (size_t r = 0; r < coeffs_.size(); ++r) coeffs_[r] -= g.coeffs_[r];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(cplx s) {
  for (cplx& c : coeffs_) c *= s;
  return *this;
}

TruncatedSeries series_mul(const TruncatedSeries& f, const TruncatedSeries& g) {
  require_same_scope(f, g, "series_mul");
  const Truncation& tr = f.trunc();
  const int cap = tr.degree_cap();
  TruncatedSeries h(tr);
  for (int rb = 0; rb < tr.basis_size(); ++rb) {
    cplx fb = f.coeff_at_rank(rb);
    if (fb == cplx(0.0)) continue;
    const MultiIndex& beta = tr.index(rb);
    int degb = beta.total_degree();
    for (int rg = 0; rg < tr.basis_size(); ++rg) {
      const MultiIndex& gamma = tr.index(rg);
      if (degb + gamma.total_degree() > cap) break;  // graded order: rest too big
      cplx gg = g.coeff_at_rank(rg);
      if (gg == cplx(0.0)) continue;
      h.coeffs()[tr.rank(beta.plus(gamma))] += fb * gg;
    }
  }
  return h;
}

TruncatedSeries series_exp(const TruncatedSeries& f) {
  if (std::abs(f.coeff_at_rank(0)) != 0.0)
    throw Error(ErrorCode::InvalidArgument,
                "series_exp: constant term must be exactly zero");
  const Truncation& tr = f.trunc();
  TruncatedSeries acc = TruncatedSeries::constant(tr, 1.0);
  TruncatedSeries term = TruncatedSeries::constant(tr, 1.0);
  for (int k = 1; k <= tr.degree_cap(); ++k) {
    term = series_mul(term, f);
    term *= cplx(1.0 / k);
    acc += term;
  }
  return acc;
}

TruncatedSeries series_compose(const TruncatedSeries& f,
                               std::span<const TruncatedSeries> b) {
  if (static_cast<int>(b.size()) != f.n())
    throw Error(ErrorCode::DimensionMismatch,
                "series_compose: need one inner series per variable of f");
  for (const TruncatedSeries& bi : b)
    if (!(bi.trunc() == b[0].trunc()))
      throw Error(ErrorCode::DimensionMismatch,
                  "series_compose: inner series scopes differ");
  const Truncation& target = b[0].trunc();
  if (target.degree_cap() != f.degree_cap())
    throw Error(ErrorCode::DimensionMismatch,
                "series_compose: shared degree_cap required");

  // recursion over the first variable of f: f = sum_k z_1^k f_k(z_2..z_n)
  const int n = f.n();
  if (n == 1) {
    TruncatedSeries acc = TruncatedSeries::constant(target, 0.0);
    for (int k = f.degree_cap(); k >= 0; --k) {
      acc = series_mul(acc, b[0]);
      acc += TruncatedSeries::constant(target, f.coeff(MultiIndex({k})));
    }
    return acc;
  }

  Truncation inner_tr(n - 1, f.degree_cap());
  std::span<const TruncatedSeries> tail = b.subspan(1);
  TruncatedSeries acc = TruncatedSeries::constant(target, 0.0);
  for (int k = f.degree_cap(); k >= 0; --k) {
    // slice of f with z_1-exponent k, as a series in the remaining variables
    TruncatedSeries fk(inner_tr);
    for (int r = 0; r < inner_tr.basis_size(); ++r) {
      const MultiIndex& rest = inner_tr.index(r);
      if (rest.total_degree() + k > f.degree_cap()) continue;
      std::vector<int> e;
      e.reserve(n);
      e.push_back(k);
      e.insert(e.end(), rest.entries().begin(), rest.entries().end());
      fk.coeffs()[r] = f.coeff(MultiIndex(std::move(e)));
    }
    acc = series_mul(acc, b[0]);
    acc += series_compose(fk, tail);
  }
  return acc;
}

cplx series_eval(const TruncatedSeries& f, std::span<const cplx> z) {
  if (static_cast<int>(z.size()) != f.n())
    throw Error(ErrorCode::DimensionMismatch, "series_eval: point dimension mismatch");
  const Truncation& tr = f.trunc();
  // power tables per variable
  std::vector<std::vector<cplx>> pows(f.n());
  for (int i = 0; i < f.n(); ++i) {
    pows[i].resize(tr.degree_cap() + 1);
    pows[i][0] = 1.0;
    for (int k = 1; k <= tr.degree_cap(); ++k) pows[i][k] = pows[i][k - 1] * z[i];
  }
  cplx acc = 0.0;
  for (int r = 0; r < tr.basis_size(); ++r) {
    cplx c = f.coeff_at_rank(r);
    if (c == cplx(0.0)) continue;
    const MultiIndex& a = tr.index(r);
    cplx m = c;
    for (int i = 0; i < f.n(); ++i) m *= pows[i][a[i]];
    acc += m;
  }
  return acc;
}

TruncatedSeries series_reciprocal(const TruncatedSeries& f) {
  cplx c0 = f.coeff_at_rank(0);
  if (std::abs(c0) == 0.0)
    throw Error(ErrorCode::InvalidArgument,
                "series_reciprocal: constant term vanishes");
  const Truncation& tr = f.trunc();
  // 1/f = (1/c0) * 1/(1 + u), u = f/c0 - 1; Neumann series in the
  // truncated algebra terminates because u has zero constant term.
  TruncatedSeries u = f * (1.0 / c0);
  u.coeffs()[0] -= 1.0;
  TruncatedSeries acc = TruncatedSeries::constant(tr, 1.0);
  TruncatedSeries term = TruncatedSeries::constant(tr, 1.0);
  for (int k = 1; k <= tr.degree_cap(); ++k) {
    term = series_mul(term, u);
    term *= cplx(-1.0);
    acc += term;
  }
  acc *= 1.0 / c0;
  return acc;
}

TruncatedSeries exponential_series(const Truncation& trunc, std::span<const cplx> w) {
  if (static_cast<int>(w.size()) != trunc.n())
    throw Error(ErrorCode::DimensionMismatch, "exponential_series: w dimension");
  TruncatedSeries f(trunc);
  for (int r = 0; r < trunc.basis_size(); ++r) {
    const MultiIndex& a = trunc.index(r);
    cplx num = 1.0;
    for (int i = 0; i < trunc.n(); ++i)
      for (int k = 0; k < a[i]; ++k) num *= w[i];
    f.coeffs()[r] = num / a.factorial();
  }
  return f;
}

std::string series_to_json(const TruncatedSeries& f) {
  nlohmann::ordered_json j;
  j["n"] = f.n();
  j["degree_cap"] = f.degree_cap();
  auto terms = nlohmann::ordered_json::array();
  for (int r = 0; r < f.trunc().basis_size(); ++r) {
    cplx c = f.coeff_at_rank(r);
    if (c == cplx(0.0)) continue;
    nlohmann::ordered_json t;
    t["alpha"] = f.trunc().index(r).entries();
    t["re"] = c.real();
    t["im"] = c.imag();
    terms.push_back(t);
  }
  j["terms"] = terms;
  return j.dump(2);
}

TruncatedSeries series_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("series JSON: ") + e.what());
  }
  try {
    int n = j.at("n").get<int>();
    int cap = j.at("degree_cap").get<int>();
    TruncatedSeries f(Truncation(n, cap));
    for (const auto& t : j.at("terms")) {
      std::vector<int> alpha = t.at("alpha").get<std::vector<int>>();
      MultiIndex a(alpha);
      if (a.n() != n)
        throw Error(ErrorCode::ParseError, "series JSON: alpha length != n");
      if (a.total_degree() > cap)
        throw Error(ErrorCode::ParseError, "series JSON: |alpha| > degree_cap");
      f.set_coeff(a, cplx(t.at("re").get<double>(), t.at("im").get<double>()));
    }
    return f;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("series JSON: ") + e.what());
  }
}

}  // namespace polydisc
