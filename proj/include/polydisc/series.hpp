#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "polydisc/multiindex.hpp"

namespace polydisc {

using cplx = std::complex<double>;

// Truncated multivariate power series: complex coefficients on the
// graded-lex monomial basis of a Truncation. All arithmetic discards
// terms of total degree beyond the cap. Value type, no interior
// mutation shared between operations.
class TruncatedSeries {
 public:
  TruncatedSeries() = default;
  explicit TruncatedSeries(Truncation trunc);

  static TruncatedSeries constant(const Truncation& trunc, cplx value);
  static TruncatedSeries monomial(const Truncation& trunc, const MultiIndex& alpha,
                                  cplx value = 1.0);
  // coordinate function z_i
  static TruncatedSeries coordinate(const Truncation& trunc, int i);

  const Truncation& trunc() const { return trunc_; }
  int n() const { return trunc_.n(); }
  int degree_cap() const { return trunc_.degree_cap(); }

  cplx coeff(const MultiIndex& alpha) const;
  cplx coeff_at_rank(int r) const { return coeffs_[r]; }
  void set_coeff(const MultiIndex& alpha, cplx value);
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  std::vector<cplx>& coeffs() { return coeffs_; }

  // largest |alpha| carrying a coefficient with modulus above tol
  int degree_support(double tol = 0.0) const;

  // same coefficients viewed at a different cap; shrinking requires the
  // dropped range to be zero-free unless allow_drop is set
  TruncatedSeries embedded(int new_cap, bool allow_drop = false) const;

  double max_abs_coeff() const;

  TruncatedSeries& operator+=(const TruncatedSeries& g);
  TruncatedSeries& operator-=(const TruncatedSeries& g);
  TruncatedSeries& operator*=(cplx s);

  friend TruncatedSeries operator+(TruncatedSeries f, const TruncatedSeries& g) {
    f += g;
    return f;
  }
  friend TruncatedSeries operator-(TruncatedSeries f, const TruncatedSeries& g) {
    f -= g;
    return f;
  }
  friend TruncatedSeries operator*(TruncatedSeries f, cplx s) {
    f *= s;
    return f;
  }
  friend TruncatedSeries operator*(cplx s, TruncatedSeries f) {
    f *= s;
    return f;
  }

 private:
  Truncation trunc_;
  std::vector<cplx> coeffs_;
};

// (fg)(alpha) = sum_{beta+gamma=alpha} f(beta) g(gamma), |alpha| <= cap.
// Summation runs graded-lex over beta so results are bitwise deterministic.
TruncatedSeries series_mul(const TruncatedSeries& f, const TruncatedSeries& g);

// sum_{k=0}^{cap} f^k / k!; requires f(0) = 0 so no constant-term branch
// decisions enter here (callers factor e^{f(0)} themselves).
TruncatedSeries series_exp(const TruncatedSeries& f);

// f over n vars evaluated at the tuple b of n series over m vars,
// Horner-style in the truncated algebra (recursion over the first variable).
TruncatedSeries series_compose(const TruncatedSeries& f,
                               std::span<const TruncatedSeries> b);

cplx series_eval(const TruncatedSeries& f, std::span<const cplx> z);

// formal reciprocal of f (requires f(0) != 0), truncated at f's cap
TruncatedSeries series_reciprocal(const TruncatedSeries& f);

// truncation of e^{w . z} at the given cap
TruncatedSeries exponential_series(const Truncation& trunc, std::span<const cplx> w);

// JSON wire format:
//   {"n": int, "degree_cap": int,
//    "terms": [{"alpha": [ints], "re": float, "im": float}, ...]}
// Parsing rejects |alpha| > degree_cap.
std::string series_to_json(const TruncatedSeries& f);
TruncatedSeries series_from_json(const std::string& text);

}  // namespace polydisc
