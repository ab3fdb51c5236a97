#include "polydisc/multiindex.hpp"

#include <algorithm>
#include <cmath>

namespace polydisc {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  if (entries_.empty())
    throw Error(ErrorCode::InvalidArgument, "MultiIndex needs n >= 1");
  for (int e : entries_)
    if (e < 0)
      throw Error(ErrorCode::InvalidArgument, "MultiIndex entries must be >= 0");
}

MultiIndex MultiIndex::zero(int n) { return MultiIndex(std::vector<int>(n, 0)); }

MultiIndex MultiIndex::unit(int n, int i) {
  std::vector<int> e(n, 0);
  e.at(i) = 1;
  return MultiIndex(std::move(e));
}

int MultiIndex::total_degree() const {
  int s = 0;
  for (int e : entries_) s += e;
  return s;
}

double MultiIndex::factorial() const {
  double f = 1.0;
  for (int e : entries_)
    for (int k = 2; k <= e; ++k) f *= k;
  return f;
}

MultiIndex MultiIndex::plus(const MultiIndex& other) const {
  if (n() != other.n())
    throw Error(ErrorCode::DimensionMismatch, "MultiIndex dimension mismatch");
  std::vector<int> e(entries_);
  for (int i = 0; i < n(); ++i) e[i] += other.entries_[i];
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::plus_unit(int i) const {
  std::vector<int> e(entries_);
  e.at(i) += 1;
  return MultiIndex(std::move(e));
}

bool MultiIndex::operator<(const MultiIndex& other) const {
  int da = total_degree(), db = other.total_degree();
  if (da != db) return da < db;
  return entries_ < other.entries_;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

double composition_count(int d, int n) { return binomial(d + n - 1, n - 1); }

namespace {
// enumerate all compositions of degree d into n parts in ascending lex order
void enumerate_degree(int d, int n, std::vector<int>& prefix,
                      std::vector<MultiIndex>& out) {
  if (n == 1) {
    prefix.push_back(d);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int v = 0; v <= d; ++v) {
    prefix.push_back(v);
    enumerate_degree(d - v, n - 1, prefix, out);
    prefix.pop_back();
  }
}
}  // namespace

Truncation::Truncation(int n, int degree_cap) : n_(n), cap_(degree_cap) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "Truncation needs n >= 1");
  if (degree_cap < 0)
    throw Error(ErrorCode::InvalidArgument, "Truncation needs degree_cap >= 0");
  double size = binomial(degree_cap + n, n);
  if (size > double(1 << 22))
    throw Error(ErrorCode::InvalidArgument, "Truncation basis too large");
  indices_.reserve(static_cast<size_t>(size));
  std::vector<int> prefix;
  for (int d = 0; d <= degree_cap; ++d) enumerate_degree(d, n, prefix, indices_);
}

int Truncation::rank(const MultiIndex& alpha) const {
  if (alpha.n() != n_)
    throw Error(ErrorCode::DimensionMismatch, "rank: variable count mismatch");
  int d = alpha.total_degree();
  if (d > cap_)
    throw Error(ErrorCode::DegreeOverflow, "rank: index beyond degree cap");
  // indices of lower total degree come first
  double offset = (d == 0) ? 0.0 : binomial(d - 1 + n_, n_);
  // lex rank within the degree-d block
  double within = 0.0;
  int rem = d;
  for (int i = 0; i + 1 < n_; ++i) {
    for (int v = 0; v < alpha[i]; ++v)
      within += composition_count(rem - v, n_ - i - 1);
    rem -= alpha[i];
  }
  return static_cast<int>(offset + within);
}

}  // namespace polydisc
