#pragma once

#include <cstdint>
#include <vector>

#include "polydisc/errors.hpp"

namespace polydisc {

// Exponent tuple alpha = (alpha_1, ..., alpha_n), all entries >= 0.
// Basis enumeration everywhere follows graded lexicographic order:
// first by |alpha|, ties broken by ascending lexicographic comparison
// of the entry tuples.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  static MultiIndex zero(int n);
  static MultiIndex unit(int n, int i);

  int n() const { return static_cast<int>(entries_.size()); }
  int operator[](int i) const { return entries_[i]; }
  const std::vector<int>& entries() const { return entries_; }

  int total_degree() const;
  double factorial() const;  // alpha! as double (exact up to 2^53)

  MultiIndex plus(const MultiIndex& other) const;
  MultiIndex plus_unit(int i) const;

  bool operator==(const MultiIndex& other) const { return entries_ == other.entries_; }
  // graded-lex
  bool operator<(const MultiIndex& other) const;

 private:
  std::vector<int> entries_;
};

// Truncation scope: n variables, all total degrees <= degree_cap retained.
// Basis size is C(degree_cap + n, n).
class Truncation {
 public:
  Truncation() = default;
  Truncation(int n, int degree_cap);

  int n() const { return n_; }
  int degree_cap() const { return cap_; }
  int basis_size() const { return static_cast<int>(indices_.size()); }

  // graded-lex position of alpha among all indices with |alpha| <= cap
  int rank(const MultiIndex& alpha) const;
  const MultiIndex& index(int rank) const { return indices_[rank]; }
  const std::vector<MultiIndex>& indices() const { return indices_; }

  bool operator==(const Truncation& other) const {
    return n_ == other.n_ && cap_ == other.cap_;
  }

 private:
  int n_ = 0;
  int cap_ = 0;
  std::vector<MultiIndex> indices_;
};

// C(n, k) as double; exact while below 2^53
double binomial(int n, int k);

// number of n-tuples of non-negative integers summing to exactly d
double composition_count(int d, int n);

}  // namespace polydisc
