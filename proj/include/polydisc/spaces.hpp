#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polydisc/series.hpp"

namespace polydisc {

enum class SpaceKind { HardyH2, DirichletAlpha, DruryArveson };

// A coefficient-weight rule on the monomial basis. Induces norms, inner
// products, Gram matrices and shift norms.
//   HardyH2:        weight(alpha) = 1
//   DirichletAlpha: weight(alpha) = ((alpha_1+1)...(alpha_n+1))^alpha
//   DruryArveson:   weight(alpha) = alpha! / |alpha|!
class SpaceSpec {
 public:
  SpaceSpec() : SpaceSpec(SpaceKind::HardyH2, 1, 0.0) {}

  static SpaceSpec hardy_h2(int n);
  static SpaceSpec dirichlet(int n, double alpha);
  static SpaceSpec drury_arveson(int n);

  // CLI/config string form: "h2:n=2", "dirichlet:n=2:alpha=1.0", "drury:n=3"
  static SpaceSpec parse(const std::string& text);
  std::string to_string() const;

  SpaceKind kind() const { return kind_; }
  int n() const { return n_; }
  double alpha() const { return alpha_; }

  double weight(const MultiIndex& a) const;

 private:
  SpaceSpec(SpaceKind kind, int n, double alpha) : kind_(kind), n_(n), alpha_(alpha) {}
  SpaceKind kind_;
  int n_;
  double alpha_ = 0.0;
};

// ||f|| = sqrt(sum weight(alpha) |fhat(alpha)|^2); exact for polynomials
// within the cap.
double space_norm(const SpaceSpec& spec, const TruncatedSeries& f);

// <f, g> = sum weight(alpha) fhat(alpha) conj(ghat(alpha))
cplx space_inner(const SpaceSpec& spec, const TruncatedSeries& f,
                 const TruncatedSeries& g);

// operator norm of S_i restricted to the truncated basis:
// max over |alpha| <= cap of sqrt(weight(alpha+e_i)/weight(alpha))
std::vector<double> shift_norms(const SpaceSpec& spec, const Truncation& trunc);

struct GramMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXcd entries;  // G_{jk} = <b_j, b_k>
};

GramMatrix gram(const SpaceSpec& spec, std::span<const TruncatedSeries> basis,
                std::span<const std::string> labels = {});

// row-major CSV with a header of basis labels; complex entries as re+imi
std::string gram_to_csv(const GramMatrix& g);

// Uniform tensor-product trapezoid rule on the n-torus of radius r:
// nodes (r e^{2 pi i j_1 / K}, ..., r e^{2 pi i j_n / K}). Exact on trig
// polynomials of per-variable degree < K.
class QuadratureRule {
 public:
  QuadratureRule(int n, int points_per_circle, double radius);

  int n() const { return n_; }
  int points_per_circle() const { return K_; }
  double radius() const { return r_; }
  long node_count() const;

  // visits nodes in row-major order over (j_1, ..., j_n)
  template <typename F>
  void for_each_node(F&& fn) const {
    std::vector<int> j(n_, 0);
    std::vector<cplx> z(n_);
    for (;;) {
      for (int i = 0; i < n_; ++i) z[i] = r_ * unit_[j[i]];
      fn(std::span<const cplx>(z));
      int i = n_ - 1;
      while (i >= 0 && ++j[i] == K_) j[i--] = 0;
      if (i < 0) break;
    }
  }

  QuadratureRule with_radius(double r) const { return QuadratureRule(n_, K_, r); }

 private:
  int n_;
  int K_;
  double r_;
  std::vector<cplx> unit_;  // K-th roots of unity
};

// (K^{-n} sum_nodes |f(node)|^p)^{1/p}, the M_p(r, f) approximation
double p_mean(const QuadratureRule& rule, const TruncatedSeries& f, double p);

// coefficient-side value of the 2-mean at radius r:
// sqrt(sum |fhat(alpha)|^2 r^{2|alpha|})
double coefficient_two_mean(const TruncatedSeries& f, double r);

// The p != 2 norm exists here only through quadrature means along a
// radius schedule; the sup over r is reported as the value at the
// largest radius together with a monotonicity flag.
struct PMeanReport {
  double p = 2.0;
  std::vector<double> radii;
  std::vector<double> values;
  bool monotone = true;      // nondecreasing in r within 1e-12
  double sup_estimate = 0.0;  // value at the largest radius
};

PMeanReport p_mean_schedule(const TruncatedSeries& f, double p,
                            std::span<const double> radii, int points_per_circle);

// default K for a given cap: smallest power of two exceeding 2*cap
int default_points_per_circle(int degree_cap);

}  // namespace polydisc
