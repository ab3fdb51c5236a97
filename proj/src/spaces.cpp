#include "polydisc/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace polydisc {

SpaceSpec SpaceSpec::hardy_h2(int n) { return SpaceSpec(SpaceKind::HardyH2, n, 0.0); }

SpaceSpec SpaceSpec::dirichlet(int n, double alpha) {
  return SpaceSpec(SpaceKind::DirichletAlpha, n, alpha);
}

SpaceSpec SpaceSpec::drury_arveson(int n) {
  return SpaceSpec(SpaceKind::DruryArveson, n, 0.0);
}

SpaceSpec SpaceSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) throw Error(ErrorCode::ParseError, "empty space spec");

  auto field = [&](const std::string& key) -> std::string {
    for (size_t i = 1; i < parts.size(); ++i) {
      auto eq = parts[i].find('=');
      if (eq != std::string::npos && parts[i].substr(0, eq) == key)
        return parts[i].substr(eq + 1);
    }
    throw Error(ErrorCode::ParseError, "space spec missing field " + key);
  };

  try {
    if (parts[0] == "h2") return hardy_h2(std::stoi(field("n")));
    if (parts[0] == "dirichlet")
      return dirichlet(std::stoi(field("n")), std::stod(field("alpha")));
    if (parts[0] == "drury") return drury_arveson(std::stoi(field("n")));
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "bad space spec: " + text);
  }
  throw Error(ErrorCode::ParseError, "unknown space kind: " + parts[0]);
}

std::string SpaceSpec::to_string() const {
  std::ostringstream os;
  switch (kind_) {
    case SpaceKind::HardyH2: os << "h2:n=" << n_; break;
    case SpaceKind::DirichletAlpha:
      os << "dirichlet:n=" << n_ << ":alpha=" << alpha_;
      break;
    case SpaceKind::DruryArveson: os << "drury:n=" << n_; break;
  }
  return os.str();
}

double SpaceSpec::weight(const MultiIndex& a) const {
  switch (kind_) {
    case SpaceKind::HardyH2: return 1.0;
    case SpaceKind::DirichletAlpha: {
      double prod = 1.0;
      for (int i = 0; i < a.n(); ++i) prod *= a[i] + 1;
      return std::pow(prod, alpha_);
    }
    case SpaceKind::DruryArveson: {
      // alpha!/|alpha|! = 1/multinomial(|alpha|; alpha); build the
      // multinomial as a product of binomials to stay exact longer
      double multinomial = 1.0;
      int partial = 0;
      for (int i = 0; i < a.n(); ++i) {
        partial += a[i];
        multinomial *= binomial(partial, a[i]);
      }
      return 1.0 / multinomial;
    }
  }
  return 1.0;
}

double space_norm(const SpaceSpec& spec, const TruncatedSeries& f) {
  if (spec.n() != f.n())
    throw Error(ErrorCode::DimensionMismatch, "space_norm: variable count mismatch");
  double s = 0.0;
  const Truncation& tr = f.trunc();
  for (int r = 0; r < tr.basis_size(); ++r) {
    double m = std::abs(f.coeff_at_rank(r));
    if (m != 0.0) s += spec.weight(tr.index(r)) * m * m;
  }
  return std::sqrt(s);
}

cplx space_inner(const SpaceSpec& spec, const TruncatedSeries& f,
                 const TruncatedSeries& g) {
  if (!(f.trunc() == g.trunc()) || spec.n() != f.n())
    throw Error(ErrorCode::DimensionMismatch, "space_inner: scope mismatch");
  cplx s = 0.0;
  const Truncation& tr = f.trunc();
  for (int r = 0; r < tr.basis_size(); ++r) {
    cplx a = f.coeff_at_rank(r);
    cplx b = g.coeff_at_rank(r);
    if (a != cplx(0.0) && b != cplx(0.0))
      s += spec.weight(tr.index(r)) * a * std::conj(b);
  }
  return s;
}

std::vector<double> shift_norms(const SpaceSpec& spec, const Truncation& trunc) {
  std::vector<double> norms(trunc.n(), 0.0);
  for (int r = 0; r < trunc.basis_size(); ++r) {
    const MultiIndex& a = trunc.index(r);
    double wa = spec.weight(a);
    for (int i = 0; i < trunc.n(); ++i) {
      double ratio = spec.weight(a.plus_unit(i)) / wa;
      norms[i] = std::max(norms[i], std::sqrt(ratio));
    }
  }
  return norms;
}

GramMatrix gram(const SpaceSpec& spec, std::span<const TruncatedSeries> basis,
                std::span<const std::string> labels) {
  GramMatrix g;
  const int m = static_cast<int>(basis.size());
  g.entries.resize(m, m);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k <= j; ++k) {
      cplx v = space_inner(spec, basis[j], basis[k]);
      g.entries(j, k) = v;
      g.entries(k, j) = std::conj(v);
    }
  }
  for (int j = 0; j < m; ++j)
    g.labels.push_back(j < static_cast<int>(labels.size()) ? labels[j]
                                                           : "b" + std::to_string(j));
  return g;
}

std::string gram_to_csv(const GramMatrix& g) {
  std::ostringstream os;
  os.precision(17);
  for (size_t j = 0; j < g.labels.size(); ++j)
    os << (j ? "," : "") << g.labels[j];
  os << "\n";
  for (Eigen::Index j = 0; j < g.entries.rows(); ++j) {
    for (Eigen::Index k = 0; k < g.entries.cols(); ++k) {
      cplx v = g.entries(j, k);
      os << (k ? "," : "") << v.real();
      if (v.imag() != 0.0) os << (v.imag() > 0 ? "+" : "") << v.imag() << "i";
    }
    os << "\n";
  }
  return os.str();
}

QuadratureRule::QuadratureRule(int n, int points_per_circle, double radius)
    : n_(n), K_(points_per_circle), r_(radius) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "QuadratureRule: n >= 1");
  if (K_ < 1 || (K_ & (K_ - 1)) != 0)
    throw Error(ErrorCode::InvalidArgument,
                "QuadratureRule: points_per_circle must be a power of two");
  if (!(radius > 0.0))
    throw Error(ErrorCode::InvalidArgument, "QuadratureRule: radius must be > 0");
  unit_.resize(K_);
  for (int j = 0; j < K_; ++j) {
    double th = 2.0 * std::numbers::pi * j / K_;
    unit_[j] = cplx(std::cos(th), std::sin(th));
  }
}

long QuadratureRule::node_count() const {
  long c = 1;
  for (int i = 0; i < n_; ++i) c *= K_;
  return c;
}

double p_mean(const QuadratureRule& rule, const TruncatedSeries& f, double p) {
  if (rule.n() != f.n())
    throw Error(ErrorCode::DimensionMismatch, "p_mean: variable count mismatch");
  if (!(p > 0.0)) throw Error(ErrorCode::InvalidArgument, "p_mean: p must be > 0");
  double acc = 0.0;
  rule.for_each_node([&](std::span<const cplx> z) {
    acc += std::pow(std::abs(series_eval(f, z)), p);
  });
  return std::pow(acc / static_cast<double>(rule.node_count()), 1.0 / p);
}

double coefficient_two_mean(const TruncatedSeries& f, double r) {
  double s = 0.0;
  const Truncation& tr = f.trunc();
  for (int k = 0; k < tr.basis_size(); ++k) {
    double m = std::abs(f.coeff_at_rank(k));
    if (m != 0.0) s += m * m * std::pow(r, 2.0 * tr.index(k).total_degree());
  }
  return std::sqrt(s);
}

PMeanReport p_mean_schedule(const TruncatedSeries& f, double p,
                            std::span<const double> radii, int points_per_circle) {
  if (radii.empty())
    throw Error(ErrorCode::InvalidArgument, "p_mean_schedule: empty radius list");
  PMeanReport rep;
  rep.p = p;
  std::vector<double> sorted(radii.begin(), radii.end());
  std::sort(sorted.begin(), sorted.end());
  for (double r : sorted) {
    rep.radii.push_back(r);
    rep.values.push_back(p_mean(QuadratureRule(f.n(), points_per_circle, r), f, p));
    size_t k = rep.values.size();
    if (k > 1 && rep.values[k - 1] < rep.values[k - 2] - 1e-12) rep.monotone = false;
  }
  rep.sup_estimate = rep.values.back();
  return rep;
}

int default_points_per_circle(int degree_cap) {
  int k = 1;
  while (k <= 2 * degree_cap) k <<= 1;
  return k;
}

}  // namespace polydisc
