#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "polydisc/entire_factor.hpp"

using namespace polydisc;

namespace {

Evaluator exp_of_polynomial(const TruncatedSeries& p, std::string name = "e^p") {
  Evaluator ev;
  ev.n = p.n();
  ev.name = std::move(name);
  ev.value = [p](std::span<const cplx> z) { return std::exp(series_eval(p, z)); };
  ev.log_abs = [p](std::span<const cplx> z) { return series_eval(p, z).real(); };
  return ev;
}

TruncatedSeries random_poly(int n, int deg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  Truncation tr(n, deg);
  TruncatedSeries p(tr);
  for (auto& c : p.coeffs()) c = cplx(box(rng), box(rng));
  return p;
}

double coeff_error(const TruncatedSeries& fitted, const TruncatedSeries& truth) {
  double e = 0.0;
  const Truncation& tr = fitted.trunc();
  for (int r = 0; r < tr.basis_size(); ++r) {
    cplx t = tr.index(r).total_degree() <= truth.degree_cap()
                 ? truth.coeff(tr.index(r))
                 : cplx(0.0);
    e = std::max(e, std::abs(fitted.coeff_at_rank(r) - t));
  }
  return e;
}

}  // namespace

TEST_CASE("log along a ray recovers linear exponents") {
  Truncation tr(1, 1);
  TruncatedSeries p = TruncatedSeries::coordinate(tr, 0);  // p = z
  Evaluator F = exp_of_polynomial(p);
  std::vector<cplx> ray = {cplx(1.0)};
  LogBranch br = log_along_ray(F, ray, 20);
  for (size_t j = 0; j < br.lambdas.size(); ++j)
    CHECK(std::abs(br.values[j] - cplx(br.lambdas[j])) < 1e-10);
}

TEST_CASE("branch anchored at the principal log of F(0)") {
  // F = e^{2 pi i + z} has the same values as e^z; the anchor forces G(0) = 0
  Evaluator F;
  F.n = 1;
  F.value = [](std::span<const cplx> z) {
    return std::exp(cplx(0.0, 2.0 * std::numbers::pi) + z[0]);
  };
  std::vector<cplx> ray = {cplx(1.0)};
  LogBranch br = log_along_ray(F, ray, 20);
  CHECK(std::abs(br.values.front()) < 1e-12);
  CHECK(std::abs(br.values.back() - cplx(1.0)) < 1e-10);
}

TEST_CASE("coarse steps on e^{z^2} trip the guard, fine steps pass") {
  Truncation tr(1, 2);
  TruncatedSeries p = TruncatedSeries::monomial(tr, MultiIndex({2}));
  Evaluator F = exp_of_polynomial(p);
  std::vector<cplx> ray = {cplx(3.0)};  // G(1) = 9 along the ray
  LogBranch fine = log_along_ray(F, ray, 10);
  CHECK(std::abs(fine.values.back() - cplx(9.0)) < 1e-9);
  CHECK_THROWS_AS(log_along_ray(F, ray, 2), Error);
  try {
    log_along_ray(F, ray, 2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StepTooCoarse);
  }
}

TEST_CASE("ray hitting a zero reports the non-vanishing violation") {
  Evaluator F;
  F.n = 1;
  F.value = [](std::span<const cplx> z) { return z[0] - 0.5; };
  std::vector<cplx> ray = {cplx(1.0)};
  CHECK_THROWS_AS(log_along_ray(F, ray, 10), Error);
  try {
    log_along_ray(F, ray, 10);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonVanishingViolation);
  }
}

TEST_CASE("branch values agree across step refinements") {
  std::mt19937_64 rng(7);
  TruncatedSeries p = random_poly(2, 3, rng);
  Evaluator F = exp_of_polynomial(p);
  std::vector<cplx> ray = {cplx(0.8, 0.2), cplx(-0.5, 0.4)};
  LogBranch a = log_along_ray(F, ray, 100);
  LogBranch b = log_along_ray(F, ray, 1000);
  CHECK(std::abs(a.values.back() - b.values.back()) < 1e-9);
}

TEST_CASE("recover_exponent round trips constructed exponents") {
  TruncatedSeries p(Truncation(1, 2));
  p.set_coeff(MultiIndex({0}), 1.0);
  p.set_coeff(MultiIndex({1}), 2.0);
  p.set_coeff(MultiIndex({2}), 3.0);
  ExponentRecovery rec = recover_exponent(exp_of_polynomial(p), 1, 2);
  CHECK(coeff_error(rec.p, p) < 1e-8);
  CHECK(rec.max_tail < 1e-8);
  CHECK(rec.certificate_consistent);
  CHECK(rec.holdout_rel < 1e-7);
}

TEST_CASE("recover_exponent handles the mixed two-variable coefficient") {
  Truncation tr(2, 2);
  TruncatedSeries p = TruncatedSeries::monomial(tr, MultiIndex({1, 1}));
  ExponentRecovery rec = recover_exponent(exp_of_polynomial(p), 2, 2);
  CHECK(std::abs(rec.p.coeff(MultiIndex({1, 1})) - cplx(1.0)) < 1e-8);
  CHECK(std::abs(rec.p.coeff(MultiIndex({1, 0}))) < 1e-8);
  CHECK(std::abs(rec.p.coeff(MultiIndex({0, 1}))) < 1e-8);
  CHECK(rec.max_tail < 1e-8);
}

TEST_CASE("random polynomial exponents round trip across dimensions") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 12; ++trial) {
    int n = 1 + trial % 3;
    int m = 1 + trial % 4;
    TruncatedSeries p = random_poly(n, m, rng);
    RecoveryOptions opts;
    opts.seed = 1000 + trial;
    ExponentRecovery rec = recover_exponent(exp_of_polynomial(p), n, m, opts);
    CHECK(coeff_error(rec.p, p) < 1e-8);
    CHECK(rec.max_tail < 1e-8);
    CHECK(rec.holdout_rel < 1e-7);
  }
}

TEST_CASE("declared growth exponent below the truth is refuted") {
  // F = e^{z^3} with m = 2: the degree-3 homogeneous tail reads ~1
  Truncation tr(1, 3);
  TruncatedSeries p = TruncatedSeries::monomial(tr, MultiIndex({3}));
  ExponentRecovery rec = recover_exponent(exp_of_polynomial(p), 1, 2);
  CHECK(rec.max_tail > 0.5);
  CHECK(rec.max_tail < 2.0);
  CHECK_FALSE(rec.certificate_consistent);
}

TEST_CASE("one-variable restriction of a multivariate fit") {
  // restricting the fitted exponent to a ray matches a one-variable fit of
  // g_z(lambda) = G(lambda z)
  std::mt19937_64 rng(17);
  TruncatedSeries p = random_poly(2, 2, rng);
  ExponentRecovery rec = recover_exponent(exp_of_polynomial(p), 2, 2);
  std::vector<cplx> dir = {cplx(0.7, 0.1), cplx(-0.4, 0.5)};

  // one-variable evaluator g(lambda) = F(lambda * dir)
  Evaluator g;
  g.n = 1;
  g.value = [&](std::span<const cplx> lam) {
    std::vector<cplx> z = {lam[0] * dir[0], lam[0] * dir[1]};
    return std::exp(series_eval(p, z));
  };
  ExponentRecovery rec1 = recover_exponent(g, 1, 2);
  // compare coefficients of lambda^k: restriction of rec.p along dir
  for (int k = 0; k <= 2; ++k) {
    cplx restricted = 0.0;
    const Truncation& tr2 = rec.p.trunc();
    for (int r = 0; r < tr2.basis_size(); ++r) {
      const MultiIndex& a = tr2.index(r);
      if (a.total_degree() != k) continue;
      cplx mono = rec.p.coeff_at_rank(r);
      for (int i = 0; i < 2; ++i)
        for (int t = 0; t < a[i]; ++t) mono *= dir[i];
      restricted += mono;
    }
    CHECK(std::abs(restricted - rec1.p.coeff(MultiIndex({k}))) < 1e-7);
  }
}

TEST_CASE("check_growth on worked examples") {
  Truncation tr(1, 2);
  std::vector<double> radii = {1.0, 2.0, 4.0};

  TruncatedSeries z = TruncatedSeries::coordinate(tr, 0);
  GrowthCertificate ok = check_growth(exp_of_polynomial(z), 1.0, 1.0, 1, radii);
  CHECK(ok.pass);  // |e^z| <= e^r

  TruncatedSeries z2 = TruncatedSeries::monomial(tr, MultiIndex({2}));
  GrowthCertificate bad = check_growth(exp_of_polynomial(z2), 1.0, 1.0, 1, radii);
  CHECK_FALSE(bad.pass);
  CHECK(bad.radius_pass.front());  // e^{r^2} <= e^r only fails past r = 1
  CHECK_FALSE(bad.radius_pass.back());

  Evaluator c5;
  c5.n = 1;
  c5.value = [](std::span<const cplx>) { return cplx(5.0); };
  GrowthCertificate cc = check_growth(c5, 5.0, 0.5, 0, radii);
  CHECK(cc.pass);
}

TEST_CASE("fitted exponents satisfy the a-priori modulus bound") {
  std::mt19937_64 rng(23);
  TruncatedSeries p = random_poly(1, 2, rng);
  ExponentRecovery rec = recover_exponent(exp_of_polynomial(p), 1, 2);

  // a growth certificate for e^p: |F| <= e^{|p| sup} <= A e^{B r^2}
  double csum = 0.0;
  for (const cplx& c : p.coeffs()) csum += std::abs(c);
  GrowthCertificate cert =
      check_growth(exp_of_polynomial(p), std::exp(csum), csum, 2,
                   std::vector<double>{0.5, 1.0, 2.0});
  CHECK(cert.pass);

  std::vector<std::vector<cplx>> pts;
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  for (int t = 0; t < 50; ++t) pts.push_back({cplx(box(rng), box(rng))});
  CHECK(exponent_bound_violation(rec.p, std::exp(csum), csum, 2, pts) == 0.0);
}
