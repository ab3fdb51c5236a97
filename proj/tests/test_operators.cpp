#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "polydisc/functionals.hpp"
#include "polydisc/operators.hpp"

using namespace polydisc;

namespace {

TruncatedSeries random_series(const Truncation& tr, std::mt19937_64& rng,
                              double scale = 1.0) {
  std::uniform_real_distribution<double> box(-scale, scale);
  TruncatedSeries f(tr);
  for (auto& c : f.coeffs()) c = cplx(box(rng), box(rng));
  return f;
}

// random weight/symbol pair with a(0) away from zero and symbols well
// inside the polydisc
WCOSpec random_wco(const Truncation& cod_tr, int n, std::mt19937_64& rng) {
  WCOSpec spec;
  spec.a = random_series(cod_tr, rng, 0.5);
  spec.a.coeffs()[0] = cplx(1.0, 0.0) + 0.3 * spec.a.coeff_at_rank(0);
  for (int i = 0; i < n; ++i) {
    TruncatedSeries bi = random_series(cod_tr, rng, 0.2);
    bi *= cplx(1.0 / cod_tr.basis_size());
    bi.coeffs()[0] = 0.3 * bi.coeff_at_rank(0);
    spec.b.push_back(bi);
  }
  return spec;
}

double spec_distance(const WCOSpec& x, const WCOSpec& y) {
  double d = 0.0;
  for (int r = 0; r < x.a.trunc().basis_size(); ++r)
    d = std::max(d, std::abs(x.a.coeff_at_rank(r) - y.a.coeff_at_rank(r)));
  for (size_t i = 0; i < x.b.size(); ++i)
    for (int r = 0; r < x.b[i].trunc().basis_size(); ++r)
      d = std::max(d, std::abs(x.b[i].coeff_at_rank(r) - y.b[i].coeff_at_rank(r)));
  return d;
}

}  // namespace

TEST_CASE("shift matrix is the flagged subdiagonal") {
  Truncation tr(1, 2);
  OperatorMatrix s = shift_matrix(0, tr, SpaceSpec::hardy_h2(1));
  CHECK(s.entries()(1, 0) == cplx(1.0));
  CHECK(s.entries()(2, 1) == cplx(1.0));
  CHECK(s.entries()(0, 0) == cplx(0.0));
  CHECK(s.entries().col(2).norm() == 0.0);  // z^2 -> z^3 dropped
  CHECK(s.truncated_columns() == std::vector<int>{2});
}

TEST_CASE("multiplier matrix column for 1 + z") {
  Truncation tr(1, 3);
  TruncatedSeries phi = TruncatedSeries::constant(tr, 1.0) +
                        TruncatedSeries::coordinate(tr, 0);
  OperatorMatrix m = multiplier_matrix(phi, tr, SpaceSpec::hardy_h2(1));
  CHECK(m.codomain().trunc.degree_cap() == 4);  // exact by default
  CHECK(m.truncated_columns().empty());
  TruncatedSeries col = m.column_series(0);
  CHECK(col.coeff(MultiIndex({0})) == cplx(1.0));
  CHECK(col.coeff(MultiIndex({1})) == cplx(1.0));
  CHECK(col.coeff(MultiIndex({2})) == cplx(0.0));
}

TEST_CASE("operator norm estimate matches shift norms") {
  for (const SpaceSpec& spec : {SpaceSpec::hardy_h2(1), SpaceSpec::dirichlet(1, 1.0)}) {
    Truncation tr(1, 6);
    OperatorMatrix s =
        shift_matrix(0, tr, spec, Truncation(1, 7));  // exact, no dropped column
    double expect = shift_norms(spec, tr)[0];
    CHECK(std::abs(s.norm_estimate() - expect) < 1e-12);
  }
}

TEST_CASE("multiplier matrices compose multiplicatively") {
  std::mt19937_64 rng(5);
  Truncation tr(2, 3);
  SpaceSpec spec = SpaceSpec::hardy_h2(2);
  TruncatedSeries phi = random_series(Truncation(2, 2), rng);
  TruncatedSeries psi = random_series(Truncation(2, 2), rng);
  // working caps sized so every product is exact
  Truncation mid(2, 5), out(2, 7);
  OperatorMatrix m_psi = multiplier_matrix(psi.embedded(3), tr, spec, mid);
  OperatorMatrix m_phi = multiplier_matrix(phi.embedded(5), mid, spec, out);
  OperatorMatrix m_prod =
      multiplier_matrix(series_mul(phi.embedded(4), psi.embedded(4)), tr, spec, out);
  double diff = (m_phi.entries() * m_psi.entries() - m_prod.entries()).norm();
  CHECK(diff < 1e-12);
}

TEST_CASE("wco matrix identity and worked columns") {
  Truncation tr(1, 4);
  SpaceSpec h2 = SpaceSpec::hardy_h2(1);
  {
    WCOSpec spec;
    spec.a = TruncatedSeries::constant(tr, 1.0);
    spec.b = {TruncatedSeries::coordinate(tr, 0)};
    OperatorMatrix t = wco_matrix(spec, {tr, h2}, {tr, h2});
    CHECK((t.entries() - Eigen::MatrixXcd::Identity(5, 5)).norm() < 1e-14);
  }
  {
    // a = 1 + z/2, b = z^2: column of z1 is z^2 + z^3/2
    WCOSpec spec;
    spec.a = TruncatedSeries::constant(tr, 1.0) +
             TruncatedSeries::coordinate(tr, 0) * cplx(0.5);
    spec.b = {TruncatedSeries::monomial(tr, MultiIndex({2}))};
    OperatorMatrix t = wco_matrix(spec, {tr, h2}, {tr, h2});
    TruncatedSeries col = t.column_series(1);
    CHECK(std::abs(col.coeff(MultiIndex({2})) - cplx(1.0)) < 1e-14);
    CHECK(std::abs(col.coeff(MultiIndex({3})) - cplx(0.5)) < 1e-14);
  }
}

TEST_CASE("rudin operator column for z1 z2 is (1+z)^2/4") {
  auto t = named_operator("rudin", 4);
  REQUIRE(t.has_value());
  int j = t->domain().trunc.rank(MultiIndex({1, 1}));
  TruncatedSeries col = t->column_series(j);
  CHECK(std::abs(col.coeff(MultiIndex({0})) - cplx(0.25)) < 1e-14);
  CHECK(std::abs(col.coeff(MultiIndex({1})) - cplx(0.5)) < 1e-14);
  CHECK(std::abs(col.coeff(MultiIndex({2})) - cplx(0.25)) < 1e-14);
}

TEST_CASE("recover_wco round trips random weighted compositions") {
  std::mt19937_64 rng(11);
  Truncation dom(2, 5), cod(2, 5);
  SpaceSpec h2 = SpaceSpec::hardy_h2(2);
  for (int trial = 0; trial < 25; ++trial) {
    WCOSpec spec = random_wco(cod, 2, rng);
    OperatorMatrix t = wco_matrix(spec, {dom, h2}, {cod, h2});
    WCOSpec rec = recover_wco(t);
    CHECK(spec_distance(spec, rec) < 1e-12);
    CHECK(verify_wco(t, rec).max_defect < 1e-11);
  }
}

TEST_CASE("recover_wco rejects the shift") {
  Truncation tr(1, 4);
  OperatorMatrix s = shift_matrix(0, tr, SpaceSpec::hardy_h2(1));
  CHECK_THROWS_AS(recover_wco(s), Error);
  try {
    recover_wco(s);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("origin") != std::string::npos);
  }
}

TEST_CASE("averaging operator is rejected with defect exactly 1/4") {
  auto t = named_operator("average", 6);
  REQUIRE(t.has_value());
  WCOSpec rec = recover_wco(*t);
  // recovered weight 1 and symbol 0
  CHECK(std::abs(rec.a.coeff(MultiIndex({0})) - cplx(1.0)) < 1e-14);
  CHECK(rec.b[0].max_abs_coeff() < 1e-14);
  WcoVerification v = verify_wco(*t, rec);
  CHECK(std::abs(v.max_defect - 0.25) < 1e-14);  // || z^2/4 ||
  CHECK(v.worst_column == 2);
}

TEST_CASE("verify_wco under small perturbations reports the band") {
  std::mt19937_64 rng(13);
  Truncation tr(1, 5);
  SpaceSpec h2 = SpaceSpec::hardy_h2(1);
  WCOSpec spec = random_wco(tr, 1, rng);
  OperatorMatrix t = wco_matrix(spec, {tr, h2}, {tr, h2});
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  for (Eigen::Index c = 0; c < t.entries().cols(); ++c)
    for (Eigen::Index r = 0; r < t.entries().rows(); ++r)
      t.entries()(r, c) += 1e-6 * cplx(box(rng), box(rng));
  double defect = verify_wco(t, recover_wco(t)).max_defect;
  CHECK(defect >= 1e-7);
  CHECK(defect <= 1e-4);
}

TEST_CASE("exp_probe positive on clean WCOs, witnesses vanishing weights") {
  std::mt19937_64 rng(17);
  Truncation tr(1, 16);
  SpaceSpec h2 = SpaceSpec::hardy_h2(1);

  WCOSpec spec;
  spec.a = TruncatedSeries::constant(tr, 1.0) +
           TruncatedSeries::coordinate(tr, 0) * cplx(0.4);
  spec.b = {TruncatedSeries::coordinate(tr, 0) * cplx(0.5)};
  OperatorMatrix good = wco_matrix(spec, {tr, h2}, {tr, h2});
  std::vector<std::vector<cplx>> ws = {{cplx(0.0)}, {cplx(1.0)}, {cplx(0.0, 1.5)}};
  for (const auto& res : exp_probe(good, ws)) {
    CHECK_FALSE(res.witness);
    CHECK(res.min_abs > 1e-6);
  }

  // shift operator: T(e^{0 z}) = T(1) = z vanishes at the origin node
  OperatorMatrix s = shift_matrix(0, tr, h2);
  std::vector<std::vector<cplx>> w0 = {{cplx(0.0)}};
  auto probe = exp_probe(s, w0);
  REQUIRE(probe.size() == 1);
  CHECK(probe[0].witness);
  CHECK(probe[0].min_abs == 0.0);
  CHECK(probe[0].argmin_node == std::vector<cplx>{cplx(0.0)});
}

TEST_CASE("exp_probe catches the cosh zero of the averaging operator") {
  auto t = named_operator("average", 24);
  REQUIRE(t.has_value());
  // T(e^{w z}) = cosh(w z / 2): place the zero on a probe node:
  // w z / 2 = i pi / 2 at z = 0.95 needs w = i pi / 0.95
  ExpProbeOptions opts;
  opts.radii = {0.25, 0.5, 0.75, 0.95};
  std::vector<std::vector<cplx>> ws = {{cplx(0.0, std::numbers::pi / 0.95)}};
  auto probe = exp_probe(*t, ws, opts);
  REQUIRE(probe.size() == 1);
  CHECK(probe[0].witness);
  // and the same w on a grid missing the zero: no witness
  ExpProbeOptions miss;
  miss.radii = {0.25, 0.5};
  auto probe2 = exp_probe(*t, ws, miss);
  CHECK_FALSE(probe2[0].witness);
}

TEST_CASE("exp_probe cap guard") {
  Truncation tr(1, 4);
  OperatorMatrix s = shift_matrix(0, tr, SpaceSpec::hardy_h2(1));
  std::vector<std::vector<cplx>> w = {{cplx(30.0)}};
  CHECK_THROWS_AS(exp_probe(s, w), Error);
}

TEST_CASE("exp_probe positivity implied by verified WCO structure") {
  std::mt19937_64 rng(29);
  Truncation tr(1, 16);
  SpaceSpec h2 = SpaceSpec::hardy_h2(1);
  ExpProbeOptions opts;
  std::vector<std::vector<cplx>> ws = {{cplx(0.3, 0.2)}, {cplx(-1.0, 0.5)}};
  for (int trial = 0; trial < 10; ++trial) {
    WCOSpec spec = random_wco(tr, 1, rng);
    OperatorMatrix t = wco_matrix(spec, {tr, h2}, {tr, h2});
    if (verify_wco(t, recover_wco(t)).max_defect > 1e-11) continue;
    // weight bounded away from zero on nodes?
    double amin = std::numeric_limits<double>::infinity();
    bool b_ok = true;
    for (double r : opts.radii) {
      QuadratureRule rule(1, opts.points_per_circle, r);
      rule.for_each_node([&](std::span<const cplx> z) {
        amin = std::min(amin, std::abs(series_eval(spec.a, z)));
        b_ok = b_ok && std::abs(series_eval(spec.b[0], z)) < 1.0;
      });
    }
    std::vector<cplx> origin = {cplx(0.0)};
    amin = std::min(amin, std::abs(series_eval(spec.a, origin)));
    if (amin < 1e-6 || !b_ok) continue;
    for (const auto& res : exp_probe(t, ws, opts)) CHECK_FALSE(res.witness);
  }
}

TEST_CASE("composition bound check") {
  std::mt19937_64 rng(31);
  // b(0) = 0: the bound collapses to 1
  Truncation tb(1, 2);
  TruncatedSeries b0 = TruncatedSeries::coordinate(tb, 0) * cplx(0.5);
  std::vector<TruncatedSeries> samples;
  for (int t = 0; t < 20; ++t) samples.push_back(random_series(Truncation(1, 4), rng));
  for (double p : {1.0, 2.0, 4.0}) {
    CompositionBoundReport rep = composition_bound_check(b0, p, samples);
    CHECK(rep.bound == 1.0);
    CHECK(rep.pass);
    CHECK(rep.max_ratio <= 1.0 + 1e-3);
  }

  // |b(0)| = 1/2, p = 2: bound sqrt(3)
  TruncatedSeries bh = TruncatedSeries::coordinate(tb, 0) * cplx(0.4) +
                       TruncatedSeries::constant(tb, 0.5);
  CompositionBoundReport rep = composition_bound_check(bh, 2.0, samples);
  CHECK(std::abs(rep.bound - std::sqrt(3.0)) < 1e-14);
  CHECK(rep.pass);

  // constants compose to ratio 1
  std::vector<TruncatedSeries> consts = {
      TruncatedSeries::constant(Truncation(1, 1), cplx(2.0, -1.0))};
  CompositionBoundReport crep = composition_bound_check(bh, 2.0, consts);
  CHECK(crep.max_ratio <= 1.0 + 1e-12);

  TruncatedSeries outside = TruncatedSeries::constant(tb, 1.5);
  CHECK_THROWS_AS(composition_bound_check(outside, 2.0, samples), Error);
}

TEST_CASE("two-variable symbol into one variable respects the bound") {
  std::mt19937_64 rng(37);
  // b(z1, z2) = (z1 + z2)/4 + 1/5 maps the bidisc into the disc
  Truncation tb(2, 1);
  TruncatedSeries b = (TruncatedSeries::coordinate(tb, 0) +
                       TruncatedSeries::coordinate(tb, 1)) *
                          cplx(0.25) +
                      TruncatedSeries::constant(tb, 0.2);
  std::vector<TruncatedSeries> samples;
  for (int t = 0; t < 10; ++t) samples.push_back(random_series(Truncation(1, 3), rng));
  CompositionBoundReport rep = composition_bound_check(b, 2.0, samples);
  CHECK(rep.pass);
}

TEST_CASE("cyclicity preservation suite: clean WCO has no violations") {
  Truncation tr(1, 12);
  SpaceSpec h2 = SpaceSpec::hardy_h2(1);
  WCOSpec spec;
  spec.a = TruncatedSeries::constant(tr, 1.0);
  spec.b = {TruncatedSeries::coordinate(tr, 0) * cplx(0.5)};
  OperatorMatrix t = wco_matrix(spec, {tr, h2}, {tr, h2});
  PreservationReport rep = cyclicity_preservation_suite(t, 6);
  CHECK(rep.wco_structure);
  CHECK(rep.weight_cyclic_consistent);
  CHECK(rep.violations == 0);
  CHECK(rep.codomain_hardy);
}

TEST_CASE("cyclicity preservation suite: averaging operator violates") {
  auto t = named_operator("average", 24);
  REQUIRE(t.has_value());
  PreservationReport rep = cyclicity_preservation_suite(*t, 10);
  CHECK_FALSE(rep.wco_structure);
  CHECK(rep.violations >= 1);  // e^{cz} maps to an even function with a plateau
}

TEST_CASE("rudin operator maps cyclic family members to cyclic images") {
  auto t = named_operator("rudin", 12);
  REQUIRE(t.has_value());
  PreservationReport rep = cyclicity_preservation_suite(*t, 6);
  CHECK(rep.wco_structure);
  CHECK(rep.violations == 0);
}

TEST_CASE("operator JSON round trip") {
  std::mt19937_64 rng(41);
  Truncation tr(2, 3);
  SpaceSpec da = SpaceSpec::drury_arveson(2);
  WCOSpec spec = random_wco(tr, 2, rng);
  OperatorMatrix t = wco_matrix(spec, {tr, da}, {tr, da});
  OperatorMatrix back = operator_from_json(operator_to_json(t));
  CHECK((back.entries() - t.entries()).norm() == 0.0);
  CHECK(back.domain().spec.kind() == SpaceKind::DruryArveson);
  CHECK(back.codomain().trunc.degree_cap() == 3);
  CHECK_THROWS_AS(operator_from_json("{}"), Error);
}

TEST_CASE("multiplier norms and action carry to the maximal-domain extension") {
  // Dirichlet alpha = 2 admits bounded point evaluation at the rim, so the
  // extension adds b = 1 to the domain; the identification is an isometry,
  // hence multiplier norms must agree however the same weight rule is
  // presented, and multiplication must act pointwise at the extended point.
  SpaceSpec d2 = SpaceSpec::dirichlet(1, 2.0);
  std::vector<cplx> rim = {cplx(1.0, 0.0)};
  REQUIRE(domain_membership(d2, rim).verdict == MembershipVerdict::Member);

  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  Truncation tr(1, 6);
  for (int trial = 0; trial < 10; ++trial) {
    TruncatedSeries phi(Truncation(1, 3)), f(Truncation(1, 3));
    for (auto& c : phi.coeffs()) c = cplx(box(rng), box(rng));
    for (auto& c : f.coeffs()) c = cplx(box(rng), box(rng));
    // (phi f)(b) = phi(b) f(b) at the extended point (exact for polynomials)
    TruncatedSeries prod = series_mul(phi.embedded(6), f.embedded(6));
    cplx lhs = series_eval(prod, rim);
    cplx rhs = series_eval(phi, rim) * series_eval(f, rim);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }

  // norm equality across presentations of the same weight rule: the
  // H2 space and its alpha = 0 Dirichlet presentation give the same
  // multiplier-norm estimate for every polynomial symbol
  for (int trial = 0; trial < 5; ++trial) {
    TruncatedSeries phi(Truncation(1, 2));
    for (auto& c : phi.coeffs()) c = cplx(box(rng), box(rng));
    OperatorMatrix via_h2 = multiplier_matrix(phi.embedded(6), tr, SpaceSpec::hardy_h2(1));
    OperatorMatrix via_d0 =
        multiplier_matrix(phi.embedded(6), tr, SpaceSpec::dirichlet(1, 0.0));
    CHECK(std::abs(via_h2.norm_estimate() - via_d0.norm_estimate()) < 1e-13);
  }

  // the recovered weight flag distinguishes vanishing weights
  Truncation tw(1, 8);
  SpaceSpec h2 = SpaceSpec::hardy_h2(1);
  WCOSpec vanishing;
  vanishing.a = TruncatedSeries::constant(tw, 0.5) -
                TruncatedSeries::coordinate(tw, 0);  // zero at 1/2
  vanishing.b = {TruncatedSeries::coordinate(tw, 0) * cplx(0.4)};
  OperatorMatrix tv = wco_matrix(vanishing, {tw, h2}, {tw, h2});
  CHECK_FALSE(recover_wco(tv).weight_nonvanishing);

  WCOSpec clean;
  clean.a = TruncatedSeries::constant(tw, 1.0) +
            TruncatedSeries::coordinate(tw, 0) * cplx(0.3);
  clean.b = {TruncatedSeries::coordinate(tw, 0) * cplx(0.4)};
  OperatorMatrix tc = wco_matrix(clean, {tw, h2}, {tw, h2});
  CHECK(recover_wco(tc).weight_nonvanishing);
}
