#include <doctest.h>

#include "support.hpp"
#include "ttwist/errors.hpp"
#include "ttwist/fixtures.hpp"

using namespace ttwist;
using namespace ttwist::testing;

TEST_CASE("MW complex matches the assembled total differential") {
  for (auto& f : all_fixtures()) {
    CAPTURE(f->name);
    MWComplex mw = mw_complex(f->complex, *f->rep, f->theta);
    Matrix d = total_differential(f->complex, *f->rep, f->theta);
    CHECK(mw.z.d_eo == parity_block(f->complex, f->rep->dim(), d, 1, 0));
    CHECK(mw.z.d_oe == parity_block(f->complex, f->rep->dim(), d, 0, 1));
    CHECK((mw.z.d_oe * mw.z.d_eo).is_zero());
    CHECK((mw.z.d_eo * mw.z.d_oe).is_zero());
    auto [ev, od] = oracle_mw_dims(f->complex, *f->rep, f->theta);
    CHECK(mw.h_even() == ev);
    CHECK(mw.h_odd() == od);
  }
}

TEST_CASE("MW golden dimensions") {
  auto s3 = fixture_s3();
  MWComplex a = mw_complex(s3->complex, *s3->rep, s3->theta);
  CHECK(a.h_even() == 0);
  CHECK(a.h_odd() == 0);
  auto s1s2 = fixture_s1_s2();
  MWComplex b = mw_complex(s1s2->complex, *s1s2->rep, s1s2->theta);
  CHECK(b.h_even() == 1);
  CHECK(b.h_odd() == 1);
}

TEST_CASE("MW obstruction when the cup square of the cocycle is nonzero") {
  std::mt19937_64 rng(71);
  OrderedComplex k = standard_simplex(6);
  Pi1Presentation pi = fundamental_group(k);
  Representation rho = Representation::trivial(k, pi, 1);
  Vector theta;
  Vector square;
  for (int attempt = 0; attempt < 20; ++attempt) {
    theta = cochain_complex(k).d(2) * random_vector(k.count(2), rng);
    square = scalar_cup(k, 3, theta, 3, theta);
    if (!is_zero(square)) break;
  }
  REQUIRE_FALSE(is_zero(square));
  try {
    mw_complex(k, rho, {{3, theta}});
    FAIL("expected an obstruction");
  } catch (const MWObstruction& e) {
    CHECK(e.degree == 6);
    CHECK(e.cochain == square);
  }
  CHECK_THROWS_AS(mw_complex(k, rho, {{2, Vector(k.count(2))}}), InputError);
  CHECK_THROWS_AS(mw_complex(k, rho, {{3, Vector(3)}}), InputError);
}

TEST_CASE("torsion golden values") {
  auto three = fixture_circle_three();
  CHECK_THROWS_AS(reidemeister_torsion(three->complex, *three->rep), Refusal);
  auto minus = fixture_circle_minus();
  TorsionResult t = reidemeister_torsion(minus->complex, *minus->rep);
  CHECK(t.value.coordinate().abs() == Rational(2));
  CHECK(t.up_to_sign);
  auto tri = fixture_delta2();
  TorsionResult u = reidemeister_torsion(tri->complex, *tri->rep);
  CHECK(u.value.coordinate().abs() == Rational(1));
}

TEST_CASE("property: tau_MW matches the independent determinant oracle") {
  for (auto& f : all_fixtures()) {
    CAPTURE(f->name);
    if (!f->rep->unimodular()) continue;
    MWComplex mw = mw_complex(f->complex, *f->rep, f->theta);
    TorsionResult r = tau_mw(mw);
    REQUIRE(r.twisted_bases.has_value());
    CHECK(r.value.coordinate().abs() == oracle_lemma1(mw.z, *r.twisted_bases));
  }
}

TEST_CASE("property: tau_twist equals tau_MW and all routes agree") {
  for (auto& f : all_fixtures()) {
    CAPTURE(f->name);
    if (!f->rep->unimodular()) continue;
    MWComplex mw = mw_complex(f->complex, *f->rep, f->theta);
    TorsionResult untwisted = reidemeister_torsion(f->complex, *f->rep);
    TorsionResult mwt = tau_mw(mw);
    TorsionResult tw = tau_twist(mw, untwisted.bases, mwt.twisted_bases);
    CHECK(tw.routes_agree);
    CHECK_FALSE(tw.cross_checks.empty());
    CHECK(equal_up_to_sign(tw.value.coordinate(), mwt.value.coordinate()));
  }
  auto s3 = fixture_s3();
  MWComplex mw = mw_complex(s3->complex, *s3->rep, s3->theta);
  CHECK(tau_mw(mw).value.coordinate().abs() == Rational(5));
  CHECK(tau_twist(mw).value.coordinate().abs() == Rational(5));
}

TEST_CASE("zero cocycle gives back the Reidemeister torsion") {
  for (auto& f : all_fixtures()) {
    CAPTURE(f->name);
    if (!f->rep->unimodular()) continue;
    MWComplex mw = mw_complex(f->complex, *f->rep, {});
    TorsionResult tau = reidemeister_torsion(f->complex, *f->rep);
    TorsionResult tw = tau_twist(mw, tau.bases);
    CHECK(tw.routes_agree);
    CHECK(equal_up_to_sign(tw.value.coordinate(), tau.value.coordinate()));
  }
}

TEST_CASE("barycentric subdivision preserves dims and torsion up to sign") {
  for (auto make : {fixture_s3, fixture_circle_minus}) {
    auto f = make();
    CAPTURE(f->name);
    SubdivisionReport r = subdivision_compare(f->complex, *f->rep, f->theta);
    CHECK(r.dims_match);
    CHECK(r.betti == r.sub_betti);
    CHECK(r.h_even == r.sub_h_even);
    CHECK(r.h_odd == r.sub_h_odd);
    CHECK(r.ratio_is_unit);
    CHECK(r.ratio.abs() == Rational(1));
    CHECK(r.torsion.routes_agree);
    CHECK(r.sub_torsion.routes_agree);
  }
}

TEST_CASE("property: cochain gauge transformation on the 3-sphere") {
  std::mt19937_64 rng(72);
  auto f = fixture_s3();
  const OrderedComplex& k = f->complex;
  auto off = total_offsets(k, 1);
  for (int trial = 0; trial < 12; ++trial) {
    Vector b = random_vector(k.count(2), rng);
    CochainGauge g = gauge_transform(k, *f->rep, f->theta, 2, b);
    CHECK(g.intertwines);
    Vector expected_shift = add(f->theta.at(3), cochain_complex(k).d(2) * b);
    CHECK(g.shifted.at(3) == expected_shift);
    // e^b from the nilpotent series of b∪ on the total space.
    Matrix cup_b(off.back(), off.back());
    for (int q = 0; q + 2 <= k.dim(); ++q)
      put_block(cup_b, off[static_cast<size_t>(q + 2)], off[static_cast<size_t>(q)], cup_matrix(k, *f->rep, 2, b, q));
    Matrix exp = Matrix::identity(off.back()), power = Matrix::identity(off.back());
    for (int j = 1; 2 * j <= k.dim(); ++j) {
      power = cup_b * power;
      Matrix term = power;
      for (size_t r = 0; r < term.rows(); ++r)
        for (size_t c = 0; c < term.cols(); ++c) {
          term(r, c) /= Rational(j == 1 ? 1 : 2);
          exp(r, c) += term(r, c);
        }
    }
    CHECK(g.exp_b == exp);
    CHECK(total_differential(k, *f->rep, f->theta) * exp == exp * total_differential(k, *f->rep, g.shifted));
    MWComplex before = mw_complex(k, *f->rep, f->theta), after = mw_complex(k, *f->rep, g.shifted);
    CHECK(before.h_even() == after.h_even());
    CHECK(before.h_odd() == after.h_odd());
  }
  CHECK_THROWS_AS(gauge_transform(k, *f->rep, f->theta, 1, Vector(k.count(1))), InputError);
}

TEST_CASE("form gauge transformation intertwines the twisted differentials") {
  std::mt19937_64 rng(73);
  auto f = fixture_s3();
  const OrderedComplex& k = f->complex;
  DupontSpace du(k, *f->rep);
  Twist t = twist_from_theta(k, f->theta);
  // b = L1 L2 β with L1, L2 piecewise linear and β a closed Whitney 2-form.
  PiecewiseForm beta = whitney_lift(k, 2, cochain_complex(k).d(1) * random_vector(k.count(1), rng));
  PiecewiseForm b = wedge(wedge(linear_function(k, random_vector(k.count(0), rng)),
                                linear_function(k, random_vector(k.count(0), rng))),
                          beta);
  FormGauge g = gauge_transform(du, t, b, 1);
  CHECK(g.intertwines);
  CHECK(g.shifted.coefficient_degree() == 1);
  StabilizationReport before = stabilized_twisted_cohomology(du, t), after = stabilized_twisted_cohomology(du, g.shifted);
  CHECK(after.stabilized);
  CHECK(before.dims == after.dims);
  CHECK(after.dims == std::vector<size_t>{0, 0});
  CHECK_THROWS_AS(gauge_transform(du, t, linear_function(k, random_vector(k.count(0), rng)), 1), InputError);
}

TEST_CASE("property: results do not depend on the spanning tree") {
  std::mt19937_64 rng(74);
  for (auto make : {fixture_circle_minus, fixture_s1_s2}) {
    auto f = make();
    CAPTURE(f->name);
    const OrderedComplex& k = f->complex;
    TorsionResult tau = reidemeister_torsion(k, *f->rep);
    MWComplex mw = mw_complex(k, *f->rep, f->theta);
    for (int trial = 0; trial < 5; ++trial) {
      auto base = static_cast<uint32_t>(rng() % k.count(0));
      Pi1Presentation pi = fundamental_group(k, base, &rng);
      std::vector<Matrix> h;
      Representation rho = f->rep->regauge(k, pi, &h);
      CHECK(oracle_betti(twisted_cochain_complex(k, rho)) == oracle_betti(twisted_cochain_complex(k, *f->rep)));
      TorsionResult t2 = reidemeister_torsion(k, rho, gauge_bases(k, h, tau.bases));
      CHECK(equal_up_to_sign(t2.value.coordinate(), tau.value.coordinate()));
      MWComplex mw2 = mw_complex(k, rho, f->theta);
      CHECK(mw2.h_even() == mw.h_even());
      CHECK(mw2.h_odd() == mw.h_odd());
    }
  }
}

TEST_CASE("property: torsion is invariant under randomized internal choices") {
  std::mt19937_64 rng(75);
  for (auto& f : all_fixtures()) {
    CAPTURE(f->name);
    if (!f->rep->unimodular()) continue;
    TorsionResult tau = reidemeister_torsion(f->complex, *f->rep);
    MWComplex mw = mw_complex(f->complex, *f->rep, f->theta);
    TorsionResult mwt = tau_mw(mw);
    for (int trial = 0; trial < 20; ++trial) {
      CHECK(reidemeister_torsion(f->complex, *f->rep, tau.bases, &rng).value.coordinate() == tau.value.coordinate());
      CHECK(tau_mw(mw, mwt.twisted_bases, &rng).value.coordinate() == mwt.value.coordinate());
    }
  }
}

TEST_CASE("two different closed lifts of the same cocycle") {
  std::mt19937_64 rng(76);
  auto f = fixture_s3();
  const OrderedComplex& k = f->complex;
  Twist t = twist_from_theta(k, f->theta);
  // ω = dζ - d W(∫ζ) is exact with zero integrals; t' = t + ω is another
  // closed lift of ϑ with linear coefficients.
  PiecewiseForm beta = whitney_lift(k, 2, cochain_complex(k).d(1) * random_vector(k.count(1), rng));
  PiecewiseForm zeta = wedge(wedge(linear_function(k, random_vector(k.count(0), rng)),
                                   linear_function(k, random_vector(k.count(0), rng))),
                             beta);
  PiecewiseForm omega = exterior_derivative(zeta) + Rational(-1) * exterior_derivative(whitney_of_cochain(k, 2, integration_map(zeta)));
  CHECK(exterior_derivative(omega).is_zero());
  CHECK(is_zero(integration_map(omega)));
  REQUIRE_FALSE(omega.is_zero());
  Twist t2({t.components.at(0) + omega});
  CHECK(theta_from_twist(t2) == f->theta);
  DupontSpace du(k, *f->rep);
  CHECK(stabilized_twisted_cohomology(du, t2).dims == stabilized_twisted_cohomology(du, t).dims);
  MWComplex a = mw_complex(k, *f->rep, theta_from_twist(t)), b = mw_complex(k, *f->rep, theta_from_twist(t2));
  TorsionResult tau = reidemeister_torsion(k, *f->rep);
  CHECK(equal_up_to_sign(tau_twist(a, tau.bases).value.coordinate(), tau_twist(b, tau.bases).value.coordinate()));
}

TEST_CASE("Dupont dims equal MW dims on every fixture") {
  for (auto& f : all_fixtures()) {
    CAPTURE(f->name);
    if (f->name == "s1_s2") continue;  // exercised by the acceptance run
    MWComplex mw = mw_complex(f->complex, *f->rep, f->theta);
    DupontSpace du(f->complex, *f->rep);
    StabilizationReport r = stabilized_twisted_cohomology(du, twist_from_theta(f->complex, f->theta));
    CHECK(r.stabilized);
    CHECK(r.dims == std::vector<size_t>{mw.h_even(), mw.h_odd()});
  }
}
