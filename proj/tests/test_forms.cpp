#include <doctest.h>

#include <map>

#include "support.hpp"
#include "ttwist/errors.hpp"
#include "ttwist/fixtures.hpp"

using namespace ttwist;
using namespace ttwist::testing;

namespace {

Polynomial x(size_t q, size_t i) { return Polynomial::variable(q, i - 1); }
Polynomial one(size_t q) { return Polynomial::constant(q, Rational(1)); }

AffineSimplexMap random_affine(size_t p, size_t q, std::mt19937_64& rng) {
  AffineSimplexMap f;
  f.p = p;
  f.q = q;
  for (size_t v = 0; v <= p; ++v) {
    Vector b(q + 1);
    Rational total;
    for (auto& c : b) {
      c = Rational(static_cast<long>(rng() % 4));
      total += c;
    }
    if (total.is_zero()) {
      b[rng() % (q + 1)] = Rational(1);
      total = Rational(1);
    }
    for (auto& c : b) c /= total;
    f.vertex_images.push_back(b);
  }
  f.validate();
  return f;
}

}  // namespace

TEST_CASE("wedge golden values") {
  PolyForm dx1 = PolyForm::term(2, 0, one(2), {1}), dx2 = PolyForm::term(2, 0, one(2), {2});
  CHECK(wedge(dx1, dx2) == Rational(-1) * wedge(dx2, dx1));
  CHECK(wedge(dx1, dx2) == PolyForm::term(2, 0, one(2), {1, 2}));
  PolyForm unit = PolyForm::function(2, 0, one(2));
  PolyForm a = PolyForm::term(2, 1, x(2, 1), {2});
  CHECK(wedge(unit, a) == a);
  PolyForm b = PolyForm::term(2, 1, x(2, 2), {1});
  CHECK(wedge(a, b) == PolyForm::term(2, 2, Rational(-1) * (x(2, 1) * x(2, 2)), {1, 2}));
  CHECK_THROWS_AS(wedge(dx1, PolyForm::term(3, 0, one(3), {1})), InputError);
}

TEST_CASE("exterior derivative golden values") {
  CHECK(exterior_derivative(PolyForm::function(2, 1, x(2, 1))) == PolyForm::term(2, 0, one(2), {1}));
  PolyForm exact = PolyForm::term(2, 1, x(2, 1), {2}) + PolyForm::term(2, 1, x(2, 2), {1});
  CHECK(exterior_derivative(exact).is_zero());
  // Whitney edge form λ0 dλ1 - λ1 dλ0 on Δ² has d = 2 dλ0∧dλ1 = 2 dx1∧dx2.
  PolyForm w = PolyForm::whitney(2, {0, 1});
  PolyForm by_hand = wedge(PolyForm::function(2, 1, Polynomial::barycentric(2, 0)), PolyForm::dlambda(2, 1)) -
                     wedge(PolyForm::function(2, 1, Polynomial::barycentric(2, 1)), PolyForm::dlambda(2, 0));
  CHECK(w == by_hand);
  CHECK(exterior_derivative(w) == PolyForm::term(2, 0, Polynomial::constant(2, Rational(2)), {1, 2}));
}

TEST_CASE("pullback golden values") {
  std::mt19937_64 rng(51);
  PolyForm a = random_form(3, 2, 2, rng);
  CHECK(pullback(AffineSimplexMap::identity(3), a) == a);
  // ε^0 : Δ^1 -> Δ^2 sends t to (x1, x2) = (1 - t, t).
  AffineSimplexMap e0 = AffineSimplexMap::face(2, 0);
  CHECK(pullback(e0, PolyForm::term(2, 0, one(2), {2})) == PolyForm::term(1, 0, one(1), {1}));
  CHECK(pullback(e0, PolyForm::term(2, 0, one(2), {1})) == Rational(-1) * PolyForm::term(1, 0, one(1), {1}));
  CHECK(pullback(e0, PolyForm::function(2, 1, x(2, 1))) == PolyForm::function(1, 1, one(1) - x(1, 1)));
  // A constant map kills positive-degree forms.
  AffineSimplexMap c;
  c.p = 2;
  c.q = 3;
  Vector pt{Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)};
  c.vertex_images = {pt, pt, pt};
  CHECK(pullback(c, random_form(3, 1, 2, rng)).is_zero());
  CHECK_THROWS_AS(pullback(e0, PolyForm::term(3, 0, one(3), {1})), InputError);
}

TEST_CASE("integration golden values") {
  CHECK(integrate(PolyForm::term(1, 0, one(1), {1})) == Rational(1));
  CHECK(integrate(PolyForm::term(2, 0, one(2), {1, 2})) == Rational(1, 2));
  CHECK(integrate(PolyForm::term(2, 1, x(2, 1), {1, 2})) == Rational(1, 6));
  CHECK(integrate(PolyForm::term(2, 0, one(2), {2, 1})) == Rational(-1, 2));
  CHECK_THROWS_AS(integrate(PolyForm::term(2, 0, one(2), {1})), InputError);
}

TEST_CASE("property: d squared is zero and Leibniz holds") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 150; ++trial) {
    size_t q = 1 + rng() % 4;
    int ja = static_cast<int>(rng() % (q + 1)), jb = static_cast<int>(rng() % (q + 1));
    PolyForm a = random_form(q, ja, 2, rng), b = random_form(q, jb, 2, rng);
    CHECK(exterior_derivative(exterior_derivative(a)).is_zero());
    PolyForm lhs = exterior_derivative(wedge(a, b));
    PolyForm rhs = wedge(exterior_derivative(a), b);
    PolyForm second = wedge(a, exterior_derivative(b));
    rhs += (ja % 2 == 0) ? second : Rational(-1) * second;
    CHECK(lhs == rhs);
    // Graded commutativity.
    CHECK(wedge(a, b) == Rational((ja * jb) % 2 == 0 ? 1 : -1) * wedge(b, a));
    CHECK(exterior_derivative(a).coefficient_degree() < std::max(a.coefficient_degree(), 1));
  }
}

TEST_CASE("property: Stokes on random forms") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 200; ++trial) {
    size_t q = 1 + rng() % 4;
    PolyForm w = random_form(q, static_cast<int>(q) - 1, 2, rng);
    Rational boundary;
    for (size_t i = 0; i <= q; ++i) {
      Rational v = integrate(pullback(AffineSimplexMap::face(q, i), w));
      boundary += (i % 2 == 0) ? v : -v;
    }
    CHECK(integrate(exterior_derivative(w)) == boundary);
  }
}

TEST_CASE("property: pullback is functorial and commutes with d and wedge") {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 60; ++trial) {
    size_t p = 1 + rng() % 3, m = 1 + rng() % 3, q = 1 + rng() % 3;
    AffineSimplexMap f = random_affine(p, m, rng), g = random_affine(m, q, rng);
    int ja = static_cast<int>(rng() % (q + 1)), jb = static_cast<int>(rng() % (q + 1 - ja));
    PolyForm a = random_form(q, ja, 2, rng), b = random_form(q, jb, 1, rng);
    CHECK(pullback(g.compose(f), a) == pullback(f, pullback(g, a)));
    CHECK(pullback(g, exterior_derivative(a)) == exterior_derivative(pullback(g, a)));
    CHECK(pullback(g, wedge(a, b)) == wedge(pullback(g, a), pullback(g, b)));
    CHECK(pullback(g, a).coefficient_degree() <= a.coefficient_degree());
  }
}

TEST_CASE("Whitney lift golden values") {
  OrderedComplex edge = standard_simplex(1);
  PiecewiseForm w = whitney_lift(edge, 1, Vector{Rational(1)});
  CHECK(w.on({0, 1}) == PolyForm::term(1, 0, one(1), {1}));
  CHECK(integration_map(w) == Vector{Rational(1)});
  CHECK(whitney_lift(edge, 1, Vector{Rational(0)}).is_zero());

  auto f = fixture_s3();
  PiecewiseForm t = whitney_lift(f->complex, 3, f->theta.at(3));
  CHECK(exterior_derivative(t).is_zero());
  t.check_compatible();
  for (size_t s = 0; s < f->complex.count(3); ++s) {
    Rational v = integrate(t.on(f->complex.simplices(3)[s]));
    CHECK(v.abs() == Rational(1));
    CHECK(v == f->theta.at(3)[s]);
  }
  OrderedComplex tri = standard_simplex(2);
  CHECK_THROWS_AS(whitney_lift(tri, 1, Vector{Rational(1), Rational(0), Rational(0)}), InputError);
}

TEST_CASE("integration map golden values") {
  OrderedComplex tri = standard_simplex(2);
  CHECK(integration_map(constant_form(tri, Rational(1))) == Vector(3, Rational(1)));
  // A degree 0 piecewise form: the piecewise linear function with vertex values c.
  Vector c{Rational(2), Rational(-1), Rational(5)};
  PiecewiseForm f = linear_function(tri, c);
  CHECK(f.compatible());
  CHECK(integration_map(f) == c);
  CHECK(integration_map(exterior_derivative(f)) == cochain_complex(tri).d(0) * c);
}

TEST_CASE("property: Whitney duality and closed lifts on every fixture") {
  std::mt19937_64 rng(55);
  for (auto& f : all_fixtures()) {
    const OrderedComplex& k = f->complex;
    for (int deg = 0; deg <= k.dim(); ++deg) {
      Vector theta = random_cocycle(k, deg, rng);
      PiecewiseForm w = whitney_lift(k, deg, theta);
      CHECK(integration_map(w) == theta);
      CHECK(exterior_derivative(w).is_zero());
      CHECK(w.compatible());
      CHECK(w.coefficient_degree() <= 1);
    }
  }
}

TEST_CASE("property: Stokes for the integration map and preserved compatibility") {
  std::mt19937_64 rng(56);
  for (auto& f : all_fixtures()) {
    const OrderedComplex& k = f->complex;
    BasedComplex c = cochain_complex(k);
    for (int deg = 0; deg + 1 <= k.dim(); ++deg) {
      // Compatible and usually not closed: a piecewise linear function times a closed Whitney form.
      Vector fun(k.count(0));
      for (auto& v : fun) v = random_rational(rng);
      PiecewiseForm eta = wedge(linear_function(k, fun), whitney_lift(k, deg, random_cocycle(k, deg, rng)));
      CHECK(eta.compatible());
      PiecewiseForm deta = exterior_derivative(eta);
      CHECK(deta.compatible());
      CHECK(integration_map(deta) == c.d(deg) * integration_map(eta));
    }
  }
}

TEST_CASE("restriction to the barycentric subdivision") {
  OrderedComplex edge = standard_simplex(1);
  Subdivision sd = barycentric_subdivision(edge);
  CHECK(integration_map(restrict_subdivision(constant_form(edge, Rational(3)), sd)) == Vector(3, Rational(3)));
  PiecewiseForm dx = whitney_lift(edge, 1, Vector{Rational(1)});
  Vector halves = integration_map(restrict_subdivision(dx, sd));
  // Subdivision edges are (v0, b) and (v1, b); the second runs against dx.
  CHECK(halves == Vector{Rational(1, 2), Rational(-1, 2)});

  std::mt19937_64 rng(57);
  for (size_t n : {2u, 3u}) {
    OrderedComplex k = boundary_simplex(n);
    Subdivision s = barycentric_subdivision(k);
    int deg = static_cast<int>(n) - 1;
    Vector theta = random_cocycle(k, deg, rng);
    PiecewiseForm restricted = restrict_subdivision(whitney_lift(k, deg, theta), s);
    CHECK(restricted.compatible());
    CHECK(exterior_derivative(restricted).is_zero());
    Vector sub = integration_map(restricted);
    CHECK(is_zero(cochain_complex(s.complex).d(deg) * sub));
    // Same class: pairing with the subdivided fundamental cycle is unchanged.
    Matrix z = kernel(boundary_matrix(k, deg));
    REQUIRE(z.cols() == 1);
    Vector zs = subdivision_chain_matrix(s, k, deg) * z.column(0);
    Rational lhs, rhs;
    for (size_t i = 0; i < sub.size(); ++i) lhs += sub[i] * zs[i];
    for (size_t i = 0; i < theta.size(); ++i) rhs += theta[i] * z(i, 0);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("pullback along the approximation of the identity integrates to the cochain pullback") {
  std::mt19937_64 rng(58);
  OrderedComplex k = boundary_simplex(3);
  Subdivision sd = barycentric_subdivision(k);
  SimplicialMap g = approx_identity(sd, k);
  for (int deg = 0; deg <= 2; ++deg) {
    Vector theta = random_cocycle(k, deg, rng);
    PiecewiseForm pulled = pullback(g, whitney_lift(k, deg, theta));
    CHECK(pulled.compatible());
    CHECK(integration_map(pulled) == g.chain_matrix(deg).transpose() * theta);
  }
}

TEST_CASE("integration induces isomorphisms on cohomology of bounded piecewise forms") {
  std::mt19937_64 rng(59);
  for (auto& k : {standard_simplex(2), boundary_simplex(2), boundary_simplex(3), boundary_simplex(4)}) {
    DeRhamCheck r = derham_check(k, rng);
    CHECK(r.chain_map);
    CHECK(r.form_cohomology == r.betti);
    CHECK(r.image_rank == r.betti);
  }
}
