#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ttwist/complex.hpp"

namespace ttwist {

/// Exponent vector (a_1 .. a_q) of x_1^{a_1} ... x_q^{a_q}.
using Monomial = std::vector<int>;

int total_degree(const Monomial& m);

/// Graded lexicographic order: total degree first, then lexicographic.
struct GradedLex {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Polynomial with rational coefficients in the reduced coordinates
/// x_1 .. x_q of Δ^q (λ_0 = 1 - Σ x_i, λ_i = x_i).
class Polynomial {
 public:
  explicit Polynomial(size_t nvars = 0) : nvars_(nvars) {}
  static Polynomial constant(size_t nvars, const Rational& c);
  static Polynomial variable(size_t nvars, size_t i);  // x_{i+1}, 0-based i
  /// Barycentric coordinate λ_i on Δ^q.
  static Polynomial barycentric(size_t q, size_t i);

  size_t nvars() const { return nvars_; }
  const std::map<Monomial, Rational, GradedLex>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Total degree, -1 for the zero polynomial.
  int degree() const;

  void add_term(const Monomial& m, const Rational& c);
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  /// ∂/∂x_{i+1}.
  Polynomial derivative(size_t i) const;
  /// Substitutes x_i := subs[i] (all in the same ring).
  Polynomial substitute(const std::vector<Polynomial>& subs, size_t target_nvars) const;
  std::string str() const;

 private:
  size_t nvars_;
  std::map<Monomial, Rational, GradedLex> terms_;
};

/// Affine map Δ^p -> Δ^q given by the barycentric coordinates (length q+1)
/// of the images of the p+1 vertices.
struct AffineSimplexMap {
  size_t p = 0, q = 0;
  std::vector<Vector> vertex_images;

  static AffineSimplexMap identity(size_t q);
  /// Face inclusion ε^i : Δ^{q-1} -> Δ^q missing vertex i.
  static AffineSimplexMap face(size_t q, size_t i);
  /// Inclusion of the sub-simplex spanned by the given vertices of Δ^q.
  static AffineSimplexMap vertices(size_t q, const std::vector<size_t>& vs);
  AffineSimplexMap compose(const AffineSimplexMap& first) const;  // this ∘ first
  void validate() const;
};

/// Polynomial j-form on Δ^q: Σ_I f_I dx_I over increasing index sets I,
/// stored as bit masks (bit i-1 for dx_i). The coefficient degree bound D is
/// carried along: wedge adds bounds, the other operations keep them.
class PolyForm {
 public:
  PolyForm(size_t q, int degree, int bound);
  /// f · dx_{i_1} ∧ ... ∧ dx_{i_j} with 1-based indices (any order; sign
  /// applied, repeated indices give zero).
  static PolyForm term(size_t q, int bound, const Polynomial& f, const std::vector<size_t>& dx);
  static PolyForm function(size_t q, int bound, const Polynomial& f);
  /// dλ_i on Δ^q.
  static PolyForm dlambda(size_t q, size_t i);
  /// Whitney elementary form of the face spanned by local vertices `face`
  /// of Δ^q, normalized to integrate to 1 over that face.
  static PolyForm whitney(size_t q, const std::vector<size_t>& face);

  size_t simplex_dim() const { return q_; }
  int degree() const { return j_; }
  int bound() const { return bound_; }
  /// Largest coefficient degree actually present (-1 for zero).
  int coefficient_degree() const;
  bool is_zero() const { return comps_.empty(); }
  const std::map<uint32_t, Polynomial>& components() const { return comps_; }
  /// Throws InputError on a violated invariant (degree, bound, zero terms).
  void validate() const;
  PolyForm with_bound(int bound) const;

  void add(uint32_t mask, const Polynomial& f);
  PolyForm& operator+=(const PolyForm& o);
  PolyForm& operator-=(const PolyForm& o);
  PolyForm& operator*=(const Rational& s);
  friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
  friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
  friend PolyForm operator*(const Rational& s, PolyForm a) { return a *= s; }
  /// Equality of the forms themselves (bounds are not compared).
  friend bool operator==(const PolyForm& a, const PolyForm& b) {
    return a.q_ == b.q_ && a.j_ == b.j_ && a.comps_ == b.comps_;
  }

  std::string str() const;

 private:
  size_t q_;
  int j_;
  int bound_;
  std::map<uint32_t, Polynomial> comps_;
};

/// Sign of dx_A ∧ dx_B relative to dx_{A∪B}, 0 if they overlap.
int wedge_sign(uint32_t a, uint32_t b);

PolyForm wedge(const PolyForm& a, const PolyForm& b);
PolyForm exterior_derivative(const PolyForm& a);
PolyForm pullback(const AffineSimplexMap& f, const PolyForm& a);
/// Exact integral of a top-degree form over Δ^q, dx_1∧...∧dx_q positive.
Rational integrate(const PolyForm& a);

/// A compatible family φ_σ of k-forms, one for every simplex σ with
/// dim σ >= k (per dimension, simplexes in lexicographic order).
struct PiecewiseForm {
  const OrderedComplex* complex = nullptr;
  int degree = 0;
  int bound = 0;
  std::vector<std::vector<PolyForm>> by_dim;  // index q - degree

  PiecewiseForm(const OrderedComplex& k, int degree, int bound);
  const PolyForm& on(const Simplex& s) const;
  PolyForm& on(const Simplex& s);
  /// Largest coefficient degree present.
  int coefficient_degree() const;
  bool is_zero() const;
  /// Checks φ_{ε_i σ} = (ε^i)^* φ_σ exactly; throws InputError otherwise.
  void check_compatible() const;
  bool compatible() const;
  std::string str() const;
};

PiecewiseForm constant_form(const OrderedComplex& k, const Rational& c);
PiecewiseForm wedge(const PiecewiseForm& a, const PiecewiseForm& b);
PiecewiseForm exterior_derivative(const PiecewiseForm& a);
PiecewiseForm operator+(const PiecewiseForm& a, const PiecewiseForm& b);
PiecewiseForm operator*(const Rational& s, const PiecewiseForm& a);

/// Σ_σ ϑ(σ) ω_σ for a closed scalar k-cochain ϑ (throws InputError otherwise).
PiecewiseForm whitney_lift(const OrderedComplex& k, int degree, const Vector& theta);
/// σ ↦ ∫_σ φ_σ on k-simplexes.
Vector integration_map(const PiecewiseForm& a);
/// Pulls each carrier form back along the affine inclusion of the
/// subdivision simplex.
PiecewiseForm restrict_subdivision(const PiecewiseForm& a, const Subdivision& sd);
/// Pullback along a simplicial map (affine on each simplex).
PiecewiseForm pullback(const SimplicialMap& g, const PiecewiseForm& a);

}  // namespace ttwist
