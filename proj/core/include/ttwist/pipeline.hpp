#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ttwist/dupont.hpp"
#include "ttwist/errors.hpp"
#include "ttwist/spectral.hpp"

namespace ttwist {

/// Scalar cocycle components ϑ_k keyed by their (odd, >= 3) degree.
using Theta = std::map<int, Vector>;

/// ϑ∪ϑ ≠ 0 at cochain level: the Z/2-graded complex does not exist.
class MWObstruction : public Refusal {
 public:
  MWObstruction(int degree, Vector cochain);
  int degree;
  Vector cochain;
};

/// (C•(K,E), ∂ + ϑ∪) split by parity, with the Z-graded data kept.
struct MWComplex {
  const OrderedComplex* complex = nullptr;
  const Representation* rep = nullptr;
  Theta theta;
  DGModuleInput module;  // twisted cochain complex plus the cup matrices
  Z2Complex z;           // even and odd cochains concatenated by degree
  size_t h_even() const { return z.h_even(); }
  size_t h_odd() const { return z.h_odd(); }
};

/// Throws InputError when a component has the wrong degree or length or is
/// not closed, MWObstruction when ϑ∪ϑ ≠ 0.
MWComplex mw_complex(const OrderedComplex& k, const Representation& rho, Theta theta);

/// ϑ_k = integration_map(t_k).
Theta theta_from_twist(const Twist& t);
/// t_k = whitney_lift(ϑ_k).
Twist twist_from_theta(const OrderedComplex& k, const Theta& theta);

struct TorsionResult {
  DetElement value = DetElement::unit();
  /// Untwisted representatives (per cochain degree) the value refers to.
  CohomologyBases bases;
  /// Twisted representatives for τ_MW and τ_twist.
  std::optional<Z2Bases> twisted_bases;
  /// Which chain of isomorphisms produced `value`.
  std::string route;
  /// Values of the independent routes that were compared with `value`.
  std::map<std::string, Rational> cross_checks;
  /// All compared routes agree with `value` up to sign.
  bool routes_agree = true;
  /// Over Q the result is canonical only up to ±1.
  bool up_to_sign = true;
};

/// Throws Refusal unless det ρ(g) = ±1 on every generator.
void require_unimodular(const Representation& rho);

/// τ(K,E) against the given (or default) cohomology representatives.
TorsionResult reidemeister_torsion(const OrderedComplex& k, const Representation& rho,
                                   std::optional<CohomologyBases> bases = std::nullopt,
                                   std::mt19937_64* rng = nullptr);

/// τ_MW through the Z/2 Knudsen–Mumford isomorphism of the MW complex.
TorsionResult tau_mw(const MWComplex& mw, std::optional<Z2Bases> bases = std::nullopt,
                     std::mt19937_64* rng = nullptr);

/// τ_twist = τ(K,E) transported along det H(C, ∂) → det H(C, ∂_ϑ) through
/// the spectral sequence of the parity filtration; compared with the route
/// det H(C, ∂) ← det C → det H(C, ∂_ϑ) (Knudsen–Mumford on both sides).
TorsionResult tau_twist(const MWComplex& mw, std::optional<CohomologyBases> untwisted = std::nullopt,
                        std::optional<Z2Bases> twisted = std::nullopt);

/// Cochain representatives h ↦ gauge-transformed h, degree by degree.
CohomologyBases gauge_bases(const OrderedComplex& k, const std::vector<Matrix>& h, const CohomologyBases& bases);

struct CochainGauge {
  /// e^b∪ on the total cochain space ⊕_q C^q(K,E) (blocks in degree order).
  Matrix exp_b;
  Theta shifted;  // ϑ + δb
  /// ∂_ϑ ∘ e^b = e^b ∘ ∂_{ϑ+δb}, checked exactly.
  bool intertwines = false;
};

/// b a scalar cochain of even degree >= 2; e^b = Σ b^{∪k}/k!.
CochainGauge gauge_transform(const OrderedComplex& k, const Representation& rho, const Theta& theta, int b_degree,
                             const Vector& b);

/// The terms b^j / j! (j = 0, 1, ...) of e^b for an even piecewise form.
std::vector<PiecewiseForm> form_exponential(const PiecewiseForm& b);

struct FormGauge {
  Twist shifted;  // t + db
  /// ∂_t ∘ (e^b⋆) = (e^b⋆) ∘ ∂_{t+db} on the window of the given level.
  bool intertwines = false;
};

FormGauge gauge_transform(DupontSpace& du, const Twist& t, const PiecewiseForm& b, int level);

struct SubdivisionReport {
  size_t h_even = 0, h_odd = 0;
  size_t sub_h_even = 0, sub_h_odd = 0;
  std::vector<size_t> betti, sub_betti;  // untwisted twisted-coefficient Betti numbers
  TorsionResult torsion, sub_torsion;    // τ_twist on K and on K'
  Rational ratio;
  bool dims_match = false;
  bool ratio_is_unit = false;
  /// Twisted representatives on K' were the defaults rather than transported.
  bool default_twisted_bases = false;
};

/// Runs the torsion pipeline on K and on its barycentric subdivision K'
/// with ρ∘g_* and the cocycle of the restricted Whitney lift; untwisted
/// representatives are carried over by the cochain map of g.
SubdivisionReport subdivision_compare(const OrderedComplex& k, const Representation& rho, const Theta& theta);

/// g^* : C^q(K,E) → C^q(K',g^*E) for a simplicial map g : K' → K, composed
/// with the gauge h of the pulled back representation.
Matrix pullback_cochain_matrix(const SimplicialMap& g, const std::vector<Matrix>& h, size_t d, int q);

}  // namespace ttwist
