#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ttwist/matrix.hpp"

namespace ttwist {

struct GradedLine {
  int grade = 0;
  std::string basis_id;
  friend bool operator==(const GradedLine&, const GradedLine&) = default;
};

/// Element of a graded determinant line, stored as its coordinate against the
/// wedge of a declared reference basis. A zero coordinate can be constructed
/// but every operation on it throws.
class DetElement {
 public:
  DetElement(GradedLine line, Rational coordinate)
      : line_(std::move(line)), coord_(std::move(coordinate)) {}

  /// Coordinate 1 in the unit line (k, 0).
  static DetElement unit() { return DetElement({0, "k"}, Rational(1)); }

  const GradedLine& line() const { return line_; }
  int grade() const { return line_.grade; }
  const std::string& basis_id() const { return line_.basis_id; }
  const Rational& coordinate() const { return coord_; }
  bool valid() const { return !coord_.is_zero(); }
  /// Throws InputError for the zero state.
  void require_valid() const;

 private:
  GradedLine line_;
  Rational coord_;
};

DetElement tensor(const DetElement& a, const DetElement& b);
/// The image of a ⊗ b under the commutativity constraint, expressed in the
/// reference ordering of b ⊗ a: coordinate picks up (-1)^{n1 n2}.
DetElement commute(const DetElement& a, const DetElement& b);
DetElement invert(const DetElement& a);

/// Bounded cochain complex C^low -> ... -> C^high with a reference basis in
/// every degree (the standard basis of Q^dim, identified by `basis_ids`).
struct BasedComplex {
  int low = 0;
  std::vector<size_t> dims;
  std::vector<std::string> basis_ids;
  /// differentials[k] : C^{low+k} -> C^{low+k+1}, size dims[k+1] x dims[k].
  std::vector<Matrix> differentials;

  BasedComplex() = default;
  BasedComplex(int low, std::vector<size_t> dims, std::vector<Matrix> differentials,
               std::vector<std::string> basis_ids = {});

  int high() const { return low + static_cast<int>(dims.size()) - 1; }
  size_t length() const { return dims.size(); }
  /// Dimension in absolute degree i (0 outside the range).
  size_t dim(int i) const;
  /// Differential out of absolute degree i (zero map outside the range).
  Matrix d(int i) const;

  /// Throws InputError on shape mismatch or d∘d != 0.
  void validate() const;
  std::vector<size_t> betti() const;
};

/// Per-degree cohomology representatives; entry k holds the cocycles of degree
/// low + k as columns.
using CohomologyBases = std::vector<Matrix>;

/// Default representatives: kernel basis vectors of ∂_i (one per free column
/// under the fixed pivot rule) that complete a pivot basis of im ∂_{i-1},
/// chosen by scanning [image | kernel] left to right.
CohomologyBases default_cohomology_bases(const BasedComplex& c);

/// Scalar τ of the Knudsen–Mumford isomorphism with
/// KM(⊗ det(ref_i)^{(-1)^i}) = τ · ⊗ det(h_i)^{(-1)^i}.
/// Computed as Π_i det[∂b_{i-1} | h_i | b_i]^{(-1)^{i+1}} where b_i are
/// lifts of a basis of im ∂_i. When `rng` is given, the b_i, lifts and
/// representatives are re-chosen at random (the result must not change).
Rational km_scalar(const BasedComplex& c, const CohomologyBases& h,
                   std::mt19937_64* rng = nullptr);

/// Z/2-graded complex with d_eo : C^ev -> C^od and d_oe : C^od -> C^ev.
struct Z2Complex {
  size_t even_dim = 0, odd_dim = 0;
  std::string even_id = "ev", odd_id = "od";
  Matrix d_eo, d_oe;

  Z2Complex() = default;
  Z2Complex(Matrix d_eo, Matrix d_oe);

  void validate() const;
  size_t h_even() const;
  size_t h_odd() const;
};

struct Z2Bases {
  Matrix even, odd;
};

Z2Bases default_z2_bases(const Z2Complex& z);

/// Coordinate λ of the canonical isomorphism det C^ev ⊗ (det C^od)^{-1} →
/// det H^ev ⊗ (det H^od)^{-1}, evaluated on the reference bases and
/// expressed against the supplied representatives. Realized as the
/// reciprocal of km_scalar of the complex 0 → A → C^ev → C^od → C^od/B → 0
/// with A = im d_oe, B = ker d_oe, and C^od/B identified with A through d_oe.
Rational lemma1_scalar(const Z2Complex& z, const Z2Bases& h, std::mt19937_64* rng = nullptr);

/// The four-term complex above with the pivot basis of A (for inspection).
BasedComplex lemma1_complex(const Z2Complex& z);

/// Parity collapse of a Z-graded complex: even degrees to C^ev, odd degrees
/// to C^od, concatenated in increasing degree.
Z2Complex parity_collapse(const BasedComplex& c);
Z2Bases parity_collapse_bases(const BasedComplex& c, const CohomologyBases& h);

}  // namespace ttwist
