#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ttwist/forms.hpp"
#include "ttwist/local_system.hpp"
#include "ttwist/sparse.hpp"

namespace ttwist {

/// Monomial forms x^a dx_I on Δ^m, numbered level by level (level = |a|);
/// within a level by |I|, then I, then graded-lex a.
class LocalFormBasis {
 public:
  explicit LocalFormBasis(size_t m) : m_(m) {}
  size_t simplex_dim() const { return m_; }
  /// Makes sure every form of level <= level has an id.
  void ensure_level(int level);
  uint32_t id(uint32_t mask, const Monomial& mono);
  uint32_t mask(uint32_t id) const { return masks_.at(id); }
  const Monomial& monomial(uint32_t id) const { return monos_.at(id); }
  int level(uint32_t id) const { return total_degree(monos_.at(id)); }
  /// Ids of the given level and form degree j.
  const std::vector<uint32_t>& ids(int level, int j);
  PolyForm form(uint32_t id) const;

 private:
  size_t m_;
  int built_ = -1;
  std::vector<uint32_t> masks_;
  std::vector<Monomial> monos_;
  std::map<std::pair<uint32_t, Monomial>, uint32_t> index_;
  std::map<std::pair<int, int>, std::vector<uint32_t>> by_level_;
};

/// Basis element ω ⊗ σ ⊗ e of Du(K) ⊗_ρ E: σ = simplices(m)[simplex], ω the
/// local form `form` on Δ^m, e a standard basis vector of E. Its chain degree
/// is m - deg ω.
struct DupontElement {
  uint32_t m = 0;
  uint32_t simplex = 0;
  uint32_t form = 0;
  uint32_t e = 0;
  uint64_t key() const {
    return (uint64_t(m) << 60) | (uint64_t(simplex) << 32) | (uint64_t(form) << 8) | uint64_t(e);
  }
  friend bool operator==(const DupontElement&, const DupontElement&) = default;
};

using DupontChain = std::vector<std::pair<DupontElement, Rational>>;

/// Chain-side Dupont currents of K with coefficients twisted by ρ.
class DupontSpace {
 public:
  DupontSpace(const OrderedComplex& k, const Representation& rho);

  const OrderedComplex& complex() const { return *k_; }
  const Representation& rep() const { return *rho_; }
  LocalFormBasis& local(size_t m) { return local_.at(m); }

  int degree(const DupontElement& x);
  int level(const DupontElement& x);
  /// Elements of chain degree n with coefficient level exactly `level`.
  std::vector<DupontElement> elements(int n, int level);
  /// All elements of chain degree n with level <= max_level, ordered by
  /// level first.
  std::vector<DupontElement> basis(int n, int max_level);
  std::string label(const DupontElement& x);

  /// ∂(ω⊗σ) = (-1)^n dω⊗σ + Σ_i (-1)^i (ε^i)^*ω ⊗ ε_iσ, the i = 0 face
  /// carrying ρ(hol(v0 v1))^T on the coefficient.
  DupontChain boundary(const DupontElement& x);
  /// Module action of a piecewise k-form with the Koszul sign
  /// φ⋆(ω⊗σ) = (-1)^{kn + k(k-1)/2} (φ_σ ∧ ω) ⊗ σ, n the chain degree.
  DupontChain action(const PiecewiseForm& phi, const DupontElement& x);
  /// ψ(σ ⊗ e) = 1 ⊗ σ ⊗ e.
  DupontElement psi(uint32_t m, uint32_t simplex, uint32_t e);

 private:
  struct LocalBoundary {
    std::vector<std::pair<uint32_t, Rational>> d;
    std::vector<std::vector<std::pair<uint32_t, Rational>>> faces;
  };
  const LocalBoundary& local_boundary(uint32_t m, uint32_t id);
  std::vector<std::pair<uint32_t, Rational>> decompose(size_t m, const PolyForm& f);

  const OrderedComplex* k_;
  const Representation* rho_;
  std::vector<LocalFormBasis> local_;
  std::vector<std::map<uint32_t, LocalBoundary>> boundary_cache_;
  std::vector<std::vector<std::vector<uint32_t>>> faces_;  // [m][simplex][i]
  std::vector<std::vector<Matrix>> transport_;
};

/// Index of basis elements (position lookup by key).
class IndexedBasis {
 public:
  void append(const DupontElement& x);
  size_t size() const { return elems_.size(); }
  const DupontElement& operator[](size_t i) const { return elems_[i]; }
  std::optional<size_t> position(const DupontElement& x) const;
  size_t at(const DupontElement& x) const;

 private:
  std::vector<DupontElement> elems_;
  std::unordered_map<uint64_t, size_t> pos_;
};

/// Sparse matrix of a chain-valued map on the given source basis, into the
/// target basis (throws std::logic_error if a term falls outside it).
template <class F>
SparseMatrix assemble(const IndexedBasis& source, const IndexedBasis& target, F&& f) {
  SparseMatrix m(target.size(), 0);
  for (size_t c = 0; c < source.size(); ++c) {
    std::vector<SparseEntry> col;
    for (auto& [y, v] : f(source[c])) col.push_back({static_cast<uint32_t>(target.at(y)), v});
    m.push_column(make_sparse_column(std::move(col)));
  }
  return m;
}

IndexedBasis dupont_basis(DupontSpace& du, int n, int max_level);
/// ∂ : Du_n^{<=D} -> Du_{n-1}^{<=D}.
SparseMatrix dupont_boundary_matrix(DupontSpace& du, int n, int level);
/// φ⋆ : Du_n^{<=D} -> Du_{n-k}^{<=D+p}, p the coefficient degree of φ.
SparseMatrix dupont_action_matrix(DupontSpace& du, const PiecewiseForm& phi, int n, int level);
/// ψ : C_n(K) ⊗ E -> Du_n^{<=D}.
SparseMatrix psi_matrix(DupontSpace& du, int n, int level);
/// ψ^*: evaluation of a functional on Du_n^{<=D} against the 1⊗σ⊗e.
Vector psi_star(DupontSpace& du, int n, int level, const Vector& functional);

/// Components t_{2i+1} of a closed odd element; checked on construction.
struct Twist {
  std::vector<PiecewiseForm> components;
  Twist() = default;
  explicit Twist(std::vector<PiecewiseForm> components);
  /// Coefficient degree p of the action (0 for t = 0).
  int coefficient_degree() const;
  bool is_zero() const;
};

/// Matrices of ∂ at levels D and D + p and of t⋆ from level D to D + p, per
/// chain degree n.
struct EquivariantWindow {
  int level = 0;
  int p = 0;
  std::vector<IndexedBasis> low, high;           // bases per n at D and D + p
  std::vector<SparseMatrix> boundary_low;        // n -> n-1 at level D (index n)
  std::vector<SparseMatrix> boundary_high;       // at level D + p
  std::vector<std::map<int, SparseMatrix>> twist;  // [n][k]: n -> n-k, D -> D+p
  bool square_zero = false;
  bool anticommutes = false;
};

/// Throws InputError when t is not closed, has an even or too small degree,
/// or D is below its coefficient degree.
EquivariantWindow build_window(DupontSpace& du, const Twist& t, int level);

struct LevelReport {
  int level = 0;
  std::vector<size_t> dims;        // per group (parity, or chain degree)
  int saturation = -1;             // source level at which boundaries stopped growing
  std::vector<size_t> cycles;      // dim of cycles inside the window
  bool comparison_iso = false;     // restriction map to level+1 is an isomorphism
};

struct StabilizationReport {
  std::vector<LevelReport> levels;
  bool stabilized = false;
  int stable_level = -1;
  std::vector<size_t> dims;
  size_t largest_window = 0;
  int levels_reduced = 0;
};

struct LadderOptions {
  int max_level = -1;       // default dim K + 1
  bool early_stop = true;
  int saturation_slack = 2; // source levels allowed beyond max_level + p
};

/// Twisted homology of (Du ⊗_ρ E, ∂ + t⋆) by parity, read off level by level
/// with image saturation; dims of the dual cohomology are the same numbers.
StabilizationReport stabilized_twisted_cohomology(DupontSpace& du, const Twist& t, LadderOptions opts = {});
/// Untwisted version graded by chain degree n = 0 .. dim K.
StabilizationReport stabilized_cohomology_by_degree(DupontSpace& du, LadderOptions opts = {});

/// rank of ψ_* : H_n(C(K;E)) -> H_n(Du) using boundaries from levels <= source_level.
size_t psi_homology_rank(DupontSpace& du, int n, int source_level);

/// Induced map ω⊗σ ↦ sgn(P) (P^{-1})^*ω ⊗ f(σ) for a simplicial map that is
/// injective on vertices (trivial coefficients of equal rank). Throws
/// InputError for maps that collapse simplexes.
SparseMatrix dupont_pushforward(const SimplicialMap& f, DupontSpace& source, DupontSpace& target, int n,
                                int level);

}  // namespace ttwist
