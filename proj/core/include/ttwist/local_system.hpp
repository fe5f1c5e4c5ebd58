#pragma once

#include <optional>
#include <random>
#include <vector>

#include "ttwist/complex.hpp"

namespace ttwist {

/// Word in the generators: entry g+1 stands for generator g, -(g+1) for its
/// inverse.
using Word = std::vector<int>;

Word inverse_word(const Word& w);
/// Free reduction.
Word reduce_word(const Word& w);

/// Edge-path presentation of π_1(K, base) from a spanning tree.
struct Pi1Presentation {
  uint32_t base = 0;
  std::vector<Simplex> edges;           // K_1 in lexicographic order
  std::vector<bool> in_tree;            // per edge
  std::vector<int> edge_generator;      // per edge, -1 for tree edges
  std::vector<Simplex> generators;      // non-tree edges
  std::vector<Word> relators;           // one per 2-simplex (v0 v1 v2)

  size_t generator_count() const { return generators.size(); }
  /// Holonomy of the ordered edge u -> v (either orientation).
  Word holonomy(uint32_t u, uint32_t v) const;
  std::optional<size_t> generator_of(const Simplex& edge) const;
};

/// Spanning tree by breadth-first search from `base`, neighbours visited in
/// vertex order. Throws InputError when K is disconnected. With `rng`, the
/// neighbour order is shuffled (a different tree, same group).
Pi1Presentation fundamental_group(const OrderedComplex& k, uint32_t base = 0,
                                  std::mt19937_64* rng = nullptr);

/// Whether Tietze moves (eliminating a generator that occurs exactly once in
/// some relator) reduce the presentation to the trivial group. A false
/// answer is inconclusive.
bool presentation_is_trivial(const Pi1Presentation& pi);

/// Representation ρ : π_1(K) -> GL_d(Q) given on the generators. Internally
/// also kept as a flat connection: one matrix per edge u<v, transporting
/// coefficients from v to u (identity on tree edges).
class Representation {
 public:
  /// One matrix per generator. Throws InputError when a matrix is not
  /// invertible or a relator does not evaluate to 1.
  Representation(const OrderedComplex& k, Pi1Presentation pi, size_t dim, std::vector<Matrix> generators);

  static Representation trivial(const OrderedComplex& k, const Pi1Presentation& pi, size_t dim);
  /// From a flat connection (edge matrices in K_1 order with A(ab)A(bc) =
  /// A(ac) on every triangle), gauged so tree edges of `pi` become trivial.
  /// When `gauge` is given it receives h(v) with A'(uv) = h(u) A(uv) h(v)^{-1}.
  static Representation from_connection(const OrderedComplex& k, Pi1Presentation pi, size_t dim,
                                        const std::vector<Matrix>& connection,
                                        std::vector<Matrix>* gauge = nullptr);

  size_t dim() const { return dim_; }
  const Pi1Presentation& presentation() const { return pi_; }
  const Matrix& generator(size_t g) const { return generators_.at(g); }
  const std::vector<Matrix>& connection() const { return connection_; }
  /// ρ(hol(u v)); u, v adjacent (or equal).
  Matrix holonomy(uint32_t u, uint32_t v) const;
  /// ρ(hol(v0 v1) ... hol(v_{r-1} v_r)) along the vertex path.
  Matrix path_holonomy(const Simplex& path, size_t upto) const;
  Matrix evaluate(const Word& w) const;
  /// det ρ(g) = ±1 for every generator.
  bool unimodular() const;

  /// The same local system expressed over another spanning tree / base.
  Representation regauge(const OrderedComplex& k, const Pi1Presentation& other,
                         std::vector<Matrix>* gauge = nullptr) const;
  /// ρ∘g_* on the source of a simplicial map into this complex.
  /// `gauge` receives h with connection h(u) A(g u, g v) h(v)^{-1}.
  Representation pullback(const SimplicialMap& g, const Pi1Presentation& source_pi,
                          std::vector<Matrix>* gauge = nullptr) const;

 private:
  Representation() = default;
  void check_relators() const;
  size_t dim_ = 0;
  Pi1Presentation pi_;
  std::vector<Matrix> generators_;
  std::vector<Matrix> connection_;
};

/// C^q = (Q^d)^{K_q}, basis (simplex, e_k) with simplexes outermost, and
/// (δc)(v0..v_{q+1}) = ρ(hol(v0 v1)) c(v1..v_{q+1}) + Σ_{j>=1} (-1)^j c(..v̂_j..).
BasedComplex twisted_cochain_complex(const OrderedComplex& k, const Representation& rho);
Matrix twisted_coboundary(const OrderedComplex& k, const Representation& rho, int q);

/// Matrix of c ↦ ϑ ∪ c : C^s(K,E) -> C^{r+s}(K,E) for a scalar r-cochain ϑ,
/// (ϑ∪c)(v0..v_{r+s}) = ϑ(v0..v_r) ρ(hol(v0 v1)...hol(v_{r-1} v_r)) c(v_r..v_{r+s}).
/// Zero (of the right shape) when r + s exceeds dim K.
Matrix cup_matrix(const OrderedComplex& k, const Representation& rho, int r, const Vector& theta, int s);
Vector cup(const OrderedComplex& k, const Representation& rho, int r, const Vector& theta, int s, const Vector& c);
/// Scalar cup product of two scalar cochains.
Vector scalar_cup(const OrderedComplex& k, int r, const Vector& a, int s, const Vector& b);

/// Block-diagonal isomorphism c(σ) ↦ h(v0) c(σ) on C^q, intertwining the
/// twisted complexes of two gauges of the same local system.
Matrix gauge_cochain_matrix(const OrderedComplex& k, const std::vector<Matrix>& h, int q);

}  // namespace ttwist
