#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ttwist/detline.hpp"

namespace ttwist {

/// Strictly increasing vertex indices.
using Simplex = std::vector<uint32_t>;

/// The simplex with its i-th vertex removed.
Simplex face(const Simplex& s, size_t i);

/// Finite simplicial complex with a fixed total order on its vertices.
/// Simplexes of each dimension are kept in lexicographic order.
class OrderedComplex {
 public:
  OrderedComplex() = default;
  /// Closes `simplexes` under faces. Vertex indices refer to `names`.
  OrderedComplex(std::vector<std::string> names, const std::vector<Simplex>& simplexes);

  size_t vertex_count() const { return names_.size(); }
  const std::vector<std::string>& vertex_names() const { return names_; }
  int dim() const { return static_cast<int>(by_dim_.size()) - 1; }
  /// Simplexes of dimension q (empty outside 0..dim).
  const std::vector<Simplex>& simplices(int q) const;
  size_t count(int q) const { return simplices(q).size(); }
  std::vector<size_t> f_vector() const;
  /// Position of s inside simplices(dim s); throws InputError if absent.
  size_t index(const Simplex& s) const;
  bool contains(const Simplex& s) const;
  bool connected() const;
  std::string label(const Simplex& s) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<Simplex>> by_dim_;
  std::map<Simplex, size_t> index_;
};

/// Simplicial chain complex C_q(K) over Q, presented as a cochain complex in
/// degrees -dim .. 0 (degree -q holds C_q, the differential out of -q is ∂_q).
BasedComplex chain_complex(const OrderedComplex& k);
/// Scalar simplicial cochains C^0 .. C^dim with the transposed boundary.
BasedComplex cochain_complex(const OrderedComplex& k);
/// Boundary matrix ∂_q : C_q -> C_{q-1}.
Matrix boundary_matrix(const OrderedComplex& k, int q);
/// Betti numbers b_0 .. b_dim of K over Q.
std::vector<size_t> betti_numbers(const OrderedComplex& k);

struct Subdivision {
  OrderedComplex complex;
  /// Vertex i of the subdivision is the barycenter of this simplex of K.
  std::vector<Simplex> barycenter_of;
  /// Smallest simplex of K containing the given simplex of the subdivision.
  Simplex carrier(const Simplex& s) const;
};

/// First barycentric subdivision. Vertices are the simplexes of K ordered by
/// dimension then lexicographically; simplexes are chains of faces.
Subdivision barycentric_subdivision(const OrderedComplex& k);

/// Vertex map between ordered complexes sending simplexes to simplexes.
struct SimplicialMap {
  const OrderedComplex* source = nullptr;
  const OrderedComplex* target = nullptr;
  std::vector<uint32_t> vertex_map;

  /// Throws InputError if some simplex does not map to a simplex.
  void validate() const;
  /// Sorted, deduplicated image.
  Simplex image(const Simplex& s) const;
  /// Sign of the permutation sorting the images, 0 if they repeat.
  int orientation(const Simplex& s) const;
  /// Induced chain map C_q(source) -> C_q(target).
  Matrix chain_matrix(int q) const;
  SimplicialMap compose(const SimplicialMap& first) const;  // this ∘ first
};

/// Barycenter of σ goes to the largest vertex of σ.
SimplicialMap approx_identity(const Subdivision& sd, const OrderedComplex& k);
/// The subdivision chain map C_q(K) -> C_q(K').
Matrix subdivision_chain_matrix(const Subdivision& sd, const OrderedComplex& k, int q);

}  // namespace ttwist
