#pragma once

#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "ttwist/detline.hpp"

namespace ttwist {

/// Z/2-graded complex with decreasing filtrations F_0 ⊇ F_1 ⊇ ... of both
/// parts, stored as spanning columns for p = 0..N-1. F_p is the whole space
/// for p <= 0 and zero for p >= N.
struct FilteredZ2Complex {
  Z2Complex z;
  std::vector<Matrix> f_even, f_odd;
  /// Present when built by parity_filtration: degree of each coordinate and
  /// the untwisted differential, used to check the E_1 page.
  std::vector<int> even_degree, odd_degree;
  std::optional<BasedComplex> untwisted;

  size_t steps() const { return f_even.size(); }
  size_t dim(int parity) const { return parity == 0 ? z.even_dim : z.odd_dim; }
  /// Differential out of the given parity.
  const Matrix& d(int parity) const { return parity == 0 ? z.d_eo : z.d_oe; }
  Matrix filtration(int parity, int p) const;
  /// Throws InputError unless the filtrations are decreasing, exhaustive,
  /// of equal length and preserved by the differential.
  void validate() const;
};

/// A Z-graded complex (m, ∂) in degrees 0..top plus the odd-degree action of
/// a closed t: twist[{j, k}] is t_k· : m^j -> m^{j+k}, k odd >= 3.
struct DGModuleInput {
  BasedComplex m;
  std::map<std::pair<int, int>, Matrix> twist;

  DGModuleInput(BasedComplex m, std::map<std::pair<int, int>, Matrix> twist);
  /// Throws InputError unless (∂ + t·)² = 0 and the shapes are consistent.
  void validate() const;
  int top() const { return m.high(); }
  /// (m, ∂ + t·) with even/odd parts concatenated in increasing degree.
  Z2Complex twisted() const;
  /// Offset of m^j inside the even or odd part.
  size_t offset(int j) const;
};

FilteredZ2Complex parity_filtration(const DGModuleInput& m);

/// One cell E_r^{p,q} presented as Z / Den inside C^{p+q mod 2}.
struct PageCell {
  int p = 0;
  int n = 0;  // total degree p + q; for Z/2 pages 0 or 1
  Matrix z;     // spanning set of Z_r^{p}
  Matrix den;   // basis of Z_{r-1}^{p+1} + ∂ Z_{r-1}^{p-r+1}
  Matrix reps;  // representatives completing den to z
  size_t dim() const { return reps.cols(); }
};

struct SpectralPage {
  int r = 1;
  /// Total degrees taken mod 2 (pages of the Z/2 complex itself).
  bool periodic = false;
  std::vector<PageCell> cells;
  /// d_r from cell index i to the cell (p + r, n + 1), in representative
  /// coordinates; absent when the target is out of range.
  std::vector<std::optional<size_t>> target;
  std::vector<Matrix> d;

  const PageCell& cell(int p, int n) const;
  std::optional<size_t> index(int p, int n) const;
  /// Coordinates of vectors in cell (p, n) modulo its denominator.
  Matrix coordinates(size_t cell, const Matrix& vectors) const;
  bool differential_is_zero() const;
};

/// Pages E_1 .. E_{r_max} of the filtered Z/2 complex (total degrees 0, 1).
/// Checks d_r∘d_r = 0 and dim E_{r+1} = dim H(E_r, d_r) on every advance; for
/// parity-filtration inputs also checks that E_1^{p} is spanned by the
/// standard basis of m^p and d_1 equals the untwisted ∂. When `rng` is given
/// the representatives are re-chosen at random on every page.
std::vector<SpectralPage> compute_pages(const FilteredZ2Complex& f, int r_max,
                                        std::mt19937_64* rng = nullptr);

/// The same pages computed on the Z-graded unrolling C̃ (C̃^n = C^{n mod 2})
/// truncated to total degrees [lo, hi]. Cells with lo < n < hi agree with the
/// untruncated unrolling.
std::vector<SpectralPage> compute_unrolled_pages(const FilteredZ2Complex& f, int r_max, int lo, int hi);

/// First page index from which the dimensions stay fixed and d_r = 0 in the
/// given list, or nullopt.
std::optional<int> stabilization_page(const std::vector<SpectralPage>& pages);

/// The page-r complex (E_r^ev ⊕ E_r^od, d_r) with cells concatenated by p.
Z2Complex page_complex(const SpectralPage& page);

struct Abutment {
  Z2Bases cohomology;                   // default representatives of H^ev, H^od
  std::vector<size_t> graded_even;      // dim G_p / G_{p+1}, p = 0..N-1
  std::vector<size_t> graded_odd;
  std::vector<size_t> e_inf_even;       // dim E_∞^{p} at even / odd total degree
  std::vector<size_t> e_inf_odd;
  bool matches = false;
};

Abutment abutment(const FilteredZ2Complex& f);

/// Coordinate of the image of ⊗_p det(h_p)^{(-1)^p} under
/// det H(m, ∂) = det E_2 -> det E_3 -> ... -> det E_∞ = det H(m, ∂_t),
/// against the twisted representatives. `untwisted` holds ∂-cocycles of each
/// degree of m (as vectors in m^p); `twisted` holds ∂_t-cocycles.
Rational twisted_det_chain(const FilteredZ2Complex& f, const CohomologyBases& untwisted,
                           const Z2Bases& twisted, std::mt19937_64* rng = nullptr);

}  // namespace ttwist
