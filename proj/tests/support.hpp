#pragma once

#include <bit>
#include <map>
#include <random>
#include <vector>

#include "ttwist/detline.hpp"
#include "ttwist/forms.hpp"
#include "ttwist/pipeline.hpp"
#include "ttwist/random.hpp"
#include "ttwist/spectral.hpp"

namespace ttwist::testing {

// Oracles below are written independently of the library's Gauss-Jordan
// routines: fraction-free elimination and cofactor expansion.

/// Bareiss elimination with row swaps; returns rank and determinant (square
/// input only for the latter).
struct BareissResult {
  size_t rank = 0;
  Rational det;
};

inline BareissResult bareiss(Matrix m) {
  size_t rows = m.rows(), cols = m.cols();
  Rational prev(1), sign(1);
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && m(piv, c).is_zero()) ++piv;
    if (piv == rows) continue;
    if (piv != r) {
      for (size_t j = 0; j < cols; ++j) std::swap(m(piv, j), m(r, j));
      sign = -sign;
    }
    for (size_t i = r + 1; i < rows; ++i) {
      for (size_t j = c + 1; j < cols; ++j) m(i, j) = (m(r, c) * m(i, j) - m(i, c) * m(r, j)) / prev;
      m(i, c) = Rational(0);
    }
    prev = m(r, c);
    ++r;
  }
  BareissResult out;
  out.rank = r;
  if (rows == cols) out.det = (r == rows) ? sign * (rows ? m(rows - 1, cols - 1) : Rational(1)) : Rational(0);
  return out;
}

inline size_t oracle_rank(const Matrix& m) { return bareiss(m).rank; }
inline Rational oracle_det(const Matrix& m) { return bareiss(m).det; }

/// Cofactor expansion along the first row (small matrices only).
inline Rational laplace_det(const Matrix& m) {
  size_t n = m.rows();
  if (n == 0) return Rational(1);
  if (n == 1) return m(0, 0);
  Rational out;
  for (size_t c = 0; c < n; ++c) {
    if (m(0, c).is_zero()) continue;
    Matrix minor(n - 1, n - 1);
    for (size_t i = 1; i < n; ++i)
      for (size_t j = 0, jj = 0; j < n; ++j)
        if (j != c) minor(i - 1, jj++) = m(i, j);
    Rational term = m(0, c) * laplace_det(minor);
    out += (c % 2 == 0) ? term : -term;
  }
  return out;
}

/// Standard basis vectors e_j, chosen greedily, whose images under d are a
/// basis of im d.
inline Matrix greedy_preimage_basis(const Matrix& d) {
  std::vector<Vector> chosen, images;
  for (size_t j = 0; j < d.cols(); ++j) {
    auto trial = images;
    trial.push_back(d.column(j));
    if (oracle_rank(Matrix::from_columns(d.rows(), trial)) > images.size()) {
      images = std::move(trial);
      Vector e(d.cols());
      e[j] = Rational(1);
      chosen.push_back(e);
    }
  }
  return Matrix::from_columns(d.cols(), chosen);
}

/// Torsion Π det[∂b_{i-1} | h_i | b_i]^{(-1)^{i+1}} with b_i chosen among
/// standard basis vectors and determinants by Bareiss elimination.
inline Rational oracle_torsion(const BasedComplex& c, const CohomologyBases& h) {
  Rational tau(1);
  Matrix prev_b;
  for (int i = c.low; i <= c.high(); ++i) {
    size_t k = static_cast<size_t>(i - c.low);
    Matrix b = greedy_preimage_basis(c.d(i));
    Matrix m = h[k];
    if (k > 0) m = hstack(c.d(i - 1) * prev_b, m);
    m = hstack(m, b);
    Rational det = oracle_det(m);
    tau = (((i % 2) + 2) % 2 == 1) ? tau * det : tau / det;
    prev_b = b;
  }
  return tau;
}

/// |λ| of det C^ev ⊗ (det C^od)^{-1} → det H^ev ⊗ (det H^od)^{-1}:
/// det[d_eo b_ev | h_od | b_od] / det[d_oe b_od | h_ev | b_ev].
inline Rational oracle_lemma1(const Z2Complex& z, const Z2Bases& h) {
  Matrix b_ev = greedy_preimage_basis(z.d_eo), b_od = greedy_preimage_basis(z.d_oe);
  Matrix m_ev = hstack(hstack(z.d_oe * b_od, h.even), b_ev);
  Matrix m_od = hstack(hstack(z.d_eo * b_ev, h.odd), b_od);
  return (oracle_det(m_od) / oracle_det(m_ev)).abs();
}

inline Polynomial random_polynomial(size_t nvars, int max_degree, std::mt19937_64& rng) {
  Polynomial p(nvars);
  std::uniform_int_distribution<int> exp(0, max_degree);
  int terms = 1 + static_cast<int>(rng() % 3);
  for (int t = 0; t < terms; ++t) {
    Monomial m(nvars);
    int budget = max_degree;
    for (auto& a : m) {
      a = std::min(budget, exp(rng));
      budget -= a;
    }
    p.add_term(m, random_rational(rng));
  }
  return p;
}

/// Random j-form on Δ^q with coefficient degree <= max_degree.
inline PolyForm random_form(size_t q, int j, int max_degree, std::mt19937_64& rng) {
  PolyForm f(q, j, max_degree);
  for (uint32_t mask = 0; mask < (1u << q); ++mask)
    if (std::popcount(mask) == j && rng() % 2 == 0) f.add(mask, random_polynomial(q, max_degree, rng));
  return f;
}

inline Vector add(const Vector& a, const Vector& b) {
  Vector out = a;
  for (size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

/// Random bounded complex: a direct sum of trivial pieces k and elementary
/// pieces k -> k, conjugated by random invertible matrices in every degree.
inline BasedComplex random_complex(std::mt19937_64& rng, int low, size_t length) {
  std::vector<size_t> betti(length), ranks(length > 0 ? length - 1 : 0);
  for (auto& b : betti) b = rng() % 3;
  for (auto& r : ranks) r = rng() % 3;
  std::vector<size_t> dims(length);
  for (size_t k = 0; k < length; ++k)
    dims[k] = betti[k] + (k > 0 ? ranks[k - 1] : 0) + (k + 1 < length ? ranks[k] : 0);
  // Degree k coordinates: [image of previous | cohomology | sources of next].
  std::vector<Matrix> t(length);
  for (size_t k = 0; k < length; ++k) t[k] = random_invertible(dims[k], rng);
  std::vector<Matrix> diffs;
  for (size_t k = 0; k + 1 < length; ++k) {
    Matrix d(dims[k + 1], dims[k]);
    size_t src = (k > 0 ? ranks[k - 1] : 0) + betti[k];
    for (size_t j = 0; j < ranks[k]; ++j) d(j, src + j) = Rational(1);
    diffs.push_back(t[k + 1] * d * *inverse(t[k]));
  }
  return BasedComplex(low, dims, diffs);
}

inline bool equal_up_to_sign(const Rational& a, const Rational& b) { return a == b || a == -b; }

// The piecewise linear function with the given vertex values.
inline PiecewiseForm linear_function(const OrderedComplex& k, const Vector& values) {
  PiecewiseForm out(k, 0, 1);
  for (int q = 0; q <= k.dim(); ++q)
    for (const auto& s : k.simplices(q)) {
      Polynomial p(static_cast<size_t>(q));
      for (size_t i = 0; i < s.size(); ++i) p += values[s[i]] * Polynomial::barycentric(static_cast<size_t>(q), i);
      out.on(s) = PolyForm::function(static_cast<size_t>(q), 1, p);
    }
  return out;
}

/// Betti numbers of a based complex, by oracle ranks.
inline std::vector<size_t> oracle_betti(const BasedComplex& c) {
  std::vector<size_t> out;
  for (int i = c.low; i <= c.high(); ++i)
    out.push_back(c.dim(i) - oracle_rank(c.d(i)) - oracle_rank(c.d(i - 1)));
  return out;
}

inline Matrix standard_block(size_t ambient, size_t from, size_t count) {
  Matrix m(ambient, count);
  for (size_t j = 0; j < count; ++j) m(from + j, j) = Rational(1);
  return m;
}

// Offset of m^p inside its parity part, recomputed from the dimensions.
inline size_t offset_of(const BasedComplex& m, int p) {
  size_t off = 0;
  for (int j = p % 2; j < p; j += 2) off += m.dim(j);
  return off;
}

// dim (ker ∩ F_p + im) / im for p = 0 .. steps, by Bareiss ranks.
inline std::vector<size_t> graded_oracle(const FilteredZ2Complex& f, int par) {
  size_t amb = f.dim(par);
  Matrix bnd = f.d(1 - par);
  size_t rb = oracle_rank(bnd);
  std::vector<size_t> g;
  for (int p = 0; p <= static_cast<int>(f.steps()); ++p) {
    Matrix fp = f.filtration(par, p);
    // ker ∩ F_p = F_p · ker(d F_p).
    Matrix inside = fp.cols() ? fp * kernel(f.d(par) * fp) : Matrix(amb, 0);
    g.push_back(oracle_rank(hstack(inside, bnd)) - rb);
  }
  std::vector<size_t> graded;
  for (size_t p = 0; p + 1 < g.size(); ++p) graded.push_back(g[p] - g[p + 1]);
  return graded;
}

// Offsets of C^q(K,E) inside the total cochain space, q = 0 .. dim K + 1.
inline std::vector<size_t> total_offsets(const OrderedComplex& k, size_t d) {
  std::vector<size_t> off{0};
  for (int q = 0; q <= k.dim(); ++q) off.push_back(off.back() + k.count(q) * d);
  return off;
}

inline void put_block(Matrix& m, size_t r0, size_t c0, const Matrix& b) {
  for (size_t i = 0; i < b.rows(); ++i)
    for (size_t j = 0; j < b.cols(); ++j) m(r0 + i, c0 + j) += b(i, j);
}

// δ + Σ ϑ_r∪ on the total cochain space, assembled from the coboundary and
// cup product matrices.
inline Matrix total_differential(const OrderedComplex& k, const Representation& rho, const Theta& theta) {
  auto off = total_offsets(k, rho.dim());
  Matrix m(off.back(), off.back());
  for (int q = 0; q < k.dim(); ++q)
    put_block(m, off[static_cast<size_t>(q + 1)], off[static_cast<size_t>(q)], twisted_coboundary(k, rho, q));
  for (auto& [r, th] : theta)
    for (int q = 0; q + r <= k.dim(); ++q)
      put_block(m, off[static_cast<size_t>(q + r)], off[static_cast<size_t>(q)], cup_matrix(k, rho, r, th, q));
  return m;
}

// Even/odd blocks of a total-space operator, parts concatenated by degree.
inline Matrix parity_block(const OrderedComplex& k, size_t d, const Matrix& m, int row_parity, int col_parity) {
  auto off = total_offsets(k, d);
  std::vector<size_t> rows, cols;
  for (int q = 0; q <= k.dim(); ++q)
    for (size_t i = off[static_cast<size_t>(q)]; i < off[static_cast<size_t>(q + 1)]; ++i) {
      if (q % 2 == row_parity) rows.push_back(i);
      if (q % 2 == col_parity) cols.push_back(i);
    }
  Matrix out(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

inline std::pair<size_t, size_t> oracle_mw_dims(const OrderedComplex& k, const Representation& rho, const Theta& theta) {
  Matrix d = total_differential(k, rho, theta);
  size_t d_eo = oracle_rank(parity_block(k, rho.dim(), d, 1, 0));
  size_t d_oe = oracle_rank(parity_block(k, rho.dim(), d, 0, 1));
  size_t ev = 0, od = 0;
  for (int q = 0; q <= k.dim(); ++q) (q % 2 == 0 ? ev : od) += k.count(q) * rho.dim();
  return {ev - d_eo - d_oe, od - d_eo - d_oe};
}

// Σ c(τ) ω_τ for an arbitrary (not necessarily closed) cochain c.
inline PiecewiseForm whitney_of_cochain(const OrderedComplex& k, int degree, const Vector& c) {
  PiecewiseForm out(k, degree, 1);
  for (int q = degree; q <= k.dim(); ++q)
    for (const auto& s : k.simplices(q)) {
      PolyForm& f = out.on(s);
      for (uint32_t mask = 0; mask < (1u << s.size()); ++mask) {
        if (std::popcount(mask) != degree + 1) continue;
        std::vector<size_t> loc;
        Simplex sub;
        for (size_t i = 0; i < s.size(); ++i)
          if (mask & (1u << i)) {
            loc.push_back(i);
            sub.push_back(s[i]);
          }
        const Rational& v = c[k.index(sub)];
        if (!v.is_zero()) f += v * PolyForm::whitney(static_cast<size_t>(q), loc);
      }
    }
  return out;
}

inline Vector random_vector(size_t n, std::mt19937_64& rng) {
  Vector v(n);
  for (auto& x : v) x = random_rational(rng);
  return v;
}

inline Vector random_cocycle(const OrderedComplex& k, int degree, std::mt19937_64& rng) {
  BasedComplex c = cochain_complex(k);
  Matrix z = kernel(c.d(degree));
  Vector out(k.count(degree));
  for (size_t j = 0; j < z.cols(); ++j) {
    Rational a = random_rational(rng);
    for (size_t i = 0; i < out.size(); ++i) out[i] += a * z(i, j);
  }
  return out;
}

// Coordinates for forms on Δ^q of degree j with coefficient degree <= bound.
class FormCoordinates {
 public:
  FormCoordinates(size_t q, int j, int bound) : q_(q), j_(j), bound_(bound) {
    if (bound < 0) return;
    std::vector<Monomial> monos;
    Monomial m(q);
    enumerate(m, 0, bound, monos);
    for (uint32_t mask = 0; mask < (1u << q); ++mask)
      if (std::popcount(mask) == j)
        for (auto& mono : monos) {
          index_[{mask, mono}] = elems_.size();
          elems_.push_back({mask, mono});
        }
  }
  size_t size() const { return elems_.size(); }
  PolyForm form(size_t i) const {
    Polynomial p(q_);
    p.add_term(elems_[i].second, Rational(1));
    PolyForm f(q_, j_, bound_);
    f.add(elems_[i].first, p);
    return f;
  }
  Vector coords(const PolyForm& f) const {
    Vector v(size());
    for (auto& [mask, poly] : f.components())
      for (auto& [mono, c] : poly.terms()) v[index_.at({mask, mono})] = c;
    return v;
  }

 private:
  static void enumerate(Monomial& m, size_t i, int budget, std::vector<Monomial>& out) {
    if (i == m.size()) {
      out.push_back(m);
      return;
    }
    for (int a = 0; a <= budget; ++a) {
      m[i] = a;
      enumerate(m, i + 1, budget - a, out);
    }
    m[i] = 0;
  }
  size_t q_;
  int j_, bound_;
  std::vector<std::pair<uint32_t, Monomial>> elems_;
  std::map<std::pair<uint32_t, Monomial>, size_t> index_;
};

// Ranks of the complex of compatible piecewise polynomial forms on K with
// coefficient degree <= r - k in form degree k. A^k is the kernel of the
// compatibility equations C_k on the per-simplex coordinates, so with D_k the
// exterior derivative, dim Z^k = n_k - rank[C_k; D_k] and
// dim B^{k+1} = rank[C_k; D_k] - rank C_k.
struct BoundedFormRanks {
  std::vector<size_t> unknowns, constraint_rank, closed_rank;
  size_t cohomology(size_t k) const {
    size_t h = unknowns[k] - closed_rank[k];
    if (k > 0) h -= closed_rank[k - 1] - constraint_rank[k - 1];
    return h;
  }
};

inline BoundedFormRanks bounded_form_ranks(const OrderedComplex& k, int r) {
  BoundedFormRanks out;
  int top = k.dim();
  for (int deg = 0; deg <= top; ++deg) {
    std::vector<size_t> off;
    size_t n = 0;
    for (int q = deg; q <= top; ++q) {
      off.push_back(n);
      n += k.count(q) * FormCoordinates(static_cast<size_t>(q), deg, r - deg).size();
    }
    auto at = [&](int q) { return off[static_cast<size_t>(q - deg)]; };
    ColumnReducer red;
    // Compatibility: (ε^i)^* φ_σ - φ_{ε_i σ} = 0, one functional per coordinate.
    for (int q = deg + 1; q <= top; ++q) {
      FormCoordinates hi(static_cast<size_t>(q), deg, r - deg), lo(static_cast<size_t>(q - 1), deg, r - deg);
      for (size_t i = 0; i <= static_cast<size_t>(q); ++i) {
        AffineSimplexMap eps = AffineSimplexMap::face(static_cast<size_t>(q), i);
        std::vector<Vector> pb;
        for (size_t b = 0; b < hi.size(); ++b) pb.push_back(lo.coords(pullback(eps, hi.form(b))));
        for (size_t s = 0; s < k.count(q); ++s) {
          size_t fs = k.index(face(k.simplices(q)[s], i));
          for (size_t row = 0; row < lo.size(); ++row) {
            std::vector<SparseEntry> eq;
            for (size_t b = 0; b < hi.size(); ++b)
              if (!pb[b][row].is_zero()) eq.push_back({static_cast<uint32_t>(at(q) + s * hi.size() + b), pb[b][row]});
            eq.push_back({static_cast<uint32_t>(at(q - 1) + fs * lo.size() + row), Rational(-1)});
            red.add(make_sparse_column(std::move(eq)));
          }
        }
      }
    }
    out.unknowns.push_back(n);
    out.constraint_rank.push_back(red.rank());
    // Rows of d, one functional per output coordinate.
    for (int q = deg + 1; q <= top; ++q) {
      FormCoordinates src(static_cast<size_t>(q), deg, r - deg), dst(static_cast<size_t>(q), deg + 1, r - deg - 1);
      std::vector<Vector> dcols;
      for (size_t b = 0; b < src.size(); ++b) dcols.push_back(dst.coords(exterior_derivative(src.form(b))));
      for (size_t s = 0; s < k.count(q); ++s)
        for (size_t row = 0; row < dst.size(); ++row) {
          std::vector<SparseEntry> eq;
          for (size_t b = 0; b < src.size(); ++b)
            if (!dcols[b][row].is_zero()) eq.push_back({static_cast<uint32_t>(at(q) + s * src.size() + b), dcols[b][row]});
          red.add(make_sparse_column(std::move(eq)));
        }
    }
    out.closed_rank.push_back(red.rank());
  }
  return out;
}

struct DeRhamCheck {
  std::vector<size_t> form_cohomology;  // dim H^q of the bounded form complex
  std::vector<size_t> image_rank;       // rank of the induced map to H^q(K)
  std::vector<size_t> betti;            // dim H^q(K) by oracle ranks
  bool chain_map = true;
  bool isomorphism() const { return chain_map && form_cohomology == betti && image_rank == betti; }
};

/// Integration from compatible forms with coefficient degree <= dim K + 1 - q
/// in form degree q to simplicial cochains, compared on cohomology. The map
/// is onto H^q(K) through Whitney lifts, so equal dimensions make it an
/// isomorphism.
inline DeRhamCheck derham_check(const OrderedComplex& k, std::mt19937_64& rng) {
  BoundedFormRanks a = bounded_form_ranks(k, k.dim() + 1);
  BasedComplex c = cochain_complex(k);
  DeRhamCheck out;
  out.betti = oracle_betti(c);
  for (int deg = 0; deg <= k.dim(); ++deg) {
    auto q = static_cast<size_t>(deg);
    out.form_cohomology.push_back(a.cohomology(q));
    // Whitney lifts of a cocycle basis: closed, compatible, within the bound.
    Matrix z = kernel(c.d(deg));
    std::vector<Vector> images;
    for (size_t j = 0; j < z.cols(); ++j) {
      PiecewiseForm w = whitney_lift(k, deg, z.column(j));
      if (!w.compatible() || !exterior_derivative(w).is_zero() || w.coefficient_degree() > k.dim() + 1 - deg)
        out.chain_map = false;
      images.push_back(integration_map(w));
    }
    Matrix img = Matrix::from_columns(k.count(deg), images);
    Matrix sb = c.d(deg - 1);
    out.image_rank.push_back(oracle_rank(hstack(img, sb)) - oracle_rank(sb));
    // Integration commutes with d on random compatible forms.
    if (deg < k.dim()) {
      Vector fun(k.count(0));
      for (auto& v : fun) v = random_rational(rng);
      PiecewiseForm eta = wedge(linear_function(k, fun), whitney_lift(k, deg, random_cocycle(k, deg, rng)));
      if (!(integration_map(exterior_derivative(eta)) == c.d(deg) * integration_map(eta))) out.chain_map = false;
    }
  }
  return out;
}

}  // namespace ttwist::testing
