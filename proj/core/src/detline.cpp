#include "ttwist/detline.hpp"

#include "ttwist/errors.hpp"
#include "ttwist/random.hpp"

namespace ttwist {

void DetElement::require_valid() const {
  if (!valid()) throw InputError("determinant-line element with zero coordinate");
}

DetElement tensor(const DetElement& a, const DetElement& b) {
  a.require_valid();
  b.require_valid();
  if (a.basis_id() == "k" && a.grade() == 0) return DetElement(b.line(), a.coordinate() * b.coordinate());
  if (b.basis_id() == "k" && b.grade() == 0) return DetElement(a.line(), a.coordinate() * b.coordinate());
  return DetElement({a.grade() + b.grade(), "(" + a.basis_id() + ")⊗(" + b.basis_id() + ")"},
                    a.coordinate() * b.coordinate());
}

DetElement commute(const DetElement& a, const DetElement& b) {
  DetElement t = tensor(b, a);
  if ((a.grade() * b.grade()) % 2 != 0) return DetElement(t.line(), -t.coordinate());
  return t;
}

DetElement invert(const DetElement& a) {
  a.require_valid();
  if (a.basis_id() == "k" && a.grade() == 0) return DetElement(a.line(), a.coordinate().inverse());
  std::string id = a.basis_id();
  const std::string pre = "(", post = ")^-1";
  if (id.size() > pre.size() + post.size() && id.starts_with(pre) && id.ends_with(post))
    id = id.substr(1, id.size() - pre.size() - post.size());
  else
    id = pre + id + post;
  return DetElement({-a.grade(), id}, a.coordinate().inverse());
}

BasedComplex::BasedComplex(int low_, std::vector<size_t> dims_, std::vector<Matrix> diffs,
                           std::vector<std::string> ids)
    : low(low_), dims(std::move(dims_)), basis_ids(std::move(ids)), differentials(std::move(diffs)) {
  if (basis_ids.empty())
    for (size_t k = 0; k < dims.size(); ++k) basis_ids.push_back("C^" + std::to_string(low + static_cast<int>(k)));
  validate();
}

size_t BasedComplex::dim(int i) const {
  if (i < low || i > high()) return 0;
  return dims[static_cast<size_t>(i - low)];
}

Matrix BasedComplex::d(int i) const {
  if (i < low || i >= high()) return Matrix(dim(i + 1), dim(i));
  return differentials[static_cast<size_t>(i - low)];
}

void BasedComplex::validate() const {
  if (dims.empty()) throw InputError("complex without degrees");
  if (differentials.size() + 1 != dims.size())
    throw InputError("complex needs one differential between consecutive degrees");
  if (basis_ids.size() != dims.size()) throw InputError("one basis id per degree required");
  for (size_t k = 0; k < differentials.size(); ++k) {
    const Matrix& m = differentials[k];
    if (m.rows() != dims[k + 1] || m.cols() != dims[k])
      throw InputError("differential " + std::to_string(k) + " has the wrong shape");
  }
  for (size_t k = 0; k + 1 < differentials.size(); ++k)
    if (!(differentials[k + 1] * differentials[k]).is_zero())
      throw InputError("d∘d != 0 at degree " + std::to_string(low + static_cast<int>(k)));
}

std::vector<size_t> BasedComplex::betti() const {
  std::vector<size_t> out;
  for (int i = low; i <= high(); ++i) out.push_back(dim(i) - rank(d(i)) - rank(d(i - 1)));
  return out;
}

CohomologyBases default_cohomology_bases(const BasedComplex& c) {
  CohomologyBases out;
  for (int i = c.low; i <= c.high(); ++i)
    out.push_back(complement_columns(kernel(c.d(i)), c.d(i - 1), c.dim(i)));
  return out;
}

namespace {

// Standard basis vectors of Q^n at the given positions.
Matrix unit_columns(size_t n, const std::vector<size_t>& at) {
  Matrix m(n, at.size());
  for (size_t j = 0; j < at.size(); ++j) m(at[j], j) = Rational(1);
  return m;
}

}  // namespace

Rational km_scalar(const BasedComplex& c, const CohomologyBases& h, std::mt19937_64* rng) {
  if (h.size() != c.length()) throw InputError("need cohomology representatives for every degree");
  // b[k]: lifts in C^{low+k} of a basis of im ∂.
  std::vector<Matrix> b(c.length());
  for (int i = c.low; i <= c.high(); ++i) {
    size_t k = static_cast<size_t>(i - c.low);
    Matrix di = c.d(i);
    b[k] = unit_columns(c.dim(i), column_space_analysis(di).pivot_columns);
    if (rng && b[k].cols() > 0) {
      Matrix z = kernel(di);
      b[k] = b[k] * random_invertible(b[k].cols(), *rng);
      if (z.cols() > 0) b[k] = b[k] + z * random_matrix(z.cols(), b[k].cols(), *rng);
    }
  }
  Rational tau(1);
  for (int i = c.low; i <= c.high(); ++i) {
    size_t k = static_cast<size_t>(i - c.low);
    const Matrix& hi = h[k];
    size_t n = c.dim(i);
    if (hi.rows() != n) throw InputError("cohomology representative has the wrong length in degree " + std::to_string(i));
    if (!(c.d(i) * hi).is_zero())
      throw InputError("cohomology representative is not a cocycle in degree " + std::to_string(i));
    Matrix lift = hi;
    Matrix prev_image = k > 0 ? c.d(i - 1) * b[k - 1] : Matrix(n, 0);
    if (rng && lift.cols() > 0 && k > 0 && c.dim(i - 1) > 0)
      lift = lift + c.d(i - 1) * random_matrix(c.dim(i - 1), lift.cols(), *rng);
    if (prev_image.cols() + lift.cols() + b[k].cols() != n)
      throw InputError("cohomology representatives in degree " + std::to_string(i) +
                       " do not have the dimension of H^" + std::to_string(i));
    Matrix m = hstack(hstack(prev_image, lift), b[k]);
    Rational det = determinant(m);
    if (det.is_zero())
      throw InputError("cohomology representatives in degree " + std::to_string(i) + " do not project to a basis");
    if (((i % 2) + 2) % 2 == 1)
      tau *= det;
    else
      tau /= det;
  }
  return tau;
}

Z2Complex::Z2Complex(Matrix eo, Matrix oe)
    : even_dim(eo.cols()), odd_dim(eo.rows()), d_eo(std::move(eo)), d_oe(std::move(oe)) {
  validate();
}

void Z2Complex::validate() const {
  if (d_eo.rows() != odd_dim || d_eo.cols() != even_dim || d_oe.rows() != even_dim || d_oe.cols() != odd_dim)
    throw InputError("Z/2-graded differentials have inconsistent shapes");
  if (!(d_oe * d_eo).is_zero() || !(d_eo * d_oe).is_zero())
    throw InputError("Z/2-graded differential does not square to zero");
}

size_t Z2Complex::h_even() const { return even_dim - rank(d_eo) - rank(d_oe); }
size_t Z2Complex::h_odd() const { return odd_dim - rank(d_oe) - rank(d_eo); }

Z2Bases default_z2_bases(const Z2Complex& z) {
  return {complement_columns(kernel(z.d_eo), z.d_oe, z.even_dim),
          complement_columns(kernel(z.d_oe), z.d_eo, z.odd_dim)};
}

namespace {

BasedComplex four_term(const Z2Complex& z, const Matrix& a) {
  Matrix pi = a.cols() ? *solve(a, z.d_oe) : Matrix(0, z.odd_dim);
  return BasedComplex(0, {a.cols(), z.even_dim, z.odd_dim, a.cols()}, {a, z.d_eo, pi},
                      {"A", z.even_id, z.odd_id, z.odd_id + "/B"});
}

}  // namespace

BasedComplex lemma1_complex(const Z2Complex& z) {
  return four_term(z, z.d_oe.select_columns(column_space_analysis(z.d_oe).pivot_columns));
}

Rational lemma1_scalar(const Z2Complex& z, const Z2Bases& h, std::mt19937_64* rng) {
  z.validate();
  Matrix a = z.d_oe.select_columns(column_space_analysis(z.d_oe).pivot_columns);
  if (rng && a.cols() > 0) a = a * random_invertible(a.cols(), *rng);
  BasedComplex c = four_term(z, a);
  CohomologyBases hb{Matrix(a.cols(), 0), h.even, h.odd, Matrix(a.cols(), 0)};
  return km_scalar(c, hb, rng).inverse();
}

namespace {

std::vector<size_t> parity_offsets(const BasedComplex& c, size_t& even_total, size_t& odd_total) {
  std::vector<size_t> off;
  even_total = odd_total = 0;
  for (int i = c.low; i <= c.high(); ++i) {
    size_t& t = (((i % 2) + 2) % 2 == 0) ? even_total : odd_total;
    off.push_back(t);
    t += c.dim(i);
  }
  return off;
}

}  // namespace

Z2Complex parity_collapse(const BasedComplex& c) {
  size_t ev = 0, od = 0;
  auto off = parity_offsets(c, ev, od);
  Matrix eo(od, ev), oe(ev, od);
  for (int i = c.low; i < c.high(); ++i) {
    size_t k = static_cast<size_t>(i - c.low);
    Matrix& target = (((i % 2) + 2) % 2 == 0) ? eo : oe;
    target.set_block(off[k + 1], off[k], c.d(i));
  }
  return Z2Complex(std::move(eo), std::move(oe));
}

Z2Bases parity_collapse_bases(const BasedComplex& c, const CohomologyBases& h) {
  size_t ev = 0, od = 0;
  auto off = parity_offsets(c, ev, od);
  std::vector<Vector> even, odd;
  for (int i = c.low; i <= c.high(); ++i) {
    size_t k = static_cast<size_t>(i - c.low);
    bool is_even = ((i % 2) + 2) % 2 == 0;
    size_t total = is_even ? ev : od;
    for (size_t j = 0; j < h[k].cols(); ++j) {
      Vector v(total);
      for (size_t r = 0; r < h[k].rows(); ++r) v[off[k] + r] = h[k](r, j);
      (is_even ? even : odd).push_back(std::move(v));
    }
  }
  return {Matrix::from_columns(ev, even), Matrix::from_columns(od, odd)};
}

}  // namespace ttwist
