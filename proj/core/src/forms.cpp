#include "ttwist/forms.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "ttwist/errors.hpp"

namespace ttwist {

int total_degree(const Monomial& m) {
  int s = 0;
  for (int a : m) s += a;
  return s;
}

bool GradedLex::operator()(const Monomial& a, const Monomial& b) const {
  int da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  return a > b;  // x1 before x2 within a degree
}

Polynomial Polynomial::constant(size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Monomial(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(size_t nvars, size_t i) {
  Polynomial p(nvars);
  Monomial m(nvars, 0);
  m.at(i) = 1;
  p.add_term(m, Rational(1));
  return p;
}

Polynomial Polynomial::barycentric(size_t q, size_t i) {
  if (i > q) throw InputError("barycentric index out of range");
  if (i > 0) return variable(q, i - 1);
  Polynomial p = constant(q, Rational(1));
  for (size_t k = 0; k < q; ++k) p -= variable(q, k);
  return p;
}

int Polynomial::degree() const {
  if (terms_.empty()) return -1;
  return total_degree(terms_.rbegin()->first);
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (m.size() != nvars_) throw InputError("monomial has the wrong number of variables");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw InputError("polynomials live in different rings");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw InputError("polynomials live in different rings");
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw InputError("polynomials live in different rings");
  Polynomial out(a.nvars_);
  Monomial m(a.nvars_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      for (size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      out.add_term(m, ca * cb);
    }
  return out;
}

Polynomial Polynomial::derivative(size_t i) const {
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m.at(i) == 0) continue;
    Monomial n = m;
    --n[i];
    out.add_term(n, c * Rational(m[i]));
  }
  return out;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& subs, size_t target_nvars) const {
  if (subs.size() != nvars_) throw InputError("substitution needs one polynomial per variable");
  std::vector<std::vector<Polynomial>> powers(nvars_);
  for (size_t i = 0; i < nvars_; ++i) powers[i].push_back(constant(target_nvars, Rational(1)));
  Polynomial out(target_nvars);
  for (const auto& [m, c] : terms_) {
    Polynomial t = constant(target_nvars, c);
    for (size_t i = 0; i < nvars_; ++i) {
      while (static_cast<int>(powers[i].size()) <= m[i]) powers[i].push_back(powers[i].back() * subs[i]);
      if (m[i] > 0) t = t * powers[i][static_cast<size_t>(m[i])];
    }
    out += t;
  }
  return out;
}

namespace {

std::string monomial_str(const Monomial& m) {
  std::string out;
  for (size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += "x" + std::to_string(i + 1);
    if (m[i] > 1) out += "^" + std::to_string(m[i]);
  }
  return out;
}

std::string mask_str(uint32_t mask) {
  std::string out;
  for (uint32_t i = 0; i < 32; ++i)
    if (mask & (1u << i)) out += (out.empty() ? "dx" : "^dx") + std::to_string(i + 1);
  return out;
}

}  // namespace

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += c.str();
    std::string ms = monomial_str(m);
    if (!ms.empty()) out += "*" + ms;
  }
  return out;
}

AffineSimplexMap AffineSimplexMap::identity(size_t q) {
  std::vector<size_t> vs(q + 1);
  for (size_t i = 0; i <= q; ++i) vs[i] = i;
  return vertices(q, vs);
}

AffineSimplexMap AffineSimplexMap::face(size_t q, size_t i) {
  std::vector<size_t> vs;
  for (size_t k = 0; k <= q; ++k)
    if (k != i) vs.push_back(k);
  return vertices(q, vs);
}

AffineSimplexMap AffineSimplexMap::vertices(size_t q, const std::vector<size_t>& vs) {
  if (vs.empty()) throw InputError("affine map needs at least one vertex");
  AffineSimplexMap f;
  f.p = vs.size() - 1;
  f.q = q;
  for (size_t v : vs) {
    if (v > q) throw InputError("vertex outside the target simplex");
    Vector b(q + 1);
    b[v] = Rational(1);
    f.vertex_images.push_back(std::move(b));
  }
  return f;
}

AffineSimplexMap AffineSimplexMap::compose(const AffineSimplexMap& first) const {
  if (first.q != p) throw InputError("affine maps are not composable");
  AffineSimplexMap out;
  out.p = first.p;
  out.q = q;
  for (const auto& w : first.vertex_images) {
    Vector b(q + 1);
    for (size_t m = 0; m <= p; ++m)
      if (!w[m].is_zero())
        for (size_t i = 0; i <= q; ++i) b[i] += w[m] * vertex_images[m][i];
    out.vertex_images.push_back(std::move(b));
  }
  return out;
}

void AffineSimplexMap::validate() const {
  if (vertex_images.size() != p + 1) throw InputError("affine map needs p+1 vertex images");
  for (const auto& b : vertex_images) {
    if (b.size() != q + 1) throw InputError("vertex image has the wrong length");
    Rational s(0);
    for (const auto& x : b) {
      if (x.sign() < 0) throw InputError("vertex image outside the simplex");
      s += x;
    }
    if (!s.is_one()) throw InputError("barycentric coordinates must sum to 1");
  }
}

int wedge_sign(uint32_t a, uint32_t b) {
  if (a & b) return 0;
  int inv = 0;
  for (uint32_t i = 0; i < 32; ++i)
    if (a & (1u << i)) inv += std::popcount(b & ((1u << i) - 1));
  return inv % 2 == 0 ? 1 : -1;
}

PolyForm::PolyForm(size_t q, int degree, int bound) : q_(q), j_(degree), bound_(bound) {
  // Degrees above q are allowed and only hold the zero form.
  if (degree < 0) throw InputError("negative form degree");
  if (q > 31) throw InputError("simplex dimension too large for forms");
}

PolyForm PolyForm::term(size_t q, int bound, const Polynomial& f, const std::vector<size_t>& dx) {
  PolyForm out(q, static_cast<int>(dx.size()), bound);
  uint32_t mask = 0;
  int sign = 1;
  for (size_t i : dx) {
    if (i < 1 || i > q) throw InputError("dx index out of range");
    uint32_t bit = 1u << (i - 1);
    int s = wedge_sign(mask, bit);
    if (s == 0) return out;
    sign *= s;
    mask |= bit;
  }
  out.add(mask, Rational(sign) * f);
  out.validate();
  return out;
}

PolyForm PolyForm::function(size_t q, int bound, const Polynomial& f) { return term(q, bound, f, {}); }

PolyForm PolyForm::dlambda(size_t q, size_t i) {
  PolyForm out(q, 1, 0);
  if (i > q) throw InputError("barycentric index out of range");
  if (i > 0) {
    out.add(1u << (i - 1), Polynomial::constant(q, Rational(1)));
  } else {
    for (size_t k = 0; k < q; ++k) out.add(1u << k, Polynomial::constant(q, Rational(-1)));
  }
  return out;
}

PolyForm PolyForm::whitney(size_t q, const std::vector<size_t>& face) {
  if (face.empty()) throw InputError("Whitney form of an empty face");
  int p = static_cast<int>(face.size()) - 1;
  PolyForm out(q, p, 1);
  for (size_t k = 0; k < face.size(); ++k) {
    PolyForm t = function(q, 1, Polynomial::barycentric(q, face[k]));
    for (size_t m = 0; m < face.size(); ++m)
      if (m != k) t = wedge(t, dlambda(q, face[m]));
    if (k % 2 == 1) t *= Rational(-1);
    out += t;
  }
  out *= factorial(static_cast<unsigned>(p));
  return out.with_bound(1);
}

int PolyForm::coefficient_degree() const {
  int d = -1;
  for (const auto& [m, f] : comps_) d = std::max(d, f.degree());
  return d;
}

void PolyForm::validate() const {
  for (const auto& [m, f] : comps_) {
    if (std::popcount(m) != j_) throw InputError("form component has the wrong degree");
    if (m >> q_) throw InputError("form uses dx beyond the simplex dimension");
    if (f.is_zero()) throw InputError("form stores a zero component");
    if (f.nvars() != q_) throw InputError("form coefficient in the wrong ring");
  }
  if (coefficient_degree() > bound_) throw InputError("form exceeds its coefficient degree bound");
}

PolyForm PolyForm::with_bound(int bound) const {
  PolyForm out = *this;
  out.bound_ = bound;
  out.validate();
  return out;
}

void PolyForm::add(uint32_t mask, const Polynomial& f) {
  if (f.is_zero()) return;
  auto [it, inserted] = comps_.try_emplace(mask, f);
  if (!inserted) {
    it->second += f;
    if (it->second.is_zero()) comps_.erase(it);
  }
}

PolyForm& PolyForm::operator+=(const PolyForm& o) {
  if (o.q_ != q_ || o.j_ != j_) throw InputError("adding forms of different type");
  for (const auto& [m, f] : o.comps_) add(m, f);
  bound_ = std::max(bound_, o.bound_);
  return *this;
}

PolyForm& PolyForm::operator-=(const PolyForm& o) {
  if (o.q_ != q_ || o.j_ != j_) throw InputError("subtracting forms of different type");
  for (const auto& [m, f] : o.comps_) add(m, Rational(-1) * f);
  bound_ = std::max(bound_, o.bound_);
  return *this;
}

PolyForm& PolyForm::operator*=(const Rational& s) {
  if (s.is_zero()) {
    comps_.clear();
    return *this;
  }
  for (auto& [m, f] : comps_) f *= s;
  return *this;
}

std::string PolyForm::str() const {
  std::string out;
  for (const auto& [mask, f] : comps_)
    for (const auto& [m, c] : f.terms()) {
      if (!out.empty()) out += " + ";
      out += c.str();
      std::string ms = monomial_str(m);
      if (!ms.empty()) out += "*" + ms;
      if (mask) out += " " + mask_str(mask);
    }
  return out.empty() ? "0" : out;
}

PolyForm wedge(const PolyForm& a, const PolyForm& b) {
  if (a.simplex_dim() != b.simplex_dim()) throw InputError("wedge of forms on different simplexes");
  size_t q = a.simplex_dim();
  int deg = a.degree() + b.degree();
  PolyForm out(q, deg, a.bound() + b.bound());
  for (const auto& [ma, fa] : a.components())
    for (const auto& [mb, fb] : b.components()) {
      int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      Polynomial p = fa * fb;
      if (s < 0) p *= Rational(-1);
      out.add(ma | mb, p);
    }
  return out;
}

PolyForm exterior_derivative(const PolyForm& a) {
  size_t q = a.simplex_dim();
  PolyForm out(q, a.degree() + 1, a.bound());
  for (const auto& [m, f] : a.components())
    for (size_t i = 0; i < q; ++i) {
      uint32_t bit = 1u << i;
      int s = wedge_sign(bit, m);
      if (s == 0) continue;
      Polynomial df = f.derivative(i);
      if (df.is_zero()) continue;
      if (s < 0) df *= Rational(-1);
      out.add(m | bit, df);
    }
  return out;
}

PolyForm pullback(const AffineSimplexMap& f, const PolyForm& a) {
  if (a.simplex_dim() != f.q) throw InputError("pullback: form lives on the wrong simplex");
  size_t p = f.p, q = f.q;
  if (static_cast<size_t>(a.degree()) > p) return PolyForm(p, a.degree(), a.bound());
  // x_i = P_{i0} + Σ_k J_{ik} y_k with J_{ik} = P_{ik} - P_{i0}.
  std::vector<Polynomial> subs;
  Matrix jac(q, p);
  for (size_t i = 1; i <= q; ++i) {
    Polynomial s = Polynomial::constant(p, f.vertex_images[0][i]);
    for (size_t k = 1; k <= p; ++k) {
      Rational jk = f.vertex_images[k][i] - f.vertex_images[0][i];
      jac(i - 1, k - 1) = jk;
      if (!jk.is_zero()) s += Rational(jk) * Polynomial::variable(p, k - 1);
    }
    subs.push_back(std::move(s));
  }
  PolyForm out(p, a.degree(), a.bound());
  // Target masks of the right size.
  std::vector<uint32_t> targets;
  for (uint32_t m = 0; m < (1u << p); ++m)
    if (std::popcount(m) == a.degree()) targets.push_back(m);
  for (const auto& [mask, coef] : a.components()) {
    Polynomial g = coef.substitute(subs, p);
    if (g.is_zero()) continue;
    std::vector<size_t> rows;
    for (size_t i = 0; i < q; ++i)
      if (mask & (1u << i)) rows.push_back(i);
    for (uint32_t t : targets) {
      std::vector<size_t> cols;
      for (size_t k = 0; k < p; ++k)
        if (t & (1u << k)) cols.push_back(k);
      Rational minor = rows.empty() ? Rational(1) : determinant(jac.select_rows(rows).select_columns(cols));
      if (minor.is_zero()) continue;
      out.add(t, minor * g);
    }
  }
  return out;
}

Rational integrate(const PolyForm& a) {
  size_t q = a.simplex_dim();
  if (static_cast<size_t>(a.degree()) != q) throw InputError("can only integrate top-degree forms");
  Rational total(0);
  for (const auto& [mask, f] : a.components())
    for (const auto& [m, c] : f.terms()) {
      Rational v = c;
      for (int e : m) v *= factorial(static_cast<unsigned>(e));
      v /= factorial(static_cast<unsigned>(q + static_cast<size_t>(total_degree(m))));
      total += v;
    }
  return total;
}

// ---------------------------------------------------------------------------

PiecewiseForm::PiecewiseForm(const OrderedComplex& k, int degree_, int bound_)
    : complex(&k), degree(degree_), bound(bound_) {
  if (degree < 0) throw InputError("negative form degree");
  for (int q = degree; q <= k.dim(); ++q) {
    std::vector<PolyForm> row;
    for (size_t i = 0; i < k.count(q); ++i) row.emplace_back(static_cast<size_t>(q), degree, bound);
    by_dim.push_back(std::move(row));
  }
}

const PolyForm& PiecewiseForm::on(const Simplex& s) const {
  int q = static_cast<int>(s.size()) - 1;
  if (q < degree) throw InputError("form has no component on a simplex below its degree");
  return by_dim.at(static_cast<size_t>(q - degree)).at(complex->index(s));
}

PolyForm& PiecewiseForm::on(const Simplex& s) {
  int q = static_cast<int>(s.size()) - 1;
  if (q < degree) throw InputError("form has no component on a simplex below its degree");
  return by_dim.at(static_cast<size_t>(q - degree)).at(complex->index(s));
}

int PiecewiseForm::coefficient_degree() const {
  int d = -1;
  for (const auto& row : by_dim)
    for (const auto& f : row) d = std::max(d, f.coefficient_degree());
  return d;
}

bool PiecewiseForm::is_zero() const {
  for (const auto& row : by_dim)
    for (const auto& f : row)
      if (!f.is_zero()) return false;
  return true;
}

void PiecewiseForm::check_compatible() const {
  for (int q = degree + 1; q <= complex->dim(); ++q)
    for (const auto& s : complex->simplices(q)) {
      const PolyForm& f = on(s);
      for (size_t i = 0; i < s.size(); ++i)
        if (!(on(face(s, i)) == pullback(AffineSimplexMap::face(static_cast<size_t>(q), i), f)))
          throw InputError("piecewise form is not compatible across face " + complex->label(face(s, i)) +
                           " of " + complex->label(s));
    }
}

bool PiecewiseForm::compatible() const {
  try {
    check_compatible();
    return true;
  } catch (const InputError&) {
    return false;
  }
}

std::string PiecewiseForm::str() const {
  std::ostringstream os;
  bool any = false;
  for (int q = degree; q <= complex->dim(); ++q)
    for (const auto& s : complex->simplices(q)) {
      const PolyForm& f = on(s);
      if (f.is_zero()) continue;
      any = true;
      os << "[";
      for (size_t i = 0; i < s.size(); ++i) os << (i ? " " : "") << complex->vertex_names()[s[i]];
      os << "] " << f.str() << "\n";
    }
  if (!any) os << "0\n";
  return os.str();
}

PiecewiseForm constant_form(const OrderedComplex& k, const Rational& c) {
  PiecewiseForm out(k, 0, 0);
  for (int q = 0; q <= k.dim(); ++q)
    for (auto& f : out.by_dim[static_cast<size_t>(q)])
      f = PolyForm::function(static_cast<size_t>(q), 0, Polynomial::constant(static_cast<size_t>(q), c));
  return out;
}

PiecewiseForm wedge(const PiecewiseForm& a, const PiecewiseForm& b) {
  if (a.complex != b.complex) throw InputError("wedge of forms on different complexes");
  PiecewiseForm out(*a.complex, a.degree + b.degree, a.bound + b.bound);
  for (int q = out.degree; q <= a.complex->dim(); ++q)
    for (const auto& s : a.complex->simplices(q)) out.on(s) = wedge(a.on(s), b.on(s));
  return out;
}

PiecewiseForm exterior_derivative(const PiecewiseForm& a) {
  PiecewiseForm out(*a.complex, a.degree + 1, a.bound);
  for (int q = out.degree; q <= a.complex->dim(); ++q)
    for (const auto& s : a.complex->simplices(q)) out.on(s) = exterior_derivative(a.on(s));
  return out;
}

PiecewiseForm operator+(const PiecewiseForm& a, const PiecewiseForm& b) {
  if (a.complex != b.complex || a.degree != b.degree) throw InputError("adding incompatible piecewise forms");
  PiecewiseForm out = a;
  out.bound = std::max(a.bound, b.bound);
  for (size_t r = 0; r < out.by_dim.size(); ++r)
    for (size_t i = 0; i < out.by_dim[r].size(); ++i) out.by_dim[r][i] += b.by_dim[r][i];
  return out;
}

PiecewiseForm operator*(const Rational& s, const PiecewiseForm& a) {
  PiecewiseForm out = a;
  for (auto& row : out.by_dim)
    for (auto& f : row) f *= s;
  return out;
}

namespace {

void combinations(size_t n, size_t k, size_t start, std::vector<size_t>& cur,
                  std::vector<std::vector<size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (size_t i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

PiecewiseForm whitney_lift(const OrderedComplex& k, int degree, const Vector& theta) {
  if (theta.size() != k.count(degree)) throw InputError("cochain has the wrong length for its degree");
  Vector dtheta = boundary_matrix(k, degree + 1).transpose() * theta;
  for (const auto& x : dtheta)
    if (!x.is_zero()) throw InputError("cochain is not closed");
  PiecewiseForm out(k, degree, 1);
  for (int q = degree; q <= k.dim(); ++q) {
    std::vector<std::vector<size_t>> faces;
    std::vector<size_t> cur;
    combinations(static_cast<size_t>(q) + 1, static_cast<size_t>(degree) + 1, 0, cur, faces);
    std::map<std::vector<size_t>, PolyForm> cache;
    for (const auto& s : k.simplices(q)) {
      PolyForm& f = out.on(s);
      for (const auto& loc : faces) {
        Simplex sub;
        for (size_t i : loc) sub.push_back(s[i]);
        const Rational& v = theta[k.index(sub)];
        if (v.is_zero()) continue;
        auto it = cache.find(loc);
        if (it == cache.end()) it = cache.emplace(loc, PolyForm::whitney(static_cast<size_t>(q), loc)).first;
        f += v * it->second;
      }
      f = f.with_bound(1);
    }
  }
  return out;
}

Vector integration_map(const PiecewiseForm& a) {
  Vector out;
  for (const auto& s : a.complex->simplices(a.degree)) out.push_back(integrate(a.on(s)));
  return out;
}

PiecewiseForm restrict_subdivision(const PiecewiseForm& a, const Subdivision& sd) {
  PiecewiseForm out(sd.complex, a.degree, a.bound);
  for (int q = a.degree; q <= sd.complex.dim(); ++q)
    for (const auto& s : sd.complex.simplices(q)) {
      Simplex c = sd.carrier(s);
      AffineSimplexMap f;
      f.p = static_cast<size_t>(q);
      f.q = c.size() - 1;
      for (uint32_t v : s) {
        const Simplex& b = sd.barycenter_of.at(v);
        Vector w(c.size());
        for (uint32_t x : b) {
          auto pos = std::lower_bound(c.begin(), c.end(), x) - c.begin();
          if (static_cast<size_t>(pos) >= c.size() || c[static_cast<size_t>(pos)] != x)
            throw InputError("carrier does not contain the barycenter");
          w[static_cast<size_t>(pos)] = Rational(1, static_cast<long>(b.size()));
        }
        f.vertex_images.push_back(std::move(w));
      }
      out.on(s) = pullback(f, a.on(c));
    }
  return out;
}

PiecewiseForm pullback(const SimplicialMap& g, const PiecewiseForm& a) {
  if (g.target != a.complex) throw InputError("pullback along a map into another complex");
  PiecewiseForm out(*g.source, a.degree, a.bound);
  for (int q = a.degree; q <= g.source->dim(); ++q)
    for (const auto& s : g.source->simplices(q)) {
      Simplex t = g.image(s);
      if (static_cast<int>(t.size()) - 1 < a.degree) continue;
      std::vector<size_t> vs;
      for (uint32_t v : s)
        vs.push_back(static_cast<size_t>(std::lower_bound(t.begin(), t.end(), g.vertex_map[v]) - t.begin()));
      out.on(s) = pullback(AffineSimplexMap::vertices(t.size() - 1, vs), a.on(t));
    }
  return out;
}

}  // namespace ttwist
