#include "ttwist/spectral.hpp"

#include <stdexcept>

#include "ttwist/errors.hpp"
#include "ttwist/random.hpp"

namespace ttwist {

namespace {

int parity(int n) { return ((n % 2) + 2) % 2; }

Matrix unit_columns(size_t n, size_t from, size_t count) {
  Matrix m(n, count);
  for (size_t j = 0; j < count; ++j) m(from + j, j) = Rational(1);
  return m;
}

}  // namespace

Matrix FilteredZ2Complex::filtration(int par, int p) const {
  size_t n = dim(par);
  if (p <= 0) return Matrix::identity(n);
  if (static_cast<size_t>(p) >= steps()) return Matrix(n, 0);
  return par == 0 ? f_even[static_cast<size_t>(p)] : f_odd[static_cast<size_t>(p)];
}

void FilteredZ2Complex::validate() const {
  z.validate();
  if (f_even.size() != f_odd.size()) throw InputError("even and odd filtrations differ in length");
  if (f_even.empty()) throw InputError("filtration needs at least one step");
  for (int par = 0; par < 2; ++par) {
    const auto& f = par == 0 ? f_even : f_odd;
    size_t n = dim(par);
    for (const auto& step : f)
      if (step.rows() != n) throw InputError("filtration step has the wrong ambient dimension");
    if (rank(f[0]) != n) throw InputError("filtration is not exhaustive (F_0 must be everything)");
    for (size_t p = 0; p < f.size(); ++p) {
      Matrix next = filtration(par, static_cast<int>(p) + 1);
      if (!contained_in(next, f[p], n)) throw InputError("filtration is not decreasing");
      if (!contained_in(d(par) * f[p], filtration(1 - par, static_cast<int>(p)), dim(1 - par)))
        throw InputError("differential does not preserve the filtration");
    }
  }
}

DGModuleInput::DGModuleInput(BasedComplex m_, std::map<std::pair<int, int>, Matrix> twist_)
    : m(std::move(m_)), twist(std::move(twist_)) {
  validate();
}

size_t DGModuleInput::offset(int j) const {
  size_t off = 0;
  for (int i = parity(j); i < j; i += 2) off += m.dim(i);
  return off;
}

Z2Complex DGModuleInput::twisted() const {
  size_t ev = 0, od = 0;
  for (int j = 0; j <= top(); ++j) (parity(j) == 0 ? ev : od) += m.dim(j);
  Matrix eo(od, ev), oe(ev, od);
  for (int j = 0; j < top(); ++j) {
    Matrix& target = parity(j) == 0 ? eo : oe;
    target.set_block(offset(j + 1), offset(j), m.d(j));
  }
  for (const auto& [key, mat] : twist) {
    auto [j, k] = key;
    Matrix& target = parity(j) == 0 ? eo : oe;
    target.set_block(offset(j + k), offset(j), mat);
  }
  return Z2Complex(std::move(eo), std::move(oe));
}

void DGModuleInput::validate() const {
  m.validate();
  if (m.low != 0) throw InputError("DG module must start in degree 0");
  for (const auto& [key, mat] : twist) {
    auto [j, k] = key;
    if (k < 3 || k % 2 == 0) throw InputError("twist components must have odd degree >= 3");
    if (j < 0 || j + k > top()) throw InputError("twist component leaves the degree range");
    if (mat.rows() != m.dim(j + k) || mat.cols() != m.dim(j))
      throw InputError("twist component has the wrong shape");
  }
  try {
    (void)twisted();
  } catch (const InputError&) {
    throw InputError("(∂ + t·)² != 0");
  }
}

FilteredZ2Complex parity_filtration(const DGModuleInput& m) {
  FilteredZ2Complex f;
  f.z = m.twisted();
  f.untwisted = m.m;
  for (int j = 0; j <= m.top(); ++j)
    for (size_t i = 0; i < m.m.dim(j); ++i) (parity(j) == 0 ? f.even_degree : f.odd_degree).push_back(j);
  for (int p = 0; p <= m.top(); ++p) {
    for (int par = 0; par < 2; ++par) {
      const auto& deg = par == 0 ? f.even_degree : f.odd_degree;
      std::vector<Vector> cols;
      for (size_t i = 0; i < deg.size(); ++i)
        if (deg[i] >= p) {
          Vector v(deg.size());
          v[i] = Rational(1);
          cols.push_back(std::move(v));
        }
      (par == 0 ? f.f_even : f.f_odd).push_back(Matrix::from_columns(deg.size(), cols));
    }
  }
  f.validate();
  return f;
}

namespace {

// The filtered complex seen as a Z-graded object: spaces C^n, ∂ : C^n -> C^{n+1}
// and filtration steps F_p C^n.
class View {
 public:
  virtual ~View() = default;
  virtual size_t dim(int n) const = 0;
  virtual Matrix d(int n) const = 0;
  virtual Matrix F(int p, int n) const = 0;
};

class Z2View : public View {
 public:
  explicit Z2View(const FilteredZ2Complex& f) : f_(f) {}
  size_t dim(int n) const override { return f_.dim(parity(n)); }
  Matrix d(int n) const override { return f_.d(parity(n)); }
  Matrix F(int p, int n) const override { return f_.filtration(parity(n), p); }

 private:
  const FilteredZ2Complex& f_;
};

class UnrolledView : public View {
 public:
  UnrolledView(const FilteredZ2Complex& f, int lo, int hi) : f_(f), lo_(lo), hi_(hi) {}
  bool inside(int n) const { return n >= lo_ && n <= hi_; }
  size_t dim(int n) const override { return inside(n) ? f_.dim(parity(n)) : 0; }
  Matrix d(int n) const override {
    if (inside(n) && inside(n + 1)) return f_.d(parity(n));
    return Matrix(dim(n + 1), dim(n));
  }
  Matrix F(int p, int n) const override {
    if (!inside(n)) return Matrix(0, 0);
    return f_.filtration(parity(n), p);
  }

 private:
  const FilteredZ2Complex& f_;
  int lo_, hi_;
};

class PageBuilder {
 public:
  PageBuilder(const View& v, size_t steps, std::vector<int> degrees, bool periodic, std::mt19937_64* rng)
      : v_(v), steps_(static_cast<int>(steps)), degrees_(std::move(degrees)), periodic_(periodic), rng_(rng) {}

  // Z_r^{p,n} = {x in F_p C^n : ∂x in F_{p+r} C^{n+1}}.
  const Matrix& cycles(int r, int p, int n) {
    auto key = std::make_tuple(r, p, n);
    auto it = z_.find(key);
    if (it != z_.end()) return it->second;
    Matrix fp = v_.F(p, n);
    Matrix out;
    if (fp.cols() == 0 || r <= 0) {
      out = fp;
    } else {
      Matrix ann = annihilator(v_.F(p + r, n + 1), v_.dim(n + 1));
      Matrix cond = ann * (v_.d(n) * fp);
      out = cond.rows() == 0 ? fp : fp * kernel(cond);
    }
    return z_.emplace(key, std::move(out)).first->second;
  }

  SpectralPage page(int r) {
    SpectralPage pg;
    pg.r = r;
    pg.periodic = periodic_;
    for (int p = 0; p < steps_; ++p)
      for (int n : degrees_) {
        PageCell c;
        c.p = p;
        c.n = n;
        size_t amb = v_.dim(n);
        c.z = cycles(r, p, n);
        Matrix den = hstack(cycles(r - 1, p + 1, n), v_.d(n - 1) * cycles(r - 1, p - r + 1, n - 1));
        c.den = den.cols() ? column_basis(den) : Matrix(amb, 0);
        c.reps = complement_columns(c.z, c.den, amb);
        if (rng_ && c.reps.cols() > 0) {
          c.reps = c.reps * random_invertible(c.reps.cols(), *rng_);
          if (c.den.cols() > 0) c.reps = c.reps + c.den * random_matrix(c.den.cols(), c.reps.cols(), *rng_);
        }
        pg.cells.push_back(std::move(c));
      }
    for (size_t i = 0; i < pg.cells.size(); ++i) {
      const PageCell& c = pg.cells[i];
      auto t = pg.index(c.p + r, c.n + 1);
      pg.target.push_back(t);
      if (t) {
        pg.d.push_back(pg.coordinates(*t, v_.d(c.n) * c.reps));
      } else {
        if (c.reps.cols() > 0 && c.p + r < steps_ && !(v_.d(c.n) * c.reps).is_zero())
          throw std::logic_error("spectral page: differential leaves the computed cells");
        pg.d.push_back(Matrix(0, c.dim()));
      }
    }
    return pg;
  }

 private:
  const View& v_;
  int steps_;
  std::vector<int> degrees_;
  bool periodic_;
  std::mt19937_64* rng_;
  std::map<std::tuple<int, int, int>, Matrix> z_;
};

void check_page(const SpectralPage& pg) {
  for (size_t i = 0; i < pg.cells.size(); ++i) {
    if (!pg.target[i]) continue;
    size_t j = *pg.target[i];
    if (!pg.target[j]) continue;
    if (!(pg.d[j] * pg.d[i]).is_zero()) throw std::logic_error("spectral page: d_r∘d_r != 0");
  }
}

void check_advance(const SpectralPage& prev, const SpectralPage& next) {
  for (size_t i = 0; i < prev.cells.size(); ++i) {
    size_t out = prev.target[i] ? rank(prev.d[i]) : 0;
    size_t in = 0;
    for (size_t j = 0; j < prev.cells.size(); ++j)
      if (prev.target[j] && *prev.target[j] == i) in = rank(prev.d[j]);
    if (next.cells[i].dim() + out + in != prev.cells[i].dim())
      throw std::logic_error("spectral page: dim E_{r+1} != dim H(E_r, d_r)");
  }
}

void check_e1(const FilteredZ2Complex& f, const SpectralPage& pg) {
  const BasedComplex& m = *f.untwisted;
  for (size_t i = 0; i < pg.cells.size(); ++i) {
    const PageCell& c = pg.cells[i];
    int par = parity(c.n);
    if (parity(c.p) != par) {
      if (c.dim() != 0) throw std::logic_error("E_1 has a nonzero cell at odd q");
      continue;
    }
    const auto& deg = par == 0 ? f.even_degree : f.odd_degree;
    size_t from = 0;
    while (from < deg.size() && deg[from] < c.p) ++from;
    if (!(c.reps == unit_columns(deg.size(), from, m.dim(c.p))))
      throw std::logic_error("E_1 representatives are not the standard basis of m^p");
    if (pg.target[i] && !(pg.d[i] == m.d(c.p))) throw std::logic_error("d_1 differs from the untwisted ∂");
    if (!pg.target[i] && c.p < m.high()) throw std::logic_error("d_1 has no target inside the range");
  }
}

std::vector<SpectralPage> run_pages(const View& v, const FilteredZ2Complex& f, std::vector<int> degrees,
                                    bool periodic, int r_max, std::mt19937_64* rng) {
  if (r_max < 1) throw InputError("need at least one page");
  PageBuilder b(v, f.steps(), std::move(degrees), periodic, rng);
  std::vector<SpectralPage> pages;
  for (int r = 1; r <= r_max; ++r) {
    pages.push_back(b.page(r));
    check_page(pages.back());
    if (r > 1) check_advance(pages[pages.size() - 2], pages.back());
  }
  return pages;
}

}  // namespace

const PageCell& SpectralPage::cell(int p, int n) const {
  auto i = index(p, n);
  if (!i) throw std::out_of_range("no such spectral cell");
  return cells[*i];
}

std::optional<size_t> SpectralPage::index(int p, int n) const {
  for (size_t i = 0; i < cells.size(); ++i)
    if (cells[i].p == p && cells[i].n == n) return i;
  if (periodic && (n < 0 || n > 1)) return index(p, parity(n));
  return std::nullopt;
}

Matrix SpectralPage::coordinates(size_t i, const Matrix& vectors) const {
  const PageCell& c = cells[i];
  if (c.dim() == 0) return Matrix(0, vectors.cols());
  auto x = solve(hstack(c.reps, c.den), vectors);
  if (!x) throw std::logic_error("vector does not lie in the cycle space of the cell");
  return x->block(0, 0, c.dim(), vectors.cols());
}

bool SpectralPage::differential_is_zero() const {
  for (const auto& m : d)
    if (!m.is_zero()) return false;
  return true;
}

std::vector<SpectralPage> compute_pages(const FilteredZ2Complex& f, int r_max, std::mt19937_64* rng) {
  Z2View v(f);
  auto pages = run_pages(v, f, {0, 1}, true, r_max, rng);
  if (f.untwisted && !rng) check_e1(f, pages.front());
  return pages;
}

std::vector<SpectralPage> compute_unrolled_pages(const FilteredZ2Complex& f, int r_max, int lo, int hi) {
  UnrolledView v(f, lo, hi);
  std::vector<int> degrees;
  for (int n = lo; n <= hi; ++n) degrees.push_back(n);
  return run_pages(v, f, degrees, false, r_max, nullptr);
}

std::optional<int> stabilization_page(const std::vector<SpectralPage>& pages) {
  std::optional<int> from;
  for (size_t i = 0; i < pages.size(); ++i) {
    bool same = i + 1 < pages.size();
    if (same)
      for (size_t c = 0; c < pages[i].cells.size(); ++c)
        if (pages[i].cells[c].dim() != pages[i + 1].cells[c].dim()) same = false;
    bool stable = pages[i].differential_is_zero() && (same || i + 1 == pages.size());
    if (stable && !from) from = pages[i].r;
    if (!stable) from.reset();
  }
  return from;
}

Z2Complex page_complex(const SpectralPage& page) {
  // Offsets of each cell inside E^ev / E^od, cells ordered by p.
  std::vector<size_t> off(page.cells.size());
  size_t tot[2] = {0, 0};
  for (size_t i = 0; i < page.cells.size(); ++i) {
    int par = parity(page.cells[i].n);
    off[i] = tot[par];
    tot[par] += page.cells[i].dim();
  }
  Matrix eo(tot[1], tot[0]), oe(tot[0], tot[1]);
  for (size_t i = 0; i < page.cells.size(); ++i) {
    if (!page.target[i]) continue;
    Matrix& m = parity(page.cells[i].n) == 0 ? eo : oe;
    m.set_block(off[*page.target[i]], off[i], page.d[i]);
  }
  return Z2Complex(std::move(eo), std::move(oe));
}

Abutment abutment(const FilteredZ2Complex& f) {
  f.validate();
  Abutment a;
  a.cohomology = default_z2_bases(f.z);
  int n = static_cast<int>(f.steps());
  for (int par = 0; par < 2; ++par) {
    size_t amb = f.dim(par);
    Matrix cyc = kernel(f.d(par));
    Matrix bnd = f.d(1 - par);
    size_t rb = rank(bnd);
    std::vector<size_t> g;
    for (int p = 0; p <= n; ++p) {
      Matrix fz = intersect(f.filtration(par, p), cyc, amb);
      g.push_back(rank(hstack(fz, bnd)) - rb);
    }
    auto& graded = par == 0 ? a.graded_even : a.graded_odd;
    for (int p = 0; p < n; ++p) graded.push_back(g[static_cast<size_t>(p)] - g[static_cast<size_t>(p) + 1]);
  }
  auto pages = compute_pages(f, n + 1);
  const SpectralPage& inf = pages.back();
  for (int p = 0; p < n; ++p) {
    a.e_inf_even.push_back(inf.cell(p, 0).dim());
    a.e_inf_odd.push_back(inf.cell(p, 1).dim());
  }
  a.matches = a.e_inf_even == a.graded_even && a.e_inf_odd == a.graded_odd;
  return a;
}

Rational twisted_det_chain(const FilteredZ2Complex& f, const CohomologyBases& untwisted,
                           const Z2Bases& twisted, std::mt19937_64* rng) {
  if (!f.untwisted) throw InputError("the det-line chain needs a parity-filtration input");
  const BasedComplex& m = *f.untwisted;
  int n = static_cast<int>(f.steps());
  if (untwisted.size() != static_cast<size_t>(n)) throw InputError("need untwisted representatives in every degree");
  auto pages = compute_pages(f, std::max(2, n + 1), rng);

  Rational coord(1);
  // det H(m, ∂) -> det E_2.
  const SpectralPage& e2 = pages[1];
  for (int p = 0; p < n; ++p) {
    const Matrix& h = untwisted[static_cast<size_t>(p)];
    if (h.rows() != m.dim(p)) throw InputError("untwisted representative has the wrong length");
    if (!(m.d(p) * h).is_zero()) throw InputError("untwisted representative is not a cocycle");
    size_t i = *e2.index(p, parity(p));
    if (h.cols() != e2.cells[i].dim()) throw InputError("untwisted representatives do not match dim H^p");
    int par = parity(p);
    Matrix emb(f.dim(par), h.cols());
    size_t from = 0;
    const auto& deg = par == 0 ? f.even_degree : f.odd_degree;
    while (from < deg.size() && deg[from] < p) ++from;
    emb.set_block(from, 0, h);
    Rational det = determinant(e2.coordinates(i, emb));
    if (det.is_zero()) throw InputError("untwisted representatives are not a basis of H^" + std::to_string(p));
    coord = par == 0 ? coord * det : coord / det;
  }
  // det E_r -> det E_{r+1} for r = 2 .. n.
  for (size_t k = 1; k + 1 < pages.size(); ++k) {
    const SpectralPage& cur = pages[k];
    const SpectralPage& next = pages[k + 1];
    std::vector<Matrix> blocks[2];
    for (size_t i = 0; i < cur.cells.size(); ++i)
      blocks[parity(cur.cells[i].n)].push_back(cur.coordinates(i, next.cells[i].reps));
    Z2Complex pc = page_complex(cur);
    Z2Bases hb{block_diagonal(blocks[0]), block_diagonal(blocks[1])};
    if (hb.even.rows() != pc.even_dim) hb.even = Matrix(pc.even_dim, 0);
    if (hb.odd.rows() != pc.odd_dim) hb.odd = Matrix(pc.odd_dim, 0);
    coord *= lemma1_scalar(pc, hb, rng);
  }
  // det E_∞ -> det H(m, ∂_t) through the induced filtration, p increasing.
  const SpectralPage& inf = pages.back();
  for (int par = 0; par < 2; ++par) {
    const Matrix& t = par == 0 ? twisted.even : twisted.odd;
    size_t amb = f.dim(par);
    if (t.rows() != amb) throw InputError("twisted representative has the wrong length");
    if (!(f.d(par) * t).is_zero()) throw InputError("twisted representative is not ∂_t-closed");
    Matrix x(amb, 0);
    for (int p = 0; p < n; ++p) x = hstack(x, inf.cell(p, par).reps);
    if (x.cols() != t.cols()) throw InputError("twisted representatives do not match the twisted cohomology dimension");
    Matrix bnd = f.d(1 - par);
    Matrix bb = bnd.cols() ? column_basis(bnd) : Matrix(amb, 0);
    Matrix tb = hstack(t, bb);
    if (rank(tb) != tb.cols()) throw InputError("twisted representatives are not a basis of twisted cohomology");
    auto sol = solve(tb, x);
    if (!sol) throw InputError("twisted representatives do not span twisted cohomology");
    Rational det = determinant(sol->block(0, 0, t.cols(), x.cols()));
    coord = par == 0 ? coord * det : coord / det;
  }
  return coord;
}

}  // namespace ttwist
