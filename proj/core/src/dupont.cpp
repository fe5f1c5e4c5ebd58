#include "ttwist/dupont.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "ttwist/errors.hpp"

namespace ttwist {

namespace {

void monomials_of_degree(size_t nvars, int degree, std::vector<Monomial>& out) {
  Monomial cur(nvars, 0);
  std::function<void(size_t, int)> rec = [&](size_t i, int left) {
    if (i + 1 == nvars) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (int a = left; a >= 0; --a) {
      cur[i] = a;
      rec(i + 1, left - a);
    }
  };
  if (nvars == 0) {
    if (degree == 0) out.push_back({});
    return;
  }
  rec(0, degree);
}

int koszul_sign(int k, int n) {
  long e = static_cast<long>(k) * n + static_cast<long>(k) * (k - 1) / 2;
  return (e % 2 == 0) ? 1 : -1;
}

}  // namespace

void LocalFormBasis::ensure_level(int level) {
  while (built_ < level) {
    int l = ++built_;
    std::vector<Monomial> monos;
    monomials_of_degree(m_, l, monos);
    std::sort(monos.begin(), monos.end(), GradedLex{});
    for (int j = 0; j <= static_cast<int>(m_); ++j) {
      auto& list = by_level_[{l, j}];
      for (uint32_t mask = 0; mask < (1u << m_); ++mask) {
        if (std::popcount(mask) != j) continue;
        for (auto& a : monos) {
          auto id = static_cast<uint32_t>(masks_.size());
          masks_.push_back(mask);
          monos_.push_back(a);
          index_.emplace(std::make_pair(mask, a), id);
          list.push_back(id);
        }
      }
    }
  }
}

uint32_t LocalFormBasis::id(uint32_t mask, const Monomial& mono) {
  ensure_level(total_degree(mono));
  auto it = index_.find({mask, mono});
  if (it == index_.end()) throw std::logic_error("LocalFormBasis: unknown form");
  return it->second;
}

const std::vector<uint32_t>& LocalFormBasis::ids(int level, int j) {
  static const std::vector<uint32_t> none;
  ensure_level(level);
  auto it = by_level_.find({level, j});
  return it == by_level_.end() ? none : it->second;
}

PolyForm LocalFormBasis::form(uint32_t id) const {
  PolyForm f(m_, std::popcount(masks_.at(id)), level(id));
  Polynomial p(m_);
  p.add_term(monos_.at(id), Rational(1));
  f.add(masks_.at(id), p);
  return f;
}

DupontSpace::DupontSpace(const OrderedComplex& k, const Representation& rho) : k_(&k), rho_(&rho) {
  int top = k.dim();
  for (int m = 0; m <= top; ++m) local_.emplace_back(static_cast<size_t>(m));
  boundary_cache_.resize(static_cast<size_t>(top + 1));
  faces_.resize(static_cast<size_t>(top + 1));
  transport_.resize(static_cast<size_t>(top + 1));
  for (int m = 1; m <= top; ++m) {
    for (auto& s : k.simplices(m)) {
      std::vector<uint32_t> f;
      for (size_t i = 0; i <= static_cast<size_t>(m); ++i) f.push_back(static_cast<uint32_t>(k.index(face(s, i))));
      faces_[m].push_back(std::move(f));
      transport_[m].push_back(rho.holonomy(s[0], s[1]).transpose());
    }
  }
}

int DupontSpace::degree(const DupontElement& x) {
  return static_cast<int>(x.m) - std::popcount(local_.at(x.m).mask(x.form));
}

int DupontSpace::level(const DupontElement& x) { return local_.at(x.m).level(x.form); }

std::vector<DupontElement> DupontSpace::elements(int n, int level) {
  std::vector<DupontElement> out;
  if (n < 0) return out;
  auto d = static_cast<uint32_t>(rho_->dim());
  for (int m = n; m <= k_->dim(); ++m) {
    auto& ids = local_[m].ids(level, m - n);
    if (ids.empty()) continue;
    auto count = static_cast<uint32_t>(k_->count(m));
    for (uint32_t s = 0; s < count; ++s)
      for (auto id : ids)
        for (uint32_t e = 0; e < d; ++e) out.push_back({static_cast<uint32_t>(m), s, id, e});
  }
  return out;
}

std::vector<DupontElement> DupontSpace::basis(int n, int max_level) {
  std::vector<DupontElement> out;
  for (int l = 0; l <= max_level; ++l) {
    auto part = elements(n, l);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::string DupontSpace::label(const DupontElement& x) {
  std::ostringstream os;
  os << local_.at(x.m).form(x.form).str() << " ⊗ " << k_->label(k_->simplices(static_cast<int>(x.m)).at(x.simplex));
  if (rho_->dim() > 1) os << " ⊗ e" << x.e;
  return os.str();
}

std::vector<std::pair<uint32_t, Rational>> DupontSpace::decompose(size_t m, const PolyForm& f) {
  std::vector<std::pair<uint32_t, Rational>> out;
  for (auto& [mask, poly] : f.components())
    for (auto& [mono, c] : poly.terms()) out.emplace_back(local_.at(m).id(mask, mono), c);
  return out;
}

const DupontSpace::LocalBoundary& DupontSpace::local_boundary(uint32_t m, uint32_t id) {
  auto& cache = boundary_cache_.at(m);
  auto it = cache.find(id);
  if (it != cache.end()) return it->second;
  LocalBoundary lb;
  PolyForm w = local_[m].form(id);
  lb.d = decompose(m, exterior_derivative(w));
  if (m > 0) {
    for (size_t i = 0; i <= m; ++i) lb.faces.push_back(decompose(m - 1, pullback(AffineSimplexMap::face(m, i), w)));
  }
  return cache.emplace(id, std::move(lb)).first->second;
}

DupontChain DupontSpace::boundary(const DupontElement& x) {
  DupontChain out;
  const LocalBoundary& lb = local_boundary(x.m, x.form);
  int n = degree(x);
  Rational dsign(n % 2 == 0 ? 1 : -1);
  for (auto& [id, c] : lb.d) out.push_back({{x.m, x.simplex, id, x.e}, dsign * c});
  if (x.m == 0) return out;
  const Matrix& a = transport_[x.m][x.simplex];
  for (size_t i = 0; i < lb.faces.size(); ++i) {
    uint32_t f = faces_[x.m][x.simplex][i];
    Rational sign(i % 2 == 0 ? 1 : -1);
    for (auto& [id, c] : lb.faces[i]) {
      if (i == 0) {
        for (uint32_t e = 0; e < a.rows(); ++e) {
          const Rational& v = a(e, x.e);
          if (!v.is_zero()) out.push_back({{x.m - 1, f, id, e}, c * v});
        }
      } else {
        out.push_back({{x.m - 1, f, id, x.e}, sign * c});
      }
    }
  }
  return out;
}

DupontChain DupontSpace::action(const PiecewiseForm& phi, const DupontElement& x) {
  DupontChain out;
  int k = phi.degree;
  if (static_cast<int>(x.m) < k) return out;
  const Simplex& s = k_->simplices(static_cast<int>(x.m)).at(x.simplex);
  const PolyForm& ps = phi.on(s);
  auto& lf = local_[x.m];
  uint32_t mask = lf.mask(x.form);
  Monomial mono = lf.monomial(x.form);
  Rational sign(koszul_sign(k, degree(x)));
  for (auto& [pmask, poly] : ps.components()) {
    int ws = wedge_sign(pmask, mask);
    if (ws == 0) continue;
    for (auto& [pm, c] : poly.terms()) {
      Monomial sum = mono;
      for (size_t i = 0; i < sum.size(); ++i) sum[i] += pm[i];
      out.push_back({{x.m, x.simplex, lf.id(pmask | mask, sum), x.e}, sign * c * Rational(ws)});
    }
  }
  return out;
}

DupontElement DupontSpace::psi(uint32_t m, uint32_t simplex, uint32_t e) {
  return {m, simplex, local_.at(m).id(0, Monomial(m, 0)), e};
}

void IndexedBasis::append(const DupontElement& x) {
  pos_.emplace(x.key(), elems_.size());
  elems_.push_back(x);
}

std::optional<size_t> IndexedBasis::position(const DupontElement& x) const {
  auto it = pos_.find(x.key());
  if (it == pos_.end()) return std::nullopt;
  return it->second;
}

size_t IndexedBasis::at(const DupontElement& x) const {
  auto it = pos_.find(x.key());
  if (it == pos_.end()) throw std::logic_error("IndexedBasis: element outside the window");
  return it->second;
}

IndexedBasis dupont_basis(DupontSpace& du, int n, int max_level) {
  IndexedBasis b;
  for (auto& x : du.basis(n, max_level)) b.append(x);
  return b;
}

SparseMatrix dupont_boundary_matrix(DupontSpace& du, int n, int level) {
  auto src = dupont_basis(du, n, level);
  auto dst = dupont_basis(du, n - 1, level);
  return assemble(src, dst, [&](const DupontElement& x) { return du.boundary(x); });
}

SparseMatrix dupont_action_matrix(DupontSpace& du, const PiecewiseForm& phi, int n, int level) {
  int p = std::max(phi.coefficient_degree(), 0);
  auto src = dupont_basis(du, n, level);
  auto dst = dupont_basis(du, n - phi.degree, level + p);
  return assemble(src, dst, [&](const DupontElement& x) { return du.action(phi, x); });
}

SparseMatrix psi_matrix(DupontSpace& du, int n, int level) {
  auto dst = dupont_basis(du, n, level);
  auto d = static_cast<uint32_t>(du.rep().dim());
  SparseMatrix m(dst.size(), 0);
  if (n < 0 || n > du.complex().dim()) return m;
  auto count = static_cast<uint32_t>(du.complex().count(n));
  for (uint32_t s = 0; s < count; ++s)
    for (uint32_t e = 0; e < d; ++e) {
      auto row = static_cast<uint32_t>(dst.at(du.psi(static_cast<uint32_t>(n), s, e)));
      m.push_column({{row, Rational(1)}});
    }
  return m;
}

Vector psi_star(DupontSpace& du, int n, int level, const Vector& functional) {
  auto src = dupont_basis(du, n, level);
  if (functional.size() != src.size()) throw InputError("psi_star: functional has the wrong length");
  auto d = static_cast<uint32_t>(du.rep().dim());
  auto count = static_cast<uint32_t>(du.complex().count(n));
  Vector out(static_cast<size_t>(count) * d);
  for (uint32_t s = 0; s < count; ++s)
    for (uint32_t e = 0; e < d; ++e)
      out[static_cast<size_t>(s) * d + e] = functional[src.at(du.psi(static_cast<uint32_t>(n), s, e))];
  return out;
}

Twist::Twist(std::vector<PiecewiseForm> comps) : components(std::move(comps)) {
  for (auto& c : components) {
    if (c.degree < 3 || c.degree % 2 == 0)
      throw InputError("twist components must have odd degree >= 3, got " + std::to_string(c.degree));
    c.check_compatible();
    if (!exterior_derivative(c).is_zero()) throw InputError("twist component of degree " + std::to_string(c.degree) + " is not closed");
  }
}

int Twist::coefficient_degree() const {
  int p = 0;
  for (auto& c : components) p = std::max(p, c.coefficient_degree());
  return p;
}

bool Twist::is_zero() const {
  return std::all_of(components.begin(), components.end(), [](auto& c) { return c.is_zero(); });
}

EquivariantWindow build_window(DupontSpace& du, const Twist& t, int level) {
  int p = t.coefficient_degree();
  if (level < p) throw InputError("window level " + std::to_string(level) + " is below the coefficient degree of t");
  int top = du.complex().dim();
  EquivariantWindow w;
  w.level = level;
  w.p = p;
  for (int n = 0; n <= top; ++n) {
    w.low.push_back(dupont_basis(du, n, level));
    w.high.push_back(dupont_basis(du, n, level + p));
  }
  IndexedBasis empty;
  auto basis_at = [&](std::vector<IndexedBasis>& v, int n) -> const IndexedBasis& {
    return (n < 0 || n > top) ? empty : v[n];
  };
  w.twist.resize(static_cast<size_t>(top + 1));
  for (int n = 0; n <= top; ++n) {
    auto bd = [&](const DupontElement& x) { return du.boundary(x); };
    w.boundary_low.push_back(assemble(w.low[n], basis_at(w.low, n - 1), bd));
    w.boundary_high.push_back(assemble(w.high[n], basis_at(w.high, n - 1), bd));
    for (auto& c : t.components) {
      if (n - c.degree < 0) continue;
      auto m = assemble(w.low[n], w.high[n - c.degree], [&](const DupontElement& x) { return du.action(c, x); });
      auto it = w.twist[n].find(c.degree);
      if (it == w.twist[n].end()) w.twist[n].emplace(c.degree, std::move(m));
      else it->second = it->second + m;
    }
  }
  w.square_zero = true;
  for (int n = 2; n <= top; ++n) {
    if (!(w.boundary_low[n - 1] * w.boundary_low[n]).is_zero()) w.square_zero = false;
    if (!(w.boundary_high[n - 1] * w.boundary_high[n]).is_zero()) w.square_zero = false;
  }
  // ∂ t⋆ + t⋆ ∂ = 0 from level D to level D + p.
  w.anticommutes = true;
  for (int n = 0; n <= top; ++n) {
    for (auto& [k, tn] : w.twist[n]) {
      int target = n - k - 1;
      if (target < 0) continue;
      SparseMatrix lhs = w.boundary_high[n - k] * tn;
      auto it = w.twist[n - 1].find(k);
      if (it != w.twist[n - 1].end()) lhs = lhs + it->second * w.boundary_low[n];
      if (!lhs.is_zero()) w.anticommutes = false;
    }
  }
  return w;
}

namespace {

/// Incremental reduction of ∂ + t⋆ level by level. Groups partition the
/// chain degrees; the differential sends group g to target[g].
class Ladder {
 public:
  Ladder(DupontSpace& du, const Twist& t, std::vector<std::vector<int>> groups, std::vector<int> target)
      : du_(du), t_(t), groups_(std::move(groups)), target_(std::move(target)) {
    p_ = t.coefficient_degree();
    bases_.resize(groups_.size());
    level_end_.resize(groups_.size());
    reducers_.resize(groups_.size());
  }

  size_t group_count() const { return groups_.size(); }
  int levels_reduced() const { return columns_level_; }
  size_t window(int level) const {
    size_t s = 0;
    for (size_t g = 0; g < groups_.size(); ++g) s += end(g, level);
    return s;
  }

  void reduce_through(int level) {
    while (columns_level_ < level) {
      int l = ++columns_level_;
      enumerate_through(l + p_);
      for (size_t g = 0; g < groups_.size(); ++g) {
        size_t lo = end(g, l - 1), hi = end(g, l);
        for (size_t c = lo; c < hi; ++c) {
          const DupontElement& x = bases_[g][c];
          std::vector<SparseEntry> col;
          if (target_[g] >= 0) {
            auto& tb = bases_[target_[g]];
            for (auto& [y, v] : du_.boundary(x)) col.push_back({static_cast<uint32_t>(tb.at(y)), v});
            for (auto& comp : t_.components)
              for (auto& [y, v] : du_.action(comp, x)) col.push_back({static_cast<uint32_t>(tb.at(y)), v});
          }
          reducers_[g].add(make_sparse_column(std::move(col)));
        }
      }
    }
  }

  size_t end(size_t g, int level) const {
    if (level < 0) return 0;
    return level_end_[g].at(static_cast<size_t>(level));
  }

  size_t cycles(size_t g, int level) {
    reduce_through(level);
    return end(g, level) - reducers_[g].rank_in_region(end(g, level), 0);
  }

  /// dim of ∂_t(W_source) ∩ W_level inside group g.
  size_t boundaries(size_t g, int source, int level) {
    reduce_through(source);
    size_t total = 0;
    for (size_t h = 0; h < groups_.size(); ++h) {
      if (target_[h] != static_cast<int>(g)) continue;
      size_t prefix = end(h, source);
      auto threshold = static_cast<uint32_t>(end(g, level));
      total += reducers_[h].rank_in_region(prefix, 0) - reducers_[h].rank_in_region(prefix, threshold);
    }
    return total;
  }

 private:
  void enumerate_through(int level) {
    while (rows_level_ < level) {
      int l = ++rows_level_;
      for (size_t g = 0; g < groups_.size(); ++g) {
        for (int n : groups_[g])
          for (auto& x : du_.elements(n, l)) bases_[g].append(x);
        level_end_[g].push_back(bases_[g].size());
      }
    }
  }

  DupontSpace& du_;
  const Twist& t_;
  std::vector<std::vector<int>> groups_;
  std::vector<int> target_;
  int p_ = 0;
  int rows_level_ = -1;
  int columns_level_ = -1;
  std::vector<IndexedBasis> bases_;
  std::vector<std::vector<size_t>> level_end_;
  std::vector<ColumnReducer> reducers_;
};

StabilizationReport run_ladder(Ladder& ladder, int start, int max_level, int p, LadderOptions opts) {
  StabilizationReport rep;
  // t⋆ raises the level by p, so boundaries landing in a window saturate p
  // source levels later.
  int cap = max_level + opts.saturation_slack + p;
  size_t groups = ladder.group_count();
  auto saturation = [&](int level) {
    for (int s = level; s + 1 <= cap; ++s) {
      bool same = true;
      for (size_t g = 0; g < groups; ++g)
        if (ladder.boundaries(g, s, level) != ladder.boundaries(g, s + 1, level)) same = false;
      if (same) return s;
    }
    return -1;
  };
  std::vector<LevelReport> levels;
  auto level_report = [&](int level) {
    LevelReport lr;
    lr.level = level;
    lr.saturation = saturation(level);
    int s = lr.saturation < 0 ? cap : lr.saturation;
    for (size_t g = 0; g < groups; ++g) {
      lr.cycles.push_back(ladder.cycles(g, level));
      lr.dims.push_back(lr.cycles.back() - ladder.boundaries(g, s, level));
    }
    return lr;
  };
  if (start > max_level) start = max_level;
  levels.push_back(level_report(start));
  for (int level = start; level < max_level; ++level) {
    levels.push_back(level_report(level + 1));
    LevelReport& cur = levels[levels.size() - 2];
    const LevelReport& next = levels.back();
    bool iso = cur.saturation >= 0 && next.saturation >= 0 && cur.dims == next.dims;
    if (iso) {
      int s = std::max(cur.saturation, next.saturation);
      for (size_t g = 0; g < groups; ++g) {
        // Image of H_level in H_{level+1}: cycles of the smaller window modulo
        // the boundaries (saturated for both levels) that land in it.
        size_t image = cur.cycles[g] - ladder.boundaries(g, s, level);
        if (image != next.dims[g]) iso = false;
      }
    }
    cur.comparison_iso = iso;
    if (iso && !rep.stabilized) {
      rep.stabilized = true;
      rep.stable_level = level;
      rep.dims = cur.dims;
      if (opts.early_stop) break;
    }
  }
  rep.levels = std::move(levels);
  rep.levels_reduced = ladder.levels_reduced();
  rep.largest_window = ladder.window(ladder.levels_reduced());
  if (!rep.stabilized) rep.dims = rep.levels.back().dims;
  return rep;
}

int default_max_level(DupontSpace& du, const LadderOptions& opts) {
  return opts.max_level >= 0 ? opts.max_level : du.complex().dim() + 1;
}

}  // namespace

StabilizationReport stabilized_twisted_cohomology(DupontSpace& du, const Twist& t, LadderOptions opts) {
  int top = du.complex().dim();
  std::vector<std::vector<int>> groups(2);
  for (int n = 0; n <= top; ++n) groups[n % 2].push_back(n);
  Ladder ladder(du, t, groups, {1, 0});
  return run_ladder(ladder, t.coefficient_degree(), default_max_level(du, opts), t.coefficient_degree(), opts);
}

StabilizationReport stabilized_cohomology_by_degree(DupontSpace& du, LadderOptions opts) {
  int top = du.complex().dim();
  std::vector<std::vector<int>> groups;
  std::vector<int> target;
  for (int n = 0; n <= top; ++n) {
    groups.push_back({n});
    target.push_back(n - 1);
  }
  Twist zero;
  Ladder ladder(du, zero, groups, target);
  return run_ladder(ladder, 0, default_max_level(du, opts), 0, opts);
}

size_t psi_homology_rank(DupontSpace& du, int n, int source_level) {
  const OrderedComplex& k = du.complex();
  if (n < 0 || n > k.dim()) return 0;
  auto src = dupont_basis(du, n + 1, source_level);
  auto dst = dupont_basis(du, n, source_level);
  ColumnReducer red;
  for (size_t c = 0; c < src.size(); ++c) {
    std::vector<SparseEntry> col;
    for (auto& [y, v] : du.boundary(src[c])) col.push_back({static_cast<uint32_t>(dst.at(y)), v});
    red.add(make_sparse_column(std::move(col)));
  }
  size_t before = red.rank();
  // Cycles of the twisted simplicial chain complex, pushed in by ψ.
  auto d = du.rep().dim();
  Matrix chain_d = n == 0 ? Matrix(0, k.count(0) * d) : twisted_coboundary(k, du.rep(), n - 1).transpose();
  Matrix z = kernel(chain_d);
  SparseMatrix psi = psi_matrix(du, n, source_level);
  for (size_t c = 0; c < z.cols(); ++c) {
    std::vector<SparseEntry> col;
    for (size_t r = 0; r < z.rows(); ++r) {
      if (z(r, c).is_zero()) continue;
      for (auto& e : psi.column(r)) col.push_back({e.row, e.value * z(r, c)});
    }
    red.add(make_sparse_column(std::move(col)));
  }
  return red.rank() - before;
}

SparseMatrix dupont_pushforward(const SimplicialMap& f, DupontSpace& source, DupontSpace& target, int n, int level) {
  if (source.rep().dim() != target.rep().dim()) throw InputError("pushforward: coefficient ranks differ");
  auto src = dupont_basis(source, n, level);
  auto dst = dupont_basis(target, n, level);
  const OrderedComplex& tk = target.complex();
  return assemble(src, dst, [&](const DupontElement& x) {
    const Simplex& s = source.complex().simplices(static_cast<int>(x.m)).at(x.simplex);
    Simplex img;
    for (auto v : s) img.push_back(f.vertex_map.at(v));
    Simplex sorted = img;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InputError("pushforward: the map collapses " + source.complex().label(s));
    // P sends local vertex k of σ to the position of f(σ_k) in the sorted
    // image; we pull back along P^{-1}, which sends position i to the local
    // vertex landing there. The current picks up the orientation of P.
    std::vector<size_t> inv(s.size());
    for (size_t kk = 0; kk < s.size(); ++kk) {
      size_t pos = static_cast<size_t>(std::find(sorted.begin(), sorted.end(), img[kk]) - sorted.begin());
      inv[pos] = kk;
    }
    AffineSimplexMap pinv = AffineSimplexMap::vertices(x.m, inv);
    Rational sign(f.orientation(s));
    PolyForm w = pullback(pinv, source.local(x.m).form(x.form));
    auto ts = static_cast<uint32_t>(tk.index(sorted));
    DupontChain out;
    for (auto& [mask, poly] : w.components())
      for (auto& [mono, c] : poly.terms())
        out.push_back({{x.m, ts, target.local(x.m).id(mask, mono), x.e}, sign * c});
    return out;
  });
}

}  // namespace ttwist
