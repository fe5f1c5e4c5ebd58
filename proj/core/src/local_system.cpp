#include "ttwist/local_system.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "ttwist/errors.hpp"

namespace ttwist {

Word inverse_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& x : out) x = -x;
  return out;
}

Word reduce_word(const Word& w) {
  Word out;
  for (int x : w) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

namespace {

std::optional<size_t> edge_index(const std::vector<Simplex>& edges, uint32_t u, uint32_t v) {
  Simplex e{std::min(u, v), std::max(u, v)};
  auto it = std::lower_bound(edges.begin(), edges.end(), e);
  if (it == edges.end() || *it != e) return std::nullopt;
  return static_cast<size_t>(it - edges.begin());
}

Word cyclic_reduce(Word w) {
  w = reduce_word(w);
  size_t a = 0, b = w.size();
  while (b - a >= 2 && w[a] == -w[b - 1]) ++a, --b;
  return Word(w.begin() + static_cast<long>(a), w.begin() + static_cast<long>(b));
}

}  // namespace

Word Pi1Presentation::holonomy(uint32_t u, uint32_t v) const {
  if (u == v) return {};
  auto i = edge_index(edges, u, v);
  if (!i) throw InputError("holonomy requested along a non-edge");
  int g = edge_generator[*i];
  if (g < 0) return {};
  return {u < v ? g + 1 : -(g + 1)};
}

std::optional<size_t> Pi1Presentation::generator_of(const Simplex& edge) const {
  if (edge.size() != 2) return std::nullopt;
  auto i = edge_index(edges, edge[0], edge[1]);
  if (!i || edge_generator[*i] < 0) return std::nullopt;
  return static_cast<size_t>(edge_generator[*i]);
}

Pi1Presentation fundamental_group(const OrderedComplex& k, uint32_t base, std::mt19937_64* rng) {
  if (base >= k.vertex_count()) throw InputError("base vertex out of range");
  Pi1Presentation pi;
  pi.base = base;
  pi.edges = k.simplices(1);
  pi.in_tree.assign(pi.edges.size(), false);
  std::vector<std::vector<std::pair<uint32_t, size_t>>> adj(k.vertex_count());
  for (size_t i = 0; i < pi.edges.size(); ++i) {
    adj[pi.edges[i][0]].push_back({pi.edges[i][1], i});
    adj[pi.edges[i][1]].push_back({pi.edges[i][0], i});
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    if (rng) std::shuffle(a.begin(), a.end(), *rng);
  }
  std::vector<bool> seen(k.vertex_count(), false);
  std::deque<uint32_t> queue{base};
  seen[base] = true;
  size_t reached = 1;
  while (!queue.empty()) {
    uint32_t u = queue.front();
    queue.pop_front();
    for (auto [v, e] : adj[u])
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        pi.in_tree[e] = true;
        queue.push_back(v);
      }
  }
  if (reached != k.vertex_count()) throw InputError("complex is not connected");
  for (size_t i = 0; i < pi.edges.size(); ++i) {
    if (pi.in_tree[i]) {
      pi.edge_generator.push_back(-1);
    } else {
      pi.edge_generator.push_back(static_cast<int>(pi.generators.size()));
      pi.generators.push_back(pi.edges[i]);
    }
  }
  for (const auto& t : k.simplices(2)) {
    Word w = pi.holonomy(t[0], t[1]);
    Word b = pi.holonomy(t[1], t[2]);
    Word c = inverse_word(pi.holonomy(t[0], t[2]));
    w.insert(w.end(), b.begin(), b.end());
    w.insert(w.end(), c.begin(), c.end());
    pi.relators.push_back(reduce_word(w));
  }
  return pi;
}

bool presentation_is_trivial(const Pi1Presentation& pi) {
  std::vector<Word> rels;
  for (const auto& r : pi.relators) rels.push_back(cyclic_reduce(r));
  std::set<int> alive;
  for (size_t g = 0; g < pi.generator_count(); ++g) alive.insert(static_cast<int>(g) + 1);
  bool progress = true;
  while (progress && !alive.empty()) {
    progress = false;
    for (size_t ri = 0; ri < rels.size() && !progress; ++ri) {
      const Word& r = rels[ri];
      for (int g : alive) {
        size_t count = 0, at = 0;
        for (size_t i = 0; i < r.size(); ++i)
          if (std::abs(r[i]) == g) ++count, at = i;
        if (count != 1) continue;
        // Rotate so the occurrence is first: g^e w = 1.
        Word rot(r.begin() + static_cast<long>(at), r.end());
        rot.insert(rot.end(), r.begin(), r.begin() + static_cast<long>(at));
        int e = rot[0] > 0 ? 1 : -1;
        Word w(rot.begin() + 1, rot.end());
        Word value = e > 0 ? inverse_word(w) : w;  // g = value
        Word value_inv = inverse_word(value);
        std::vector<Word> next;
        for (size_t rj = 0; rj < rels.size(); ++rj) {
          if (rj == ri) continue;
          Word sub;
          for (int x : rels[rj]) {
            if (x == g)
              sub.insert(sub.end(), value.begin(), value.end());
            else if (x == -g)
              sub.insert(sub.end(), value_inv.begin(), value_inv.end());
            else
              sub.push_back(x);
          }
          sub = cyclic_reduce(sub);
          if (!sub.empty()) next.push_back(std::move(sub));
        }
        rels = std::move(next);
        alive.erase(g);
        progress = true;
        break;
      }
    }
  }
  return alive.empty();
}

Representation::Representation(const OrderedComplex& k, Pi1Presentation pi, size_t dim,
                               std::vector<Matrix> generators)
    : dim_(dim), pi_(std::move(pi)), generators_(std::move(generators)) {
  if (dim_ == 0) throw InputError("representation dimension must be positive");
  if (pi_.edges != k.simplices(1)) throw InputError("presentation belongs to another complex");
  if (generators_.size() != pi_.generator_count())
    throw InputError("need one matrix per generator of the presentation");
  for (const auto& g : generators_) {
    if (g.rows() != dim_ || g.cols() != dim_) throw InputError("generator matrix has the wrong size");
    if (determinant(g).is_zero()) throw InputError("generator matrix is not invertible");
  }
  for (size_t i = 0; i < pi_.edges.size(); ++i)
    connection_.push_back(pi_.edge_generator[i] < 0 ? Matrix::identity(dim_)
                                                    : generators_[static_cast<size_t>(pi_.edge_generator[i])]);
  check_relators();
}

Representation Representation::trivial(const OrderedComplex& k, const Pi1Presentation& pi, size_t dim) {
  return Representation(k, pi, dim, std::vector<Matrix>(pi.generator_count(), Matrix::identity(dim)));
}

void Representation::check_relators() const {
  for (size_t i = 0; i < pi_.relators.size(); ++i)
    if (!(evaluate(pi_.relators[i]) == Matrix::identity(dim_)))
      throw InputError("representation violates relator " + std::to_string(i));
}

Matrix Representation::evaluate(const Word& w) const {
  Matrix out = Matrix::identity(dim_);
  for (int x : w) {
    const Matrix& g = generators_.at(static_cast<size_t>(std::abs(x) - 1));
    out = out * (x > 0 ? g : *inverse(g));
  }
  return out;
}

Matrix Representation::holonomy(uint32_t u, uint32_t v) const {
  if (u == v) return Matrix::identity(dim_);
  auto i = edge_index(pi_.edges, u, v);
  if (!i) throw InputError("holonomy requested along a non-edge");
  return u < v ? connection_[*i] : *inverse(connection_[*i]);
}

Matrix Representation::path_holonomy(const Simplex& path, size_t upto) const {
  Matrix out = Matrix::identity(dim_);
  for (size_t i = 0; i < upto; ++i) out = out * holonomy(path[i], path[i + 1]);
  return out;
}

bool Representation::unimodular() const {
  for (const auto& g : generators_) {
    Rational d = determinant(g);
    if (!(d == Rational(1) || d == Rational(-1))) return false;
  }
  return true;
}

Representation Representation::from_connection(const OrderedComplex& k, Pi1Presentation pi, size_t dim,
                                               const std::vector<Matrix>& connection,
                                               std::vector<Matrix>* gauge) {
  if (connection.size() != pi.edges.size()) throw InputError("need one connection matrix per edge");
  auto conn = [&](uint32_t u, uint32_t v) { return connection[*edge_index(pi.edges, u, v)]; };
  for (const auto& t : k.simplices(2))
    if (!(conn(t[0], t[1]) * conn(t[1], t[2]) == conn(t[0], t[2])))
      throw InputError("connection is not flat on " + k.label(t));
  std::vector<std::optional<Matrix>> h(k.vertex_count());
  h[pi.base] = Matrix::identity(dim);
  std::vector<std::vector<std::pair<uint32_t, size_t>>> adj(k.vertex_count());
  for (size_t i = 0; i < pi.edges.size(); ++i)
    if (pi.in_tree[i]) {
      adj[pi.edges[i][0]].push_back({pi.edges[i][1], i});
      adj[pi.edges[i][1]].push_back({pi.edges[i][0], i});
    }
  std::deque<uint32_t> queue{pi.base};
  while (!queue.empty()) {
    uint32_t u = queue.front();
    queue.pop_front();
    for (auto [v, e] : adj[u]) {
      if (h[v]) continue;
      const Matrix& a = connection[e];
      h[v] = u < v ? *h[u] * a : *h[u] * *inverse(a);  // h(v) = h(u)A(uv) or h(u)A(vu)^{-1}
      queue.push_back(v);
    }
  }
  Representation rep;
  rep.dim_ = dim;
  for (size_t i = 0; i < pi.edges.size(); ++i) {
    const auto& e = pi.edges[i];
    Matrix a = *h[e[0]] * connection[i] * *inverse(*h[e[1]]);
    if (pi.in_tree[i] && !(a == Matrix::identity(dim))) throw std::logic_error("gauge failed on a tree edge");
    if (!pi.in_tree[i]) rep.generators_.push_back(a);
    rep.connection_.push_back(std::move(a));
  }
  rep.pi_ = std::move(pi);
  rep.check_relators();
  if (gauge) {
    gauge->clear();
    for (auto& x : h) gauge->push_back(*x);
  }
  return rep;
}

Representation Representation::regauge(const OrderedComplex& k, const Pi1Presentation& other,
                                       std::vector<Matrix>* gauge) const {
  return from_connection(k, other, dim_, connection_, gauge);
}

Representation Representation::pullback(const SimplicialMap& g, const Pi1Presentation& source_pi,
                                        std::vector<Matrix>* gauge) const {
  std::vector<Matrix> conn;
  for (const auto& e : source_pi.edges) conn.push_back(holonomy(g.vertex_map.at(e[0]), g.vertex_map.at(e[1])));
  return from_connection(*g.source, source_pi, dim_, conn, gauge);
}

Matrix twisted_coboundary(const OrderedComplex& k, const Representation& rho, int q) {
  size_t d = rho.dim();
  Matrix m(k.count(q + 1) * d, k.count(q) * d);
  if (q < 0) return m;
  const auto& sx = k.simplices(q + 1);
  for (size_t r = 0; r < sx.size(); ++r) {
    const Simplex& t = sx[r];
    size_t f0 = k.index(face(t, 0));
    m.set_block(r * d, f0 * d, rho.holonomy(t[0], t[1]));
    for (size_t j = 1; j < t.size(); ++j) {
      size_t f = k.index(face(t, j));
      Rational s(j % 2 == 0 ? 1 : -1);
      for (size_t a = 0; a < d; ++a) m(r * d + a, f * d + a) += s;
    }
  }
  return m;
}

BasedComplex twisted_cochain_complex(const OrderedComplex& k, const Representation& rho) {
  std::vector<size_t> dims;
  std::vector<Matrix> diffs;
  std::vector<std::string> ids;
  for (int q = 0; q <= k.dim(); ++q) {
    dims.push_back(k.count(q) * rho.dim());
    ids.push_back("C^" + std::to_string(q) + "(K,E)");
    if (q < k.dim()) diffs.push_back(twisted_coboundary(k, rho, q));
  }
  return BasedComplex(0, dims, diffs, ids);
}

Matrix cup_matrix(const OrderedComplex& k, const Representation& rho, int r, const Vector& theta, int s) {
  size_t d = rho.dim();
  if (theta.size() != k.count(r)) throw InputError("cochain has the wrong length for its degree");
  Matrix m(k.count(r + s) * d, k.count(s) * d);
  if (r < 0 || s < 0) return m;
  const auto& sx = k.simplices(r + s);
  for (size_t i = 0; i < sx.size(); ++i) {
    const Simplex& sg = sx[i];
    Simplex front(sg.begin(), sg.begin() + r + 1);
    const Rational& val = theta[k.index(front)];
    if (val.is_zero()) continue;
    Simplex back(sg.begin() + r, sg.end());
    size_t b = k.index(back);
    Matrix t = rho.path_holonomy(sg, static_cast<size_t>(r));
    for (size_t a = 0; a < d; ++a)
      for (size_t c = 0; c < d; ++c)
        if (!t(a, c).is_zero()) m(i * d + a, b * d + c) += val * t(a, c);
  }
  return m;
}

Vector cup(const OrderedComplex& k, const Representation& rho, int r, const Vector& theta, int s, const Vector& c) {
  return cup_matrix(k, rho, r, theta, s) * c;
}

Vector scalar_cup(const OrderedComplex& k, int r, const Vector& a, int s, const Vector& b) {
  if (a.size() != k.count(r) || b.size() != k.count(s)) throw InputError("cochain has the wrong length");
  Vector out(k.count(r + s));
  const auto& sx = k.simplices(r + s);
  for (size_t i = 0; i < sx.size(); ++i) {
    Simplex front(sx[i].begin(), sx[i].begin() + r + 1);
    Simplex back(sx[i].begin() + r, sx[i].end());
    out[i] = a[k.index(front)] * b[k.index(back)];
  }
  return out;
}

Matrix gauge_cochain_matrix(const OrderedComplex& k, const std::vector<Matrix>& h, int q) {
  if (h.empty()) throw InputError("empty gauge");
  size_t d = h[0].rows();
  Matrix m(k.count(q) * d, k.count(q) * d);
  const auto& sx = k.simplices(q);
  for (size_t i = 0; i < sx.size(); ++i) m.set_block(i * d, i * d, h.at(sx[i][0]));
  return m;
}

}  // namespace ttwist
