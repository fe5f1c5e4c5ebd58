#include "ttwist/complex.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "ttwist/errors.hpp"

namespace ttwist {

Simplex face(const Simplex& s, size_t i) {
  Simplex f;
  f.reserve(s.size() - 1);
  for (size_t j = 0; j < s.size(); ++j)
    if (j != i) f.push_back(s[j]);
  return f;
}

OrderedComplex::OrderedComplex(std::vector<std::string> names, const std::vector<Simplex>& simplexes)
    : names_(std::move(names)) {
  std::set<std::string> seen(names_.begin(), names_.end());
  if (seen.size() != names_.size()) throw InputError("duplicate vertex name");
  std::set<Simplex> all;
  std::function<void(const Simplex&)> close = [&](const Simplex& s) {
    if (s.empty() || !all.insert(s).second) return;
    for (size_t i = 0; i < s.size() && s.size() > 1; ++i) close(face(s, i));
  };
  for (const auto& s0 : simplexes) {
    Simplex s = s0;
    std::sort(s.begin(), s.end());
    if (s.empty()) throw InputError("empty simplex");
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw InputError("simplex repeats a vertex");
    if (s.back() >= names_.size()) throw InputError("simplex uses an unknown vertex");
    close(s);
  }
  for (uint32_t v = 0; v < names_.size(); ++v) all.insert(Simplex{v});
  for (const auto& s : all) {
    size_t q = s.size() - 1;
    if (by_dim_.size() <= q) by_dim_.resize(q + 1);
    by_dim_[q].push_back(s);  // std::set order is lexicographic
  }
  for (auto& list : by_dim_)
    for (size_t i = 0; i < list.size(); ++i) index_[list[i]] = i;
}

const std::vector<Simplex>& OrderedComplex::simplices(int q) const {
  static const std::vector<Simplex> none;
  if (q < 0 || q > dim()) return none;
  return by_dim_[static_cast<size_t>(q)];
}

std::vector<size_t> OrderedComplex::f_vector() const {
  std::vector<size_t> f;
  for (const auto& l : by_dim_) f.push_back(l.size());
  return f;
}

size_t OrderedComplex::index(const Simplex& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) throw InputError("simplex " + label(s) + " is not in the complex");
  return it->second;
}

bool OrderedComplex::contains(const Simplex& s) const { return index_.count(s) > 0; }

bool OrderedComplex::connected() const {
  if (names_.empty()) return false;
  std::vector<uint32_t> parent(names_.size());
  std::iota(parent.begin(), parent.end(), 0u);
  std::function<uint32_t(uint32_t)> find = [&](uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : simplices(1)) parent[find(e[0])] = find(e[1]);
  for (uint32_t v = 1; v < names_.size(); ++v)
    if (find(v) != find(0)) return false;
  return true;
}

std::string OrderedComplex::label(const Simplex& s) const {
  std::string out = "(";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out += ' ';
    out += s[i] < names_.size() ? names_[s[i]] : "?" + std::to_string(s[i]);
  }
  return out + ")";
}

Matrix boundary_matrix(const OrderedComplex& k, int q) {
  Matrix m(k.count(q - 1), k.count(q));
  if (q <= 0) return m;
  const auto& sx = k.simplices(q);
  for (size_t c = 0; c < sx.size(); ++c)
    for (size_t i = 0; i < sx[c].size(); ++i)
      m(k.index(face(sx[c], i)), c) = Rational(i % 2 == 0 ? 1 : -1);
  return m;
}

BasedComplex chain_complex(const OrderedComplex& k) {
  std::vector<size_t> dims;
  std::vector<Matrix> diffs;
  std::vector<std::string> ids;
  for (int q = k.dim(); q >= 0; --q) {
    dims.push_back(k.count(q));
    ids.push_back("C_" + std::to_string(q));
    if (q > 0) diffs.push_back(boundary_matrix(k, q));
  }
  return BasedComplex(-k.dim(), dims, diffs, ids);
}

BasedComplex cochain_complex(const OrderedComplex& k) {
  std::vector<size_t> dims;
  std::vector<Matrix> diffs;
  for (int q = 0; q <= k.dim(); ++q) {
    dims.push_back(k.count(q));
    if (q < k.dim()) diffs.push_back(boundary_matrix(k, q + 1).transpose());
  }
  return BasedComplex(0, dims, diffs);
}

std::vector<size_t> betti_numbers(const OrderedComplex& k) {
  auto b = cochain_complex(k).betti();
  return b;
}

Simplex Subdivision::carrier(const Simplex& s) const {
  if (s.empty()) throw InputError("carrier of an empty simplex");
  return barycenter_of.at(s.back());
}

Subdivision barycentric_subdivision(const OrderedComplex& k) {
  Subdivision sd;
  std::map<Simplex, uint32_t> vid;
  std::vector<std::string> names;
  for (int q = 0; q <= k.dim(); ++q)
    for (const auto& s : k.simplices(q)) {
      vid[s] = static_cast<uint32_t>(sd.barycenter_of.size());
      sd.barycenter_of.push_back(s);
      if (q == 0) {
        names.push_back(k.vertex_names()[s[0]]);
      } else {
        std::string n = "{";
        for (size_t i = 0; i < s.size(); ++i) n += (i ? "," : "") + k.vertex_names()[s[i]];
        names.push_back(n + "}");
      }
    }
  // Maximal chains inside each maximal flag: recurse from a simplex down to a vertex.
  std::vector<Simplex> chains;
  std::function<void(const Simplex&, Simplex&)> descend = [&](const Simplex& s, Simplex& acc) {
    acc.push_back(vid.at(s));
    if (s.size() == 1) {
      Simplex c(acc.rbegin(), acc.rend());
      chains.push_back(std::move(c));
    } else {
      for (size_t i = 0; i < s.size(); ++i) descend(face(s, i), acc);
    }
    acc.pop_back();
  };
  for (int q = 0; q <= k.dim(); ++q)
    for (const auto& s : k.simplices(q)) {
      Simplex acc;
      descend(s, acc);
    }
  sd.complex = OrderedComplex(std::move(names), chains);
  return sd;
}

void SimplicialMap::validate() const {
  if (!source || !target) throw InputError("simplicial map without complexes");
  if (vertex_map.size() != source->vertex_count()) throw InputError("vertex map has the wrong size");
  for (uint32_t v : vertex_map)
    if (v >= target->vertex_count()) throw InputError("vertex map leaves the target");
  for (int q = 0; q <= source->dim(); ++q)
    for (const auto& s : source->simplices(q))
      if (!target->contains(image(s)))
        throw InputError("image of " + source->label(s) + " is not a simplex");
}

Simplex SimplicialMap::image(const Simplex& s) const {
  Simplex out;
  for (uint32_t v : s) out.push_back(vertex_map.at(v));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int SimplicialMap::orientation(const Simplex& s) const {
  std::vector<uint32_t> img;
  for (uint32_t v : s) img.push_back(vertex_map.at(v));
  int sign = 1;
  for (size_t i = 0; i < img.size(); ++i)
    for (size_t j = i + 1; j < img.size(); ++j) {
      if (img[i] == img[j]) return 0;
      if (img[i] > img[j]) sign = -sign;
    }
  return sign;
}

Matrix SimplicialMap::chain_matrix(int q) const {
  Matrix m(target->count(q), source->count(q));
  const auto& sx = source->simplices(q);
  for (size_t c = 0; c < sx.size(); ++c) {
    int o = orientation(sx[c]);
    if (o != 0) m(target->index(image(sx[c])), c) = Rational(o);
  }
  return m;
}

SimplicialMap SimplicialMap::compose(const SimplicialMap& first) const {
  if (first.target != source) throw InputError("maps are not composable");
  SimplicialMap out{first.source, target, {}};
  for (uint32_t v : first.vertex_map) out.vertex_map.push_back(vertex_map.at(v));
  return out;
}

SimplicialMap approx_identity(const Subdivision& sd, const OrderedComplex& k) {
  SimplicialMap g{&sd.complex, &k, {}};
  if (sd.barycenter_of.size() != sd.complex.vertex_count()) throw InputError("carrier data inconsistent");
  for (const auto& s : sd.barycenter_of) {
    if (!k.contains(s)) throw InputError("carrier simplex missing from the original complex");
    g.vertex_map.push_back(s.back());
  }
  g.validate();
  return g;
}

Matrix subdivision_chain_matrix(const Subdivision& sd, const OrderedComplex& k, int q) {
  // sd(v) = b_v, sd(σ) = (-1)^q cone_σ(sd(∂σ)), with the cone vertex appended last.
  std::map<Simplex, uint32_t> vid;
  for (uint32_t i = 0; i < sd.barycenter_of.size(); ++i) vid[sd.barycenter_of[i]] = i;
  using Chain = std::map<Simplex, Rational>;
  std::map<Simplex, Chain> memo;
  std::function<const Chain&(const Simplex&)> sub = [&](const Simplex& s) -> const Chain& {
    auto it = memo.find(s);
    if (it != memo.end()) return it->second;
    Chain out;
    if (s.size() == 1) {
      out[{vid.at(s)}] = Rational(1);
    } else {
      Rational sign((s.size() - 1) % 2 == 0 ? 1 : -1);
      uint32_t b = vid.at(s);
      for (size_t i = 0; i < s.size(); ++i) {
        Rational fs = i % 2 == 0 ? sign : -sign;
        for (const auto& [c, v] : sub(face(s, i))) {
          Simplex cone = c;
          cone.push_back(b);
          out[cone] += fs * v;
        }
      }
    }
    return memo.emplace(s, std::move(out)).first->second;
  };
  Matrix m(sd.complex.count(q), k.count(q));
  const auto& sx = k.simplices(q);
  for (size_t c = 0; c < sx.size(); ++c)
    for (const auto& [s, v] : sub(sx[c]))
      if (!v.is_zero()) m(sd.complex.index(s), c) = v;
  return m;
}

}  // namespace ttwist
