#include "ttwist/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ttwist {

namespace {

std::string strip_comment(std::string line) {
  auto pos = line.find('#');
  if (pos != std::string::npos) line.erase(pos);
  return line;
}

std::vector<std::string> tokens(const std::string& s) {
  std::string t = s;
  for (char& c : t)
    if (c == '(' || c == ')' || c == ',' || c == ';') c = ' ';
  std::istringstream is(t);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

uint32_t vertex_id(const OrderedComplex& k, const std::string& name) {
  const auto& names = k.vertex_names();
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw InputError("unknown vertex '" + name + "'");
  return static_cast<uint32_t>(it - names.begin());
}

/// Sorted simplex and the sign of the sorting permutation.
std::pair<Simplex, int> sorted_tuple(const OrderedComplex& k, const std::vector<std::string>& names) {
  Simplex s;
  for (auto& n : names) s.push_back(vertex_id(k, n));
  int sign = 1;
  for (size_t i = 0; i < s.size(); ++i)
    for (size_t j = i + 1; j < s.size(); ++j) {
      if (s[i] == s[j]) throw InputError("repeated vertex in a simplex");
      if (s[i] > s[j]) sign = -sign;
    }
  std::sort(s.begin(), s.end());
  return {s, sign};
}

}  // namespace

OrderedComplex parse_complex(std::istream& in) {
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> rows;
  bool in_simplexes = false;
  bool have_vertices = false;
  for (std::string line; std::getline(in, line);) {
    line = strip_comment(line);
    auto colon = line.find(':');
    std::string head = colon == std::string::npos ? "" : line.substr(0, colon);
    auto ht = tokens(head);
    if (ht.size() == 1 && ht[0] == "vertices") {
      names = tokens(line.substr(colon + 1));
      have_vertices = true;
      in_simplexes = false;
      continue;
    }
    if (ht.size() == 1 && ht[0] == "simplexes") {
      in_simplexes = true;
      auto rest = tokens(line.substr(colon + 1));
      if (!rest.empty()) rows.push_back(rest);
      continue;
    }
    auto t = tokens(line);
    if (t.empty()) continue;
    if (!in_simplexes) throw InputError("complex file: expected 'vertices:' or 'simplexes:', got '" + line + "'");
    rows.push_back(t);
  }
  if (!have_vertices) throw InputError("complex file: missing 'vertices:' line");
  for (size_t i = 0; i < names.size(); ++i)
    for (size_t j = i + 1; j < names.size(); ++j)
      if (names[i] == names[j]) throw InputError("complex file: duplicate vertex '" + names[i] + "'");
  std::vector<Simplex> simplexes;
  for (auto& r : rows) {
    Simplex s;
    for (auto& n : r) {
      auto it = std::find(names.begin(), names.end(), n);
      if (it == names.end()) throw InputError("complex file: unknown vertex '" + n + "'");
      s.push_back(static_cast<uint32_t>(it - names.begin()));
    }
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw InputError("complex file: repeated vertex in a simplex");
    simplexes.push_back(s);
  }
  // Isolated vertices are part of the complex too.
  for (uint32_t v = 0; v < names.size(); ++v) simplexes.push_back({v});
  return OrderedComplex(names, simplexes);
}

OrderedComplex load_complex(const std::string& path) {
  auto in = open(path);
  return parse_complex(in);
}

Representation parse_representation(std::istream& in, const OrderedComplex& k, const Pi1Presentation& pi) {
  std::vector<std::string> all;
  for (std::string line; std::getline(in, line);) {
    auto t = tokens(strip_comment(line));
    all.insert(all.end(), t.begin(), t.end());
  }
  size_t pos = 0;
  auto next = [&]() -> const std::string& {
    if (pos >= all.size()) throw InputError("representation file ended early");
    return all[pos++];
  };
  if (next() != "dim") throw InputError("representation file must start with 'dim d'");
  long d = 0;
  try {
    d = std::stol(next());
  } catch (const std::exception&) {
    throw InputError("representation file: bad dimension");
  }
  if (d <= 0 || d > 64) throw InputError("representation file: dimension must be in 1..64");
  auto dim = static_cast<size_t>(d);
  std::vector<Matrix> gens(pi.generator_count(), Matrix::identity(dim));
  std::vector<Matrix> conn(pi.edges.size(), Matrix::identity(dim));
  bool used_gen = false, used_edge = false;
  while (pos < all.size()) {
    std::string kind = next();
    if (kind != "gen" && kind != "edge") throw InputError("representation file: expected 'gen' or 'edge', got '" + kind + "'");
    std::vector<std::string> names;
    for (std::string w = next(); w != ":="; w = next()) names.push_back(w);
    auto [s, sign] = sorted_tuple(k, names);
    if (s.size() != 2 || !k.contains(s)) throw InputError("representation file: '" + kind + "' needs an edge of the complex");
    Matrix m(dim, dim);
    for (size_t r = 0; r < dim; ++r)
      for (size_t c = 0; c < dim; ++c) {
        try {
          m(r, c) = Rational::parse(next());
        } catch (const InputError&) {
          throw;
        } catch (const std::exception& e) {
          throw InputError(std::string("representation file: bad entry: ") + e.what());
        }
      }
    // An edge written against the vertex order carries the inverse matrix.
    if (sign < 0) {
      auto inv = inverse(m);
      if (!inv) throw InputError("representation file: matrix on " + k.label(s) + " is not invertible");
      m = *inv;
    }
    if (kind == "gen") {
      used_gen = true;
      auto g = pi.generator_of(s);
      if (!g) throw InputError("representation file: " + k.label(s) + " is a spanning-tree edge, not a generator");
      gens[*g] = m;
    } else {
      used_edge = true;
      size_t e = static_cast<size_t>(std::find(pi.edges.begin(), pi.edges.end(), s) - pi.edges.begin());
      conn[e] = m;
    }
  }
  if (used_gen && used_edge) throw InputError("representation file: 'gen' and 'edge' lines cannot be mixed");
  if (used_edge) return Representation::from_connection(k, pi, dim, conn);
  return Representation(k, pi, dim, gens);
}

Representation load_representation(const std::string& path, const OrderedComplex& k, const Pi1Presentation& pi) {
  auto in = open(path);
  return parse_representation(in, k, pi);
}

Theta parse_cocycle(std::istream& in, const OrderedComplex& k) {
  Theta theta;
  for (std::string line; std::getline(in, line);) {
    line = strip_comment(line);
    if (tokens(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError("cocycle file: expected '(simplex) = value', got '" + line + "'");
    auto [s, sign] = sorted_tuple(k, tokens(line.substr(0, eq)));
    if (s.empty() || !k.contains(s)) throw InputError("cocycle file: " + line.substr(0, eq) + " is not a simplex of the complex");
    auto vt = tokens(line.substr(eq + 1));
    if (vt.size() != 1) throw InputError("cocycle file: expected one value in '" + line + "'");
    Rational v = Rational::parse(vt[0]);
    int deg = static_cast<int>(s.size()) - 1;
    auto& vec = theta[deg];
    if (vec.empty()) vec.assign(k.count(deg), Rational(0));
    vec[k.index(s)] += sign > 0 ? v : -v;
  }
  return theta;
}

Theta load_cocycle(const std::string& path, const OrderedComplex& k) {
  auto in = open(path);
  return parse_cocycle(in, k);
}

namespace {

Matrix matrix_from_json(const Json& j, size_t rows) {
  if (!j.is_array()) throw InputError("bases file: expected a list of vectors");
  std::vector<Vector> cols;
  for (auto& col : j) {
    if (!col.is_array() || col.size() != rows) throw InputError("bases file: vector of the wrong length");
    Vector v;
    for (auto& x : col) v.push_back(Rational::parse(x.is_string() ? x.get<std::string>() : x.dump()));
    cols.push_back(std::move(v));
  }
  return Matrix::from_columns(rows, cols);
}

}  // namespace

BasesInput parse_bases(const Json& j, const OrderedComplex& k, const Representation& rho) {
  BasesInput b;
  size_t d = rho.dim();
  if (j.contains("untwisted")) {
    CohomologyBases h;
    for (int q = 0; q <= k.dim(); ++q) {
      std::string key = std::to_string(q);
      h.push_back(j["untwisted"].contains(key) ? matrix_from_json(j["untwisted"][key], k.count(q) * d)
                                               : Matrix(k.count(q) * d, 0));
    }
    b.untwisted = std::move(h);
  }
  if (j.contains("even") || j.contains("odd")) {
    size_t ev = 0, od = 0;
    for (int q = 0; q <= k.dim(); ++q) (q % 2 == 0 ? ev : od) += k.count(q) * d;
    Z2Bases z;
    z.even = j.contains("even") ? matrix_from_json(j["even"], ev) : Matrix(ev, 0);
    z.odd = j.contains("odd") ? matrix_from_json(j["odd"], od) : Matrix(od, 0);
    b.twisted = std::move(z);
  }
  return b;
}

BasesInput load_bases(const std::string& path, const OrderedComplex& k, const Representation& rho) {
  auto in = open(path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError(std::string("bases file: ") + e.what());
  }
  return parse_bases(j, k, rho);
}

Json to_json(const Rational& r) { return r.str(); }

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (auto& x : v) a.push_back(x.str());
  return a;
}

Json columns_json(const Matrix& m) {
  Json a = Json::array();
  for (size_t c = 0; c < m.cols(); ++c) a.push_back(to_json(m.column(c)));
  return a;
}

namespace {

Json rows_json(const Matrix& m) {
  Json a = Json::array();
  for (size_t r = 0; r < m.rows(); ++r) a.push_back(to_json(m.row(r)));
  return a;
}

}  // namespace

Json to_json(const DetElement& d) {
  Json j;
  j["grade"] = d.grade();
  j["coordinate"] = d.coordinate().str();
  j["basis_id"] = d.basis_id();
  return j;
}

Json to_json(const BasedComplex& c) {
  Json j;
  j["low"] = c.low;
  j["dims"] = c.dims;
  Json ds = Json::array();
  for (auto& m : c.differentials) ds.push_back(rows_json(m));
  j["differentials"] = ds;
  return j;
}

Json to_json(const TorsionResult& t) {
  Json j;
  j["value"] = to_json(t.value);
  j["route"] = t.route;
  j["up_to_sign"] = t.up_to_sign;
  if (!t.cross_checks.empty()) {
    Json c;
    for (auto& [name, v] : t.cross_checks) c[name] = v.str();
    j["cross_checks"] = c;
    j["routes_agree"] = t.routes_agree;
  }
  if (!t.bases.empty()) {
    Json b;
    for (size_t q = 0; q < t.bases.size(); ++q) b[std::to_string(q)] = columns_json(t.bases[q]);
    j["untwisted_bases"] = b;
  }
  if (t.twisted_bases) {
    j["twisted_bases"] = {{"even", columns_json(t.twisted_bases->even)}, {"odd", columns_json(t.twisted_bases->odd)}};
  }
  return j;
}

Json to_json(const StabilizationReport& r) {
  Json j;
  Json levels = Json::array();
  for (auto& l : r.levels) {
    Json e;
    e["level"] = l.level;
    e["dims"] = l.dims;
    e["cycles"] = l.cycles;
    e["saturation"] = l.saturation;
    e["comparison_iso"] = l.comparison_iso;
    levels.push_back(e);
  }
  j["levels"] = levels;
  j["stabilized"] = r.stabilized;
  j["stable_level"] = r.stable_level;
  j["dims"] = r.dims;
  j["largest_window"] = r.largest_window;
  j["levels_reduced"] = r.levels_reduced;
  return j;
}

Json to_json(const std::vector<SpectralPage>& pages, bool with_differentials) {
  Json a = Json::array();
  for (auto& page : pages) {
    Json pj;
    pj["r"] = page.r;
    Json cells = Json::array();
    for (size_t i = 0; i < page.cells.size(); ++i) {
      auto& c = page.cells[i];
      Json cj;
      cj["p"] = c.p;
      cj["parity"] = ((c.n % 2) + 2) % 2;
      cj["dim"] = c.dim();
      if (with_differentials && page.target[i]) cj["d"] = rows_json(page.d[i]);
      cells.push_back(cj);
    }
    pj["cells"] = cells;
    a.push_back(pj);
  }
  return a;
}

Json to_json(const SubdivisionReport& r) {
  Json j;
  j["h_even"] = r.h_even;
  j["h_odd"] = r.h_odd;
  j["sub_h_even"] = r.sub_h_even;
  j["sub_h_odd"] = r.sub_h_odd;
  j["betti"] = r.betti;
  j["sub_betti"] = r.sub_betti;
  j["dims_match"] = r.dims_match;
  j["torsion"] = r.torsion.value.coordinate().str();
  j["sub_torsion"] = r.sub_torsion.value.coordinate().str();
  j["ratio"] = r.ratio.str();
  j["ratio_is_unit"] = r.ratio_is_unit;
  j["default_twisted_bases"] = r.default_twisted_bases;
  return j;
}

std::string cochain_label(const OrderedComplex& k, int degree, const Vector& v) {
  std::ostringstream os;
  bool first = true;
  const auto& sx = k.simplices(degree);
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    if (!first) os << " + ";
    os << v[i].str() << "*" << k.label(sx[i]);
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace ttwist
