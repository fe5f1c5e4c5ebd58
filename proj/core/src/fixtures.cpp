#include "ttwist/fixtures.hpp"

#include <algorithm>
#include <numeric>

namespace ttwist {

namespace {

std::vector<std::string> numbered(const std::string& prefix, size_t n) {
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

Matrix power(const Matrix& m, long e) {
  Matrix base = e < 0 ? *inverse(m) : m;
  Matrix out = Matrix::identity(m.rows());
  for (long i = 0; i < std::labs(e); ++i) out = out * base;
  return out;
}

Rational lcm_of_denominators(const Vector& v) {
  mpz_class l = 1;
  for (auto& x : v) {
    mpz_class d = x.raw().get_den();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  return Rational(mpq_class(l));
}

}  // namespace

OrderedComplex standard_simplex(size_t n) {
  Simplex s(n + 1);
  std::iota(s.begin(), s.end(), 0u);
  return OrderedComplex(numbered("v", n + 1), {s});
}

OrderedComplex boundary_simplex(size_t n) {
  Simplex s(n + 1);
  std::iota(s.begin(), s.end(), 0u);
  std::vector<Simplex> faces;
  for (size_t i = 0; i <= n; ++i) faces.push_back(face(s, i));
  return OrderedComplex(numbered("v", n + 1), faces);
}

OrderedComplex circle_times_sphere() {
  // Vertex (i, j), i in ∂Δ², j in ∂Δ³, has index 4i + j (lexicographic).
  std::vector<std::string> names;
  for (char a : std::string("abc"))
    for (int j = 0; j < 4; ++j) names.push_back(std::string(1, a) + std::to_string(j));
  std::vector<std::pair<uint32_t, uint32_t>> edges{{0, 1}, {1, 2}, {0, 2}};
  std::vector<Simplex> tops;
  for (auto [i0, i1] : edges)
    for (uint32_t skip = 0; skip < 4; ++skip) {
      std::vector<uint32_t> tri;
      for (uint32_t j = 0; j < 4; ++j)
        if (j != skip) tri.push_back(j);
      // Staircase paths from (i0, tri[0]) to (i1, tri[2]): step in i after
      // position k of the triangle.
      for (size_t k = 0; k < 3; ++k) {
        Simplex s;
        for (size_t m = 0; m <= k; ++m) s.push_back(4 * i0 + tri[m]);
        for (size_t m = k; m < 3; ++m) s.push_back(4 * i1 + tri[m]);
        tops.push_back(s);
      }
    }
  return OrderedComplex(names, tops);
}

Vector alternating_top_cocycle(const OrderedComplex& k) {
  Vector v(k.count(3));
  Simplex all{0, 1, 2, 3, 4};
  for (size_t i = 0; i < 5; ++i) v[k.index(face(all, i))] = Rational(i % 2 == 0 ? 1 : -1);
  return v;
}

Vector indicator_top_cocycle(const OrderedComplex& k) {
  Vector v(k.count(3));
  v.at(0) = Rational(1);
  return v;
}

std::unique_ptr<Fixture> make_fixture(std::string name, OrderedComplex k, size_t dim,
                                      const std::vector<Matrix>& generators, Theta theta) {
  auto f = std::make_unique<Fixture>();
  f->name = std::move(name);
  f->complex = std::move(k);
  f->pi = fundamental_group(f->complex);
  std::vector<Matrix> gens = generators;
  while (gens.size() < f->pi.generator_count()) gens.push_back(Matrix::identity(dim));
  f->rep.emplace(f->complex, f->pi, dim, gens);
  f->theta = std::move(theta);
  return f;
}

std::unique_ptr<Fixture> fixture_delta2() { return make_fixture("delta2", standard_simplex(2), 1, {}); }

std::unique_ptr<Fixture> fixture_circle_minus() {
  return make_fixture("circle_minus", boundary_simplex(2), 1, {Matrix(1, 1, {-1})});
}

std::unique_ptr<Fixture> fixture_circle_three() {
  return make_fixture("circle_three", boundary_simplex(2), 1, {Matrix(1, 1, {3})});
}

std::unique_ptr<Fixture> fixture_boundary3() { return make_fixture("boundary3", boundary_simplex(3), 1, {}); }

std::unique_ptr<Fixture> fixture_s3() {
  OrderedComplex k = boundary_simplex(4);
  Theta theta{{3, alternating_top_cocycle(k)}};
  return make_fixture("s3", std::move(k), 1, {}, std::move(theta));
}

std::unique_ptr<Fixture> fixture_s1_s2() {
  OrderedComplex k = circle_times_sphere();
  Theta theta{{3, indicator_top_cocycle(k)}};
  return make_fixture("s1_s2", std::move(k), 1, {}, std::move(theta));
}

std::unique_ptr<Fixture> fixture_random(uint64_t seed) {
  std::mt19937_64 rng(seed * 7919 + 17);
  OrderedComplex k;
  for (;;) {
    size_t nv = 5 + rng() % 4;
    std::vector<Simplex> tops;
    size_t ntet = 2 + rng() % 5;
    for (size_t i = 0; i < ntet; ++i) {
      std::vector<uint32_t> vs(nv);
      std::iota(vs.begin(), vs.end(), 0u);
      std::shuffle(vs.begin(), vs.end(), rng);
      Simplex s(vs.begin(), vs.begin() + 4);
      std::sort(s.begin(), s.end());
      tops.push_back(s);
    }
    size_t ntri = rng() % 4;
    for (size_t i = 0; i < ntri; ++i) {
      std::vector<uint32_t> vs(nv);
      std::iota(vs.begin(), vs.end(), 0u);
      std::shuffle(vs.begin(), vs.end(), rng);
      Simplex s(vs.begin(), vs.begin() + 3);
      std::sort(s.begin(), s.end());
      tops.push_back(s);
    }
    for (uint32_t v = 0; v < nv; ++v) tops.push_back({v});
    k = OrderedComplex(numbered("u", nv), tops);
    if (k.connected() && k.dim() == 3) break;
  }
  // Integral 1-cocycle from a random combination of a kernel basis of δ_1.
  Matrix ker = kernel(cochain_complex(k).d(1));
  Vector phi(k.count(1));
  for (size_t c = 0; c < ker.cols(); ++c) {
    Vector col = ker.column(c);
    Rational scale = lcm_of_denominators(col) * Rational(static_cast<long>(rng() % 5) - 2);
    for (size_t i = 0; i < phi.size(); ++i) phi[i] += scale * col[i];
  }
  bool rank_two = seed % 2 == 0;
  Matrix m = rank_two ? Matrix(2, 2, {1, 1, 0, 1}) : Matrix(1, 1, {-1});
  std::vector<Matrix> conn;
  for (size_t e = 0; e < k.count(1); ++e) {
    const auto& x = phi[e].raw();
    if (x.get_den() != 1) throw std::logic_error("fixture_random: cocycle is not integral");
    conn.push_back(power(m, x.get_num().get_si()));
  }
  Vector theta(k.count(3));
  for (auto& x : theta) x = Rational(static_cast<long>(rng() % 5) - 2);
  auto f = std::make_unique<Fixture>();
  f->name = "random" + std::to_string(seed);
  f->complex = std::move(k);
  f->pi = fundamental_group(f->complex);
  f->rep.emplace(Representation::from_connection(f->complex, f->pi, m.rows(), conn));
  if (!is_zero(theta)) f->theta[3] = theta;
  return f;
}

std::vector<std::unique_ptr<Fixture>> all_fixtures() {
  std::vector<std::unique_ptr<Fixture>> out;
  out.push_back(fixture_delta2());
  out.push_back(fixture_circle_minus());
  out.push_back(fixture_boundary3());
  out.push_back(fixture_s3());
  out.push_back(fixture_s1_s2());
  for (uint64_t s = 1; s <= 10; ++s) out.push_back(fixture_random(s));
  return out;
}

}  // namespace ttwist
