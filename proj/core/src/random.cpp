#include "ttwist/random.hpp"

namespace ttwist {

Rational random_rational(std::mt19937_64& rng, bool nonzero) {
  std::uniform_int_distribution<long> num(-5, 5), den(1, 3);
  long p = num(rng);
  while (nonzero && p == 0) p = num(rng);
  return Rational(p, den(rng));
}

Matrix random_matrix(size_t rows, size_t cols, std::mt19937_64& rng) {
  Matrix m(rows, cols);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c) m(r, c) = random_rational(rng);
  return m;
}

Matrix random_invertible(size_t n, std::mt19937_64& rng) {
  Matrix l = Matrix::identity(n), u = Matrix::identity(n), d(n, n);
  for (size_t i = 0; i < n; ++i) {
    d(i, i) = random_rational(rng, true);
    for (size_t j = 0; j < i; ++j) {
      l(i, j) = random_rational(rng);
      u(j, i) = random_rational(rng);
    }
  }
  return l * d * u;
}

}  // namespace ttwist
