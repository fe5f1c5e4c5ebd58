#pragma once

#include <random>

#include "ttwist/matrix.hpp"

namespace ttwist {

/// Small nonzero-biased rational p/q with |p| <= 5, 1 <= q <= 3.
Rational random_rational(std::mt19937_64& rng, bool nonzero = false);
Matrix random_matrix(size_t rows, size_t cols, std::mt19937_64& rng);
/// Random invertible matrix built as L * D * U with unit triangular L, U.
Matrix random_invertible(size_t n, std::mt19937_64& rng);

}  // namespace ttwist
