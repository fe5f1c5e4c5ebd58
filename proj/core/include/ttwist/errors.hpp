#pragma once

#include <stdexcept>
#include <string>

namespace ttwist {

/// Malformed input: bad files, dimension mismatches, invalid bases.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematically well-formed request that the library declines to answer,
/// e.g. torsion for a non-unimodular representation.
class Refusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ttwist
