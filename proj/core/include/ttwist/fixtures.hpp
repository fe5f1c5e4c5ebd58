#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ttwist/pipeline.hpp"

namespace ttwist {

/// Δ^n with vertices v0 .. vn.
OrderedComplex standard_simplex(size_t n);
/// ∂Δ^n (a triangulated S^{n-1}).
OrderedComplex boundary_simplex(size_t n);
/// Staircase triangulation of ∂Δ² × ∂Δ³ (S¹×S², 12 vertices, 36 tetrahedra).
OrderedComplex circle_times_sphere();
/// The 3-cochain ϑ(face_k) = (-1)^k on ∂Δ⁴, face_k missing vertex k.
Vector alternating_top_cocycle(const OrderedComplex& boundary4);
/// Indicator of the first 3-simplex.
Vector indicator_top_cocycle(const OrderedComplex& k);

/// A complex with its local system and twisting cocycle. Heap-allocated so
/// that the complex address stays fixed for the pointers held by derived
/// objects.
struct Fixture {
  std::string name;
  OrderedComplex complex;
  Pi1Presentation pi;
  std::optional<Representation> rep;
  Theta theta;
};

std::unique_ptr<Fixture> make_fixture(std::string name, OrderedComplex k, size_t dim,
                                      const std::vector<Matrix>& generators, Theta theta = {});

std::unique_ptr<Fixture> fixture_delta2();
/// ∂Δ² with ρ(g) = (-1).
std::unique_ptr<Fixture> fixture_circle_minus();
/// ∂Δ² with ρ(g) = (3) (not unimodular).
std::unique_ptr<Fixture> fixture_circle_three();
std::unique_ptr<Fixture> fixture_boundary3();
/// ∂Δ⁴, trivial rank-1 ρ, ϑ = alternating_top_cocycle.
std::unique_ptr<Fixture> fixture_s3();
/// S¹×S², trivial rank-1 ρ, ϑ = indicator of one 3-simplex.
std::unique_ptr<Fixture> fixture_s1_s2();
/// Random connected 3-complex on at most 8 vertices; ρ given by the flat
/// connection A(uv) = M^{φ(uv)} for a random integral 1-cocycle φ, with
/// M = (-1) or M = (1 1; 0 1) by seed parity; ϑ a random integral 3-cochain.
std::unique_ptr<Fixture> fixture_random(uint64_t seed);

/// The named fixtures above plus ten random ones (seeds 1..10).
std::vector<std::unique_ptr<Fixture>> all_fixtures();

}  // namespace ttwist
