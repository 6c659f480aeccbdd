#pragma once

#include <cstdint>
#include <vector>

#include "tailgate/distribution.hpp"
#include "tailgate/rng.hpp"

// Deterministic instance generators. Atoms sit on the integer lattice
// {-3..3}^dim with integer weights, so exact enumeration stays small.
namespace tailgate::corpus {

FiniteDistribution random_lattice_distribution(Stream& rng, std::size_t dim, std::size_t max_support);
ComponentFamily random_family(Stream& rng, std::size_t n, std::size_t dim, std::size_t max_support);

// 240 distributions, dim 1..3, support 1..6.
std::vector<FiniteDistribution> distribution_corpus();
// 120 families, n 1..4, support 1..3, dim 1..2.
std::vector<ComponentFamily> family_corpus();
// 100 families for the cover identity, n 1..5, support 1..4, dim 1..3.
std::vector<ComponentFamily> cover_corpus();
// The frozen 50-instance corpus of the constant survey, n 1..6, support 1..3,
// dim 1..2. Instance 0 has identical components, instance 1 is the converse
// family with n = 3, the rest are random.
std::vector<ComponentFamily> theorem_corpus();

// n copies of the same law.
ComponentFamily identical_components(const FiniteDistribution& d, std::size_t n);
// X_1 Rademacher, X_2 = ... = X_n = 0.
ComponentFamily converse_family(std::size_t n);

}  // namespace tailgate::corpus
