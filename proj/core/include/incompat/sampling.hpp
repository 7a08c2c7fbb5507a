#ifndef INCOMPAT_SAMPLING_HPP
#define INCOMPAT_SAMPLING_HPP

// Seeded randomness used by the roof sampler, the optimizer seeds and the
// property-test suites.  Everything takes an explicit engine or seed; nothing
// here touches global state, so runs are reproducible by construction.

#include <cstdint>
#include <random>

#include "incompat/quantum.hpp"

namespace incompat {

// Ginibre matrix: i.i.d. standard complex normal entries
ComplexMatrix ginibre(int rows, int cols, std::mt19937_64& rng);

// Haar-distributed unitary via Gram-Schmidt of a Ginibre matrix with the
// R-diagonal phases pinned positive
ComplexMatrix haar_unitary(int dim, std::mt19937_64& rng);

// G G^dag / Tr with G of shape dim x rank: full rank a.s. when rank >= dim
DensityMatrix random_density(int dim, std::mt19937_64& rng, int rank = 0);

DensityMatrix random_pure(int dim, std::mt19937_64& rng);

// n_outcomes randomized effects pushed through S^{-1/2} . S^{-1/2} so they
// sum to the identity
std::vector<Effect> random_povm(int dim, int n_outcomes, std::mt19937_64& rng);

// rank-one projective measurement from Haar unitary columns
std::vector<Effect> random_projective(int dim, std::mt19937_64& rng);

// Additive (Weyl) low-discrepancy sequence over [0,1)^dim: x_k = frac(offset
// + k * alpha) with alpha built from square roots of primes; deterministic
// for a fixed seed.
class WeylSequence {
public:
  WeylSequence(int dim, uint64_t seed);
  std::vector<double> next();

private:
  std::vector<double> alpha_;
  std::vector<double> state_;
};

} // namespace incompat

#endif
