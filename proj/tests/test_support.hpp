#ifndef INCOMPAT_TEST_SUPPORT_HPP
#define INCOMPAT_TEST_SUPPORT_HPP

// Shared builders for the unit suites: literal matrices, random hermitian /
// full-rank inputs, and random stochastic tables.

#include <initializer_list>
#include <random>
#include <vector>

#include "incompat/sampling.hpp"

namespace testsup {

using incompat::ComplexMatrix;
using incompat::cplx;

// row-major literal, e.g. mat(2, {1, 0, 0, -1})
inline ComplexMatrix mat(int n, std::initializer_list<cplx> entries) {
  ComplexMatrix m(n, n);
  int k = 0;
  for (const cplx& v : entries) m(k / n, k % n) = v, ++k;
  return m;
}

inline double maxdiff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return incompat::max_abs(a - b);
}

inline incompat::HermitianMatrix random_hermitian(int d, std::mt19937_64& rng) {
  const ComplexMatrix g = incompat::ginibre(d, d, rng);
  return incompat::HermitianMatrix(0.5 * (g + incompat::adjoint(g)));
}

// random density matrix pushed away from the boundary so inverse-square-root
// routes stay well conditioned
inline incompat::DensityMatrix full_rank_state(int d, std::mt19937_64& rng) {
  const incompat::DensityMatrix rho = incompat::random_density(d, rng);
  const ComplexMatrix m =
      0.95 * rho.mat() + (0.05 / d) * ComplexMatrix::identity(d);
  return incompat::DensityMatrix(m);
}

inline std::vector<double> random_distribution(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (double& v : p) total += (v = u(rng));
  for (double& v : p) v /= total;
  return p;
}

// response[l][x][a] = p(a|x, lambda)
inline incompat::ResponseTable random_response(int n_lambda, int settings, int outcomes,
                                               std::mt19937_64& rng) {
  incompat::ResponseTable t(n_lambda);
  for (auto& per_lambda : t) {
    per_lambda.resize(settings);
    for (auto& dist : per_lambda) dist = random_distribution(outcomes, rng);
  }
  return t;
}

inline incompat::StateAssemblage random_ho_assemblage(int dim, int settings, int outcomes,
                                                      std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nl(2, 4);
  const int n_lambda = nl(rng);
  std::vector<incompat::DensityMatrix> states;
  for (int l = 0; l < n_lambda; ++l) states.push_back(incompat::random_density(dim, rng));
  return incompat::ho_state_assemblage(states, random_distribution(n_lambda, rng),
                                       random_response(n_lambda, settings, outcomes, rng));
}

inline incompat::MeasurementAssemblage random_measurement(int dim, int settings, int outcomes,
                                                          std::mt19937_64& rng) {
  std::vector<std::vector<incompat::Effect>> effects;
  for (int x = 0; x < settings; ++x) effects.push_back(incompat::random_povm(dim, outcomes, rng));
  return incompat::MeasurementAssemblage(std::move(effects));
}

} // namespace testsup

#endif
