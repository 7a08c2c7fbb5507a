#include "incompat/sampling.hpp"

#include <cmath>

namespace incompat {

ComplexMatrix ginibre(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = cplx(n(rng), n(rng));
  return g;
}

ComplexMatrix haar_unitary(int dim, std::mt19937_64& rng) {
  // modified Gram-Schmidt on Ginibre columns; dividing each orthogonalized
  // column by a positive norm is exactly the positive-R-diagonal convention
  ComplexMatrix g = ginibre(dim, dim, rng);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < j; ++k) {
      cplx ip(0.0, 0.0);
      for (int i = 0; i < dim; ++i) ip += std::conj(g(i, k)) * g(i, j);
      for (int i = 0; i < dim; ++i) g(i, j) -= ip * g(i, k);
    }
    double norm = 0.0;
    for (int i = 0; i < dim; ++i) norm += std::norm(g(i, j));
    norm = std::sqrt(norm);
    if (norm < 1e-12) return haar_unitary(dim, rng); // measure-zero degeneracy: redraw
    for (int i = 0; i < dim; ++i) g(i, j) /= norm;
  }
  return g;
}

DensityMatrix random_density(int dim, std::mt19937_64& rng, int rank) {
  if (rank <= 0) rank = dim;
  const ComplexMatrix g = ginibre(dim, rank, rng);
  ComplexMatrix m = g * adjoint(g);
  const double tr = trace(m).real();
  return DensityMatrix((1.0 / tr) * m);
}

DensityMatrix random_pure(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<cplx> amp(dim);
  for (auto& c : amp) c = cplx(n(rng), n(rng));
  return DensityMatrix::pure(amp);
}

std::vector<Effect> random_povm(int dim, int n_outcomes, std::mt19937_64& rng) {
  if (n_outcomes < 1) throw ShapeError("random_povm: need at least one outcome");
  std::vector<ComplexMatrix> raw;
  ComplexMatrix total(dim, dim);
  for (int i = 0; i < n_outcomes; ++i) {
    const ComplexMatrix g = ginibre(dim, dim, rng);
    raw.push_back(g * adjoint(g));
    total = total + raw.back();
  }
  const ComplexMatrix fix = psd_inv_sqrt(HermitianMatrix(total), 1e-12);
  std::vector<Effect> out;
  for (const auto& e : raw) out.emplace_back(fix * e * fix);
  return out;
}

std::vector<Effect> random_projective(int dim, std::mt19937_64& rng) {
  const ComplexMatrix u = haar_unitary(dim, rng);
  std::vector<Effect> out;
  for (int k = 0; k < dim; ++k) {
    ComplexMatrix p(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) p(i, j) = u(i, k) * std::conj(u(j, k));
    out.emplace_back(p);
  }
  return out;
}

namespace {

uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

bool is_prime(int n) {
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return n >= 2;
}

} // namespace

WeylSequence::WeylSequence(int dim, uint64_t seed) {
  if (dim <= 0) throw ShapeError("WeylSequence: non-positive dimension");
  uint64_t s = seed;
  int p = 1;
  for (int i = 0; i < dim; ++i) {
    do { ++p; } while (!is_prime(p));
    double a = std::sqrt(static_cast<double>(p));
    alpha_.push_back(a - std::floor(a));
    // seeded starting point in [0,1)
    state_.push_back(static_cast<double>(splitmix64(s) >> 11) * (1.0 / 9007199254740992.0));
  }
}

std::vector<double> WeylSequence::next() {
  std::vector<double> out = state_;
  for (size_t i = 0; i < state_.size(); ++i) {
    state_[i] += alpha_[i];
    if (state_[i] >= 1.0) state_[i] -= 1.0;
  }
  return out;
}

} // namespace incompat
