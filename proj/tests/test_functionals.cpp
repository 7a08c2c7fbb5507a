#include "doctest.h"

#include <cmath>

#include "incompat/functionals.hpp"
#include "incompat/sampling.hpp"
#include "test_support.hpp"

using namespace incompat;
using testsup::mat;

namespace {

const HermitianMatrix kZ(pauli_z());

DensityMatrix plus_state() { return DensityMatrix::pure({1.0, 1.0}); }

// 0.5 |+><+| + 0.25 * identity: eigenvalues 3/4, 1/4 in the |+->-frame
DensityMatrix half_noisy_plus() {
  return DensityMatrix(0.5 * plus_state().mat() + 0.25 * ComplexMatrix::identity(2));
}

} // namespace

TEST_CASE("skew information anchors and null directions") {
  CHECK(wysi(DensityMatrix::maximally_mixed(2), kZ) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(wysi(plus_state(), kZ) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(wysi(half_noisy_plus(), kZ) ==
        doctest::Approx(1.0 - std::sqrt(3.0) / 2.0).epsilon(1e-12));

  // commuting pairs carry no skew information
  CHECK(std::abs(wysi(DensityMatrix(mat(2, {0.7, 0, 0, 0.3})), kZ)) <= 1e-12);

  // on pure states the skew information saturates the variance; the square
  // root smears O(eps) null-space eigenvalues up to O(sqrt(eps))
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 25; ++rep) {
    const int d = 2 + rep % 3;
    const DensityMatrix psi = random_pure(d, rng);
    const HermitianMatrix h = testsup::random_hermitian(d, rng);
    CHECK(wysi(psi, h) == doctest::Approx(variance(psi, h)).epsilon(1e-6));
  }

  CHECK_THROWS_AS(wysi(DensityMatrix::maximally_mixed(3), kZ), ShapeError);
}

TEST_CASE("measurable lower bound sits under the skew information") {
  CHECK(wysi_lower_bound(plus_state(), kZ) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(wysi_lower_bound(half_noisy_plus(), kZ) == doctest::Approx(0.125).epsilon(1e-12));

  std::mt19937_64 rng(32);
  for (int rep = 0; rep < 60; ++rep) {
    const int d = 2 + rep % 3;
    const DensityMatrix rho = random_density(d, rng);
    const HermitianMatrix h = testsup::random_hermitian(d, rng);
    const double lower = wysi_lower_bound(rho, h);
    const double mid = wysi(rho, h);
    const double upper = variance(rho, h);
    CHECK(lower <= mid + 1e-10);
    CHECK(mid <= upper + 1e-10);
    CHECK(lower >= -1e-12);
  }
}

TEST_CASE("variance behaves as a concave roof") {
  CHECK(variance(plus_state(), kZ) == doctest::Approx(1.0).epsilon(1e-12));

  std::mt19937_64 rng(33);
  for (int rep = 0; rep < 25; ++rep) {
    const DensityMatrix r1 = random_density(2, rng);
    const DensityMatrix r2 = random_density(2, rng);
    const double q = 0.3;
    const DensityMatrix mixv(q * r1.mat() + (1.0 - q) * r2.mat());
    // concavity of the roof, convexity of the functional
    CHECK(variance(mixv, kZ) >= q * variance(r1, kZ) + (1.0 - q) * variance(r2, kZ) - 1e-12);
    CHECK(wysi(mixv, kZ) <= q * wysi(r1, kZ) + (1.0 - q) * wysi(r2, kZ) + 1e-12);
  }
}

TEST_CASE("basis coherence equals the off-diagonal weight") {
  const ReferenceBasis comp2 = ReferenceBasis::computational(2);
  CHECK(l2_coherence(plus_state(), comp2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(summed_variance(plus_state(), comp2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(l2_coherence(DensityMatrix(mat(2, {0.7, 0, 0, 0.3})), comp2)) <= 1e-14);

  std::mt19937_64 rng(34);
  for (int rep = 0; rep < 60; ++rep) {
    const int d = 2 + rep % 3;
    const ReferenceBasis basis = ReferenceBasis::computational(d);
    const DensityMatrix rho = random_density(d, rng);

    // direct off-diagonal sum
    double offdiag = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (i != j) offdiag += std::norm(rho.mat()(i, j));
    const double n = l2_coherence(rho, basis);
    CHECK(n == doctest::Approx(offdiag).epsilon(1e-10));

    // coherence decomposes into twice the projector skew bounds
    double twice = 0.0;
    for (int i = 0; i < d; ++i)
      twice += 2.0 * wysi_lower_bound(rho, HermitianMatrix(basis.proj(i)));
    CHECK(std::abs(n - twice) <= 1e-10);
    CHECK(n <= summed_variance(rho, basis) + 1e-10);
  }
}

TEST_CASE("ergotropy follows the passive-state formula") {
  const DensityMatrix rho(mat(2, {0.7, 0, 0, 0.3}));
  CHECK(ergotropy(rho, kZ) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(ergotropy_pure_roof(rho, kZ) == doctest::Approx(1.4).epsilon(1e-12));

  // passive states and the maximally mixed state yield no work
  CHECK(std::abs(ergotropy(DensityMatrix(mat(2, {0.3, 0, 0, 0.7})), kZ)) <= 1e-12);
  CHECK(std::abs(ergotropy(DensityMatrix::maximally_mixed(2), kZ)) <= 1e-12);

  // the pure roof is affine, hence equal to its own mixture
  std::mt19937_64 rng(35);
  for (int rep = 0; rep < 15; ++rep) {
    const DensityMatrix r1 = random_density(3, rng);
    const DensityMatrix r2 = random_density(3, rng);
    const HermitianMatrix h = testsup::random_hermitian(3, rng);
    const double q = 0.4;
    const DensityMatrix mixv(q * r1.mat() + (1.0 - q) * r2.mat());
    CHECK(ergotropy_pure_roof(mixv, h) ==
          doctest::Approx(q * ergotropy_pure_roof(r1, h) + (1.0 - q) * ergotropy_pure_roof(r2, h))
              .epsilon(1e-10));
    CHECK(ergotropy(mixv, h) <= ergotropy_pure_roof(mixv, h) + 1e-10);
  }
}

TEST_CASE("reference bases are complete rank-one frames") {
  CHECK_NOTHROW(ReferenceBasis::computational(4));
  // not rank one
  CHECK_THROWS_AS(ReferenceBasis({ComplexMatrix::identity(2)}), ValidationError);
  // incomplete
  CHECK_THROWS_AS(ReferenceBasis({computational_projector(2, 0)}), ValidationError);
  // not idempotent
  CHECK_THROWS_AS(ReferenceBasis({mat(2, {0.5, 0, 0, 0.5}), mat(2, {0.5, 0, 0, 0.5})}),
                  ValidationError);
  CHECK_THROWS_AS(l2_coherence(DensityMatrix::maximally_mixed(3), ReferenceBasis::computational(2)),
                  ShapeError);
}

TEST_CASE("sampled decompositions never beat the closed-form roofs") {
  std::mt19937_64 rng(36);
  for (int rep = 0; rep < 8; ++rep) {
    const int d = 2 + rep % 2;
    const DensityMatrix rho = random_density(d, rng);
    const HermitianMatrix h = testsup::random_hermitian(d, rng);
    const ReferenceBasis basis = ReferenceBasis::computational(d);

    auto gw = [&](const DensityMatrix& r) { return wysi(r, h); };
    const double sampled_w = roof_sample_lower_bound(gw, rho, 24, 1000 + rep);
    CHECK(sampled_w <= variance(rho, h) + 1e-10);
    CHECK(sampled_w >= wysi(rho, h) - 1e-10); // averages of a convex g cannot drop below g

    auto gn = [&](const DensityMatrix& r) { return l2_coherence(r, basis); };
    const double sampled_n = roof_sample_lower_bound(gn, rho, 24, 2000 + rep);
    CHECK(sampled_n <= summed_variance(rho, basis) + 1e-10);
  }

  // pure input: every decomposition is the state itself
  const DensityMatrix psi = plus_state();
  auto g = [&](const DensityMatrix& r) { return wysi(r, kZ); };
  CHECK(roof_sample_lower_bound(g, psi, 4, 7) == doctest::Approx(wysi(psi, kZ)).epsilon(1e-9));
  CHECK_THROWS_AS(roof_sample_lower_bound(g, psi, 0, 7), ValidationError);
}

TEST_CASE("the functional registry wires contexts and defaults") {
  const std::vector<std::string> names = registered_functionals();
  REQUIRE(names.size() == 3);
  CHECK(names[0] == "wysi");
  CHECK(names[1] == "l2");
  CHECK(names[2] == "ergotropy");

  const WitnessFunctional wy = make_functional("wysi", 2); // defaults to sigma_z
  CHECK(wy.roof_exact);
  CHECK(wy.dim == 2);
  CHECK(wy.g(plus_state()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(wy.roof(plus_state()) == doctest::Approx(1.0).epsilon(1e-12));

  const WitnessFunctional el = make_functional("l2", 3); // computational basis
  CHECK(el.roof_exact);
  CHECK(std::abs(el.g(DensityMatrix::maximally_mixed(3))) <= 1e-14);

  // beyond qubits the observable has to be explicit
  CHECK_THROWS_AS(make_functional("wysi", 3), ValidationError);
  CHECK_THROWS_AS(make_functional("ergotropy", 3), ValidationError);
  FunctionalContext ctx;
  std::mt19937_64 rng(37);
  ctx.observable = testsup::random_hermitian(3, rng);
  CHECK_NOTHROW(make_functional("wysi", 3, ctx));
  CHECK_THROWS_AS(make_functional("wysi", 2, ctx), ShapeError); // dimension clash
  CHECK_THROWS_AS(make_functional("spooky", 2), ValidationError);

  ctx.observable.reset();
  ctx.basis = ReferenceBasis::computational(2);
  CHECK_THROWS_AS(make_functional("l2", 3, ctx), ShapeError);
}
