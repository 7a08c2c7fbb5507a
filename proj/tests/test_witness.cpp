#include "doctest.h"

#include <cmath>

#include "incompat/witness.hpp"
#include "incompat/sampling.hpp"
#include "test_support.hpp"

using namespace incompat;
using testsup::maxdiff;

namespace {

StateAssemblage max_entangled_pauli(double w) {
  return conditional_assemblage(pure_state_family(M_PI / 4.0), noisy_pauli_assemblage(w), 2, 2);
}

Wiring random_wiring(int settings, const std::vector<int>& outcomes, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(1, 3);
  const int new_settings = pick(rng);
  Wiring w;
  w.setting_map.resize(new_settings);
  w.outcome_map.resize(new_settings);
  for (int xp = 0; xp < new_settings; ++xp) {
    w.setting_map[xp] = testsup::random_distribution(settings, rng);
    const int n_out = pick(rng);
    w.outcome_map[xp].resize(settings);
    for (int x = 0; x < settings; ++x) {
      w.outcome_map[xp][x].resize(outcomes[x]);
      for (int a = 0; a < outcomes[x]; ++a)
        w.outcome_map[xp][x][a] = testsup::random_distribution(n_out, rng);
    }
  }
  return w;
}

} // namespace

TEST_CASE("per-setting values on the sharp pauli pair are 0 and 1") {
  const WitnessFunctional wy = make_functional("wysi", 2);
  const StateAssemblage s = max_entangled_pauli(0.0);

  // setting 0 measures Z: branches commute with sigma_z
  CHECK(std::abs(assemblage_value(wy.g, s, 0)) <= 1e-12);
  CHECK(std::abs(roof_value(wy, s, 0)) <= 1e-12);
  // setting 1 measures X: branches are the +-/- eigenstates
  CHECK(assemblage_value(wy.g, s, 1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(roof_value(wy, s, 1) == doctest::Approx(1.0).epsilon(1e-10));

  const WitnessReport r = violation(wy, s);
  CHECK(r.x_star == 1);
  CHECK(r.x_lower == 0);
  CHECK(r.violation == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(signed_gap(r) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.functional == "wysi");

  const WitnessFunctional el = make_functional("l2", 2);
  CHECK(violation(el, s).violation == doctest::Approx(0.5).epsilon(1e-10));

  CHECK_THROWS_AS(assemblage_value(wy.g, s, 5), ShapeError);
}

TEST_CASE("hidden-object assemblages clamp to exactly zero") {
  std::mt19937_64 rng(41);
  const WitnessFunctional el = make_functional("l2", 2);
  for (int rep = 0; rep < 40; ++rep) {
    const StateAssemblage s = testsup::random_ho_assemblage(2, 3, 3, rng);
    const WitnessReport r = violation(el, s);
    CHECK(signed_gap(r) <= 1e-10);
    CHECK(r.violation >= 0.0);
    CHECK(r.violation <= 1e-10);
  }
  // symmetric values: ties resolve to the first setting
  const StateAssemblage flat = max_entangled_pauli(1.0);
  const WitnessReport r = violation(el, flat);
  CHECK(r.x_star == 0);
  CHECK(r.x_lower == 0);
  CHECK(r.violation == 0.0);
}

TEST_CASE("certification refuses inexact roofs and mismatched dimensions") {
  WitnessFunctional fake = make_functional("wysi", 2);
  fake.roof_exact = false;
  CHECK_THROWS_AS(violation(fake, max_entangled_pauli(0.1)), SoundnessError);

  const WitnessFunctional big = make_functional("l2", 3);
  CHECK_THROWS_AS(violation(big, max_entangled_pauli(0.1)), ShapeError);
}

TEST_CASE("steering-equivalent observables transpose the embedded measurement") {
  std::mt19937_64 rng(42);

  // maximally entangled: B equals the elementwise transpose (complex entries
  // exercised through a rotated projective pair)
  std::vector<std::vector<Effect>> eff;
  eff.push_back(random_projective(2, rng));
  eff.push_back(random_projective(2, rng));
  const MeasurementAssemblage m{std::move(eff)};
  const StateAssemblage s = conditional_assemblage(pure_state_family(M_PI / 4.0), m, 2, 2);
  const MeasurementAssemblage b = seo(s);
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a)
      CHECK(maxdiff(b.at(x, a).mat(), transpose(m.at(x, a).mat())) <= 1e-9);

  // right inverse on full-rank marginals, both qubit and qutrit
  for (int d : {2, 3}) {
    const MeasurementAssemblage povm = testsup::random_measurement(d, 2, 3, rng);
    const DensityMatrix rho = testsup::full_rank_state(d, rng);
    const MeasurementAssemblage back = seo(embed_measurement(povm, rho));
    for (int x = 0; x < 2; ++x)
      for (int a = 0; a < 3; ++a)
        CHECK(maxdiff(back.at(x, a).mat(), povm.at(x, a).mat()) <= 1e-8);
  }

  // rank-deficient marginals cannot be steered back
  const StateAssemblage product = conditional_assemblage(
      DensityMatrix::pure({1.0, 0.0, 0.0, 0.0}), noisy_pauli_assemblage(0.2), 2, 2);
  CHECK_THROWS_AS(seo(product), RankError);
  CHECK_THROWS_AS(embed_measurement(noisy_pauli_assemblage(0.2), DensityMatrix::pure({1.0, 0.0})),
                  RankError);
  CHECK_THROWS_AS(
      embed_measurement(noisy_pauli_assemblage(0.2), DensityMatrix::maximally_mixed(3)),
      ShapeError);
}

TEST_CASE("embedding scales effects by the square-rooted marginal") {
  const MeasurementAssemblage m = noisy_pauli_assemblage(0.0);
  const StateAssemblage at_mixed = embed_measurement(m, DensityMatrix::maximally_mixed(2));
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a)
      CHECK(maxdiff(at_mixed.at(x, a).mat(), 0.5 * m.at(x, a).mat()) <= 1e-14);

  const StateAssemblage skewed =
      embed_measurement(m, DensityMatrix(testsup::mat(2, {0.7, 0, 0, 0.3})));
  CHECK(maxdiff(skewed.at(0, 0).mat(), testsup::mat(2, {0.7, 0, 0, 0})) <= 1e-12);
  CHECK(maxdiff(skewed.at(0, 1).mat(), testsup::mat(2, {0, 0, 0, 0.3})) <= 1e-12);
}

TEST_CASE("measurement monotone anchors on the noisy pauli family") {
  const WitnessFunctional el = make_functional("l2", 2);
  OptimizerConfig cfg;
  cfg.grid_resolution = 7;

  const IncompatibilityResult sharp = measurement_incompatibility(el, noisy_pauli_assemblage(0.0), cfg);
  CHECK(sharp.value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(sharp.best_state.dim() == 2);
  CHECK(sharp.report.violation == doctest::Approx(sharp.value).epsilon(1e-12));

  // beyond the joint-measurability threshold nothing is certified
  const IncompatibilityResult dull = measurement_incompatibility(el, noisy_pauli_assemblage(0.45), cfg);
  CHECK(dull.value <= 1e-12);

  std::mt19937_64 rng(43);
  const std::vector<Effect> parent = random_povm(2, 4, rng);
  const MeasurementAssemblage compat =
      compatible_measurement(parent, testsup::random_response(4, 2, 2, rng));
  CHECK(measurement_incompatibility(el, compat, cfg).value <= 1e-9);

  CHECK_THROWS_AS(measurement_incompatibility(make_functional("l2", 3), noisy_pauli_assemblage(0.0)),
                  ShapeError);
}

TEST_CASE("optimizer configuration is validated up front") {
  OptimizerConfig cfg;
  cfg.grid_resolution = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.num_candidates = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.full_rank_floor = 1e-10; // below the rank cutoff
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.nm_step = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("instrument monotone collapses for trivial ancillas and flags damping") {
  const WitnessFunctional el = make_functional("l2", 2);
  OptimizerConfig cfg;
  cfg.grid_resolution = 5;
  cfg.nm_max_iter = 120;

  // identity channel: one-dimensional ancilla, nothing to steer with
  const InstrumentWitnessResult none =
      instrument_incompatibility(el, amplitude_damping_kraus(0.0), {}, cfg);
  CHECK(none.value == 0.0);
  CHECK(none.best_measurement == -1);

  // half damping reaches the maximally entangled ceiling
  const InstrumentWitnessResult half =
      instrument_incompatibility(el, amplitude_damping_kraus(0.5), {}, cfg);
  CHECK(half.value == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(half.best_measurement >= 0);
  CHECK(half.best_input >= 0);

  CHECK_THROWS_AS(
      instrument_incompatibility(make_functional("l2", 3), amplitude_damping_kraus(0.5), {}, cfg),
      ShapeError);
}

TEST_CASE("wirings relabel classically and never help the witness") {
  std::mt19937_64 rng(44);
  const WitnessFunctional el = make_functional("l2", 2);

  const StateAssemblage base = max_entangled_pauli(0.1);
  const std::vector<int> outs = {2, 2};
  const Wiring id = Wiring::identity(2, outs);
  const StateAssemblage same = apply_wiring(base, id);
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a)
      CHECK(maxdiff(same.at(x, a).mat(), base.at(x, a).mat()) <= 1e-14);

  // merging every outcome into one erases all information
  Wiring merge;
  merge.setting_map = {{1.0, 0.0}};
  merge.outcome_map = {{{{1.0}, {1.0}}, {{1.0}, {1.0}}}};
  const StateAssemblage merged = apply_wiring(base, merge);
  CHECK(merged.settings() == 1);
  CHECK(merged.outcomes(0) == 1);
  CHECK(violation(el, merged).violation <= 1e-12);

  const double v_base = violation(el, base).violation;
  for (int rep = 0; rep < 30; ++rep) {
    const Wiring w = random_wiring(2, outs, rng);
    CHECK(violation(el, apply_wiring(base, w)).violation <= v_base + 1e-9);
  }

  // measurement-level wirings keep completeness
  const MeasurementAssemblage m = noisy_pauli_assemblage(0.3);
  const MeasurementAssemblage wired = apply_wiring(m, random_wiring(2, outs, rng));
  CHECK(wired.dim() == 2);

  Wiring broken = Wiring::identity(2, outs);
  broken.setting_map[0][0] = 0.7; // row no longer sums to one
  CHECK_THROWS_AS(apply_wiring(base, broken), ValidationError);
}

TEST_CASE("pure-state ceiling is largest at the maximally mixed marginal") {
  const WitnessFunctional wy = make_functional("wysi", 2);
  const WitnessFunctional el = make_functional("l2", 2);

  CHECK(pure_state_bound(wy, DensityMatrix::maximally_mixed(2)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pure_state_bound(el, DensityMatrix::maximally_mixed(2)) ==
        doctest::Approx(0.5).epsilon(1e-12));

  // majorization ordering: purer marginals certify less
  const double mid = pure_state_bound(wy, DensityMatrix(testsup::mat(2, {0.7, 0, 0, 0.3})));
  const double pure = pure_state_bound(wy, DensityMatrix::pure({1.0, 0.0}));
  CHECK(pure_state_bound(wy, DensityMatrix::maximally_mixed(2)) >= mid - 1e-12);
  CHECK(mid >= pure - 1e-12);
  CHECK(std::abs(pure) <= 1e-12);

  CHECK_THROWS_AS(pure_state_bound(wy, DensityMatrix::maximally_mixed(3)), ShapeError);
}
