#include "selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <vector>

#include "incompat/sampling.hpp"
#include "incompat/serialization.hpp"

namespace {

using namespace incompat;

void check(bool ok, const std::string& msg) {
  if (!ok) throw SoundnessError(msg);
}

void check_close(double got, double want, double tol, const std::string& what) {
  if (!(std::abs(got - want) <= tol))
    throw SoundnessError(what + ": got " + format_sig12(got) + ", want " + format_sig12(want));
}

HermitianMatrix random_hermitian(int d, std::mt19937_64& rng) {
  const ComplexMatrix g = ginibre(d, d, rng);
  return HermitianMatrix(0.5 * (g + adjoint(g)));
}

// random density matrix pushed away from the boundary so inverses stay tame
DensityMatrix full_rank_state(int d, std::mt19937_64& rng) {
  const DensityMatrix rho = random_density(d, rng);
  return DensityMatrix(0.95 * rho.mat() + (0.05 / d) * ComplexMatrix::identity(d));
}

ResponseTable random_response(int nlam, const std::vector<int>& outcomes, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  ResponseTable r(nlam);
  for (auto& per_l : r) {
    per_l.resize(outcomes.size());
    for (size_t x = 0; x < outcomes.size(); ++x) {
      per_l[x].resize(outcomes[x]);
      double total = 0.0;
      for (auto& p : per_l[x]) total += (p = u(rng));
      for (auto& p : per_l[x]) p /= total;
    }
  }
  return r;
}

// --------------------------------------------------------------- suites ---

void suite_eigensolver() {
  std::mt19937_64 rng(7);
  for (int d : {2, 3, 4, 6, 9}) {
    const HermitianMatrix h = random_hermitian(d, rng);
    const EigenSystem es = hermitian_eig(h);
    for (size_t k = 1; k < es.values.size(); ++k)
      check(es.values[k - 1] <= es.values[k], "eigenvalues not ascending");
    ComplexMatrix rec(d, d);
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          rec(i, j) += es.vectors(i, k) * es.values[k] * std::conj(es.vectors(j, k));
    check(max_abs(rec - h.mat()) <= 1e-10, "eigendecomposition does not rebuild the input");
    check(max_abs(adjoint(es.vectors) * es.vectors - ComplexMatrix::identity(d)) <= 1e-10,
          "eigenvectors not orthonormal");
  }
}

void suite_functional_anchors() {
  const HermitianMatrix z(pauli_z());
  const double s = 1.0 / std::sqrt(2.0);
  const DensityMatrix plus = DensityMatrix::pure({s, s});
  check_close(wysi(DensityMatrix::maximally_mixed(2), z), 0.0, 1e-12, "skew info at 1/2");
  check_close(wysi(plus, z), 1.0, 1e-12, "skew info on |+>");
  check_close(variance(plus, z), 1.0, 1e-12, "variance on |+>");

  const DensityMatrix mixed(0.5 * plus.mat() + 0.25 * ComplexMatrix::identity(2));
  check_close(wysi(mixed, z), 1.0 - std::sqrt(3.0) / 2.0, 1e-12, "skew info, half-noisy |+>");
  check_close(wysi_lower_bound(plus, z), 0.5, 1e-12, "commutator bound on |+>");
  check_close(wysi_lower_bound(mixed, z), 0.125, 1e-12, "commutator bound, half-noisy |+>");

  const ReferenceBasis comp = ReferenceBasis::computational(2);
  check_close(l2_coherence(plus, comp), 0.5, 1e-12, "l2 coherence on |+>");
  check_close(summed_variance(plus, comp), 0.5, 1e-12, "summed variance on |+>");

  std::mt19937_64 rng(3);
  const DensityMatrix rho = random_density(3, rng);
  const ReferenceBasis c3 = ReferenceBasis::computational(3);
  double twice = 0.0;
  for (int i = 0; i < 3; ++i) twice += 2.0 * wysi_lower_bound(rho, HermitianMatrix(c3.proj(i)));
  check_close(l2_coherence(rho, c3), twice, 1e-10, "coherence != summed commutator bounds");

  ComplexMatrix diag(2, 2);
  diag(0, 0) = 0.7;
  diag(1, 1) = 0.3;
  check_close(ergotropy(DensityMatrix(diag), z), 0.8, 1e-12, "ergotropy of diag(0.7,0.3)");
  check_close(ergotropy_pure_roof(DensityMatrix(diag), z), 1.4, 1e-12, "ergotropy roof");
  check_close(ergotropy(DensityMatrix::maximally_mixed(2), z), 0.0, 1e-12,
              "maximally mixed states are passive");

  const double sampled = roof_sample_lower_bound(
      [&](const DensityMatrix& r2) { return wysi(r2, z); }, mixed, 64, 5);
  check(sampled <= variance(mixed, z) + 1e-9, "sampled roof exceeds the exact roof");
}

void suite_reference_curves() {
  verify_reference_curves();
  check_close(find_threshold(analytic_mn_signed, 0.0, 0.5, 1e-12), 1.0 - 1.0 / std::sqrt(2.0),
              1e-10, "coherence-pair threshold");
  check_close(find_threshold(analytic_mi_signed, 0.0, 0.5, 1e-12),
              1.0 - std::sqrt((std::sqrt(5.0) - 1.0) / 2.0), 1e-10, "skew-pair threshold");
  check_close(analytic_mn(0.0), 0.5, 0.0, "mn at w=0");
  check_close(analytic_mi(0.0), 1.0, 0.0, "mi at w=0");
  check_close(analytic_mn(0.5), 0.0, 0.0, "mn clamps past threshold");
  check_close(analytic_mi(0.3), 0.0, 0.0, "mi clamps past threshold");
}

void suite_steering_cells() {
  const WitnessFunctional l2 = make_functional("l2", 2);
  const WitnessFunctional wy = make_functional("wysi", 2);
  const double q = M_PI / 4.0;
  check_close(steering_cell_signed(q, 0.0, l2), 0.5, 1e-12, "cell (pi/4, 0), coherence");
  check_close(steering_cell_signed(q, 0.0, wy), 1.0, 1e-12, "cell (pi/4, 0), skew info");
  check(std::max(steering_cell_signed(0.0, 0.3, l2), 0.0) == 0.0,
        "product-state cell must vanish exactly");
  double prev = 1e300;
  for (int k = 0; k <= 20; ++k) {
    const double v = std::max(steering_cell_signed(q, static_cast<double>(k) / 20.0, l2), 0.0);
    check(v <= prev + 1e-12, "violation grew as noise increased");
    prev = v;
  }
}

void suite_instrument_cells() {
  const WitnessFunctional l2 = make_functional("l2", 2);
  const WitnessFunctional wy = make_functional("wysi", 2);
  check_close(instrument_cell_signed(0.5, 0.0, l2), 0.5, 1e-12, "cell (0.5, 0), coherence");
  check_close(instrument_cell_signed(0.5, 0.0, wy), 1.0, 1e-12, "cell (0.5, 0), skew info");
  for (double w : {0.0, 0.3, 0.7})
    for (double g : {0.0, 1.0})
      check(std::max(instrument_cell_signed(g, w, l2), 0.0) == 0.0,
            "boundary damping cell must vanish exactly");
  for (double g : {0.2, 0.35})
    for (double w : {0.0, 0.15})
      check_close(instrument_cell_signed(g, w, l2), instrument_cell_signed(1.0 - g, w, l2), 1e-9,
                  "damping cells not symmetric under gamma <-> 1-gamma");
}

void suite_seo_maps() {
  std::mt19937_64 rng(11);
  for (int d : {2, 3}) {
    const MeasurementAssemblage m({random_povm(d, 3, rng), random_povm(d, 2, rng)});
    const DensityMatrix rho = full_rank_state(d, rng);
    const MeasurementAssemblage back = seo(embed_measurement(m, rho));
    for (int x = 0; x < m.settings(); ++x)
      for (int a = 0; a < m.outcomes(x); ++a)
        check(max_abs(back.at(x, a).mat() - m.at(x, a).mat()) <= 1e-8,
              "seo does not invert the embedding");
  }
  const ComplexMatrix yp = 0.5 * (ComplexMatrix::identity(2) + pauli_y());
  const ComplexMatrix ym = 0.5 * (ComplexMatrix::identity(2) - pauli_y());
  const MeasurementAssemblage m(
      {{Effect(yp), Effect(ym)},
       {Effect(computational_projector(2, 0)), Effect(computational_projector(2, 1))}});
  const StateAssemblage sig = conditional_assemblage(pure_state_family(M_PI / 4.0), m, 2, 2);
  const MeasurementAssemblage b = seo(sig);
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a)
      check(max_abs(b.at(x, a).mat() - transpose(m.at(x, a).mat())) <= 1e-9,
            "maximally entangled seo is not the transpose");
}

void suite_measurement_monotone() {
  const WitnessFunctional l2 = make_functional("l2", 2);
  const OptimizerConfig cfg;
  check_close(measurement_incompatibility(l2, noisy_pauli_assemblage(0.0), cfg).value, 0.5,
              1e-9, "noise-free Pauli pair");
  const double wstar = 1.0 - 1.0 / std::sqrt(2.0);
  check(measurement_incompatibility(l2, noisy_pauli_assemblage(wstar), cfg).value <= 1e-9,
        "threshold-noise pair should not violate");
  std::mt19937_64 rng(17);
  const std::vector<Effect> parent = random_povm(2, 4, rng);
  const MeasurementAssemblage compat =
      compatible_measurement(parent, random_response(4, {2, 2}, rng));
  check(measurement_incompatibility(l2, compat, cfg).value <= 1e-9,
        "jointly measurable pair flagged incompatible");
}

void suite_ho_zero(int n) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> dim_pick(2, 3);
  std::uniform_int_distribution<int> nl_pick(2, 4);
  std::uniform_int_distribution<int> count_pick(2, 3);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int t = 0; t < n; ++t) {
    const int d = dim_pick(rng);
    const int nlam = nl_pick(rng);
    std::vector<int> outs(count_pick(rng));
    for (auto& o : outs) o = count_pick(rng);

    std::vector<DensityMatrix> states;
    std::vector<double> weights;
    double total = 0.0;
    for (int l = 0; l < nlam; ++l) {
      states.push_back(random_density(d, rng));
      weights.push_back(u(rng));
      total += weights.back();
    }
    for (auto& w : weights) w /= total;

    const StateAssemblage sig =
        ho_state_assemblage(states, weights, random_response(nlam, outs, rng));
    FunctionalContext ctx;
    if (d != 2) ctx.observable = random_hermitian(d, rng);
    for (const auto& name : registered_functionals()) {
      const double v = violation(make_functional(name, d, ctx), sig).violation;
      check(v <= 1e-9, "hidden-object assemblage flagged by " + name + " (" +
                           format_sig12(v) + ")");
    }
  }
}

void suite_serialization() {
  std::mt19937_64 rng(19);
  const MeasurementAssemblage m({random_povm(2, 2, rng), random_povm(2, 3, rng)});
  const StateAssemblage sig = embed_measurement(m, full_rank_state(2, rng));
  const AssemblageDocument sd = parse_assemblage(assemblage_to_json(sig));
  check(sd.state.has_value(), "state document lost its kind");
  for (int x = 0; x < sig.settings(); ++x)
    for (int a = 0; a < sig.outcomes(x); ++a)
      check(max_abs(sd.state->at(x, a).mat() - sig.at(x, a).mat()) <= 1e-12,
            "state round trip drift");

  FunctionalContext ctx;
  ctx.observable = HermitianMatrix(pauli_z());
  const AssemblageDocument md = parse_assemblage(assemblage_to_json(m, ctx));
  check(md.measurement.has_value() && md.context.observable.has_value(),
        "measurement document lost payload or context");
  for (int x = 0; x < m.settings(); ++x)
    for (int a = 0; a < m.outcomes(x); ++a)
      check(max_abs(md.measurement->at(x, a).mat() - m.at(x, a).mat()) <= 1e-12,
            "measurement round trip drift");

  const MinimalDilation dil = minimal_dilation(amplitude_damping_kraus(0.35));
  const MeasurementAssemblage anc = noisy_pauli_assemblage(0.1);
  const InstrumentAssemblage inst = instrument_from_dilation(dil, anc);
  const AssemblageDocument id = parse_assemblage(assemblage_to_json(inst));
  check(id.instrument.has_value(), "instrument document lost its kind");
  for (int x = 0; x < inst.settings(); ++x)
    for (int a = 0; a < inst.outcomes(x); ++a)
      check(max_abs(id.instrument->choi(x, a) - inst.choi(x, a)) <= 1e-12,
            "instrument round trip drift");

  // the recovered ancilla measurement must reproduce what was dilated
  const MeasurementAssemblage rec = ancilla_measurement_from_instrument(*id.instrument);
  for (int x = 0; x < anc.settings(); ++x)
    for (int a = 0; a < anc.outcomes(x); ++a)
      check(max_abs(rec.at(x, a).mat() - anc.at(x, a).mat()) <= 1e-8,
            "ancilla measurement recovery drift");
}

void suite_instrument_monotone() {
  const WitnessFunctional l2 = make_functional("l2", 2);
  OptimizerConfig cfg;
  cfg.grid_resolution = 5; // the refinement stage recovers full precision
  const InstrumentWitnessResult r =
      instrument_incompatibility(l2, amplitude_damping_kraus(0.5), {}, cfg);
  check_close(r.value, 0.5, 1e-7, "half-damping channel value");
  const InstrumentWitnessResult z =
      instrument_incompatibility(l2, amplitude_damping_kraus(0.0), {}, cfg);
  check(z.value == 0.0, "undamped channel must be exactly trivial");
}

void suite_wiring() {
  std::mt19937_64 rng(23);
  const WitnessFunctional l2 = make_functional("l2", 2);
  const StateAssemblage sig =
      conditional_assemblage(pure_state_family(M_PI / 4.0), noisy_pauli_assemblage(0.1), 2, 2);
  const double base = violation(l2, sig).violation;

  const StateAssemblage same = apply_wiring(sig, Wiring::identity(2, {2, 2}));
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a)
      check(max_abs(same.at(x, a).mat() - sig.at(x, a).mat()) <= 1e-12,
            "identity wiring changed the assemblage");

  Wiring merge;
  merge.setting_map = {{1.0, 0.0}};
  merge.outcome_map = {{{{1.0}, {1.0}}, {{1.0}, {1.0}}}};
  check(violation(l2, apply_wiring(sig, merge)).violation <= 1e-12,
        "outcome-merged assemblage still violates");

  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int t = 0; t < 25; ++t) {
    Wiring w;
    w.setting_map.resize(2);
    w.outcome_map.resize(2);
    for (int xp = 0; xp < 2; ++xp) {
      double tot = 0.0;
      w.setting_map[xp].resize(2);
      for (auto& p : w.setting_map[xp]) tot += (p = u(rng));
      for (auto& p : w.setting_map[xp]) p /= tot;
      w.outcome_map[xp].resize(2);
      for (int x = 0; x < 2; ++x) {
        w.outcome_map[xp][x].resize(2);
        for (int a = 0; a < 2; ++a) {
          double s = 0.0;
          w.outcome_map[xp][x][a].resize(2);
          for (auto& p : w.outcome_map[xp][x][a]) s += (p = u(rng));
          for (auto& p : w.outcome_map[xp][x][a]) p /= s;
        }
      }
    }
    check(violation(l2, apply_wiring(sig, w)).violation <= base + 1e-9,
          "classical wiring increased the violation");
  }
}

void suite_convexity() {
  std::mt19937_64 rng(29);
  const WitnessFunctional l2 = make_functional("l2", 2);
  for (int t = 0; t < 15; ++t) {
    const DensityMatrix rho = full_rank_state(2, rng);
    const MeasurementAssemblage m1({random_povm(2, 2, rng), random_povm(2, 2, rng)});
    const MeasurementAssemblage m2({random_povm(2, 2, rng), random_povm(2, 2, rng)});
    const StateAssemblage s1 = embed_measurement(m1, rho);
    const StateAssemblage s2 = embed_measurement(m2, rho);
    const double v1 = violation(l2, s1).violation;
    const double v2 = violation(l2, s2).violation;
    for (double q : {0.25, 0.5, 0.8}) {
      std::vector<std::vector<SubnormalizedState>> mix;
      for (int x = 0; x < s1.settings(); ++x) {
        std::vector<SubnormalizedState> row;
        for (int a = 0; a < s1.outcomes(x); ++a)
          row.emplace_back(q * s1.at(x, a).mat() + (1.0 - q) * s2.at(x, a).mat());
        mix.push_back(std::move(row));
      }
      const double v = violation(l2, StateAssemblage(std::move(mix))).violation;
      check(v <= q * v1 + (1.0 - q) * v2 + 1e-9, "violation is not convex in the assemblage");
    }
  }
}

void suite_worker_determinism() {
  const std::vector<WitnessFunctional> fs = {make_functional("wysi", 2),
                                             make_functional("l2", 2)};
  const ScanAxis th{"theta", 0.0, M_PI / 2.0, 6};
  const ScanAxis w{"w", 0.0, 1.0, 7};
  const char* saved = std::getenv("INCOMPAT_THREADS");
  const std::string keep = saved ? saved : "";

  setenv("INCOMPAT_THREADS", "1", 1);
  const std::string csv_one = scan_to_csv(scan_steering(fs, th, w));
  const double opt_one = measurement_incompatibility(fs[1], noisy_pauli_assemblage(0.05)).value;
  setenv("INCOMPAT_THREADS", "4", 1);
  const std::string csv_four = scan_to_csv(scan_steering(fs, th, w));
  const double opt_four = measurement_incompatibility(fs[1], noisy_pauli_assemblage(0.05)).value;
  if (saved)
    setenv("INCOMPAT_THREADS", keep.c_str(), 1);
  else
    unsetenv("INCOMPAT_THREADS");

  check(csv_one == csv_four, "scan bytes depend on the worker count");
  check(opt_one == opt_four, "optimizer value depends on the worker count");
}

void suite_fixtures(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  check(!files.empty(), "no .json fixtures found in " + dir);
  for (const auto& p : files) {
    try {
      const AssemblageDocument doc = load_assemblage(p.string());
      (void)doc;
    } catch (const Error& e) {
      throw SoundnessError(p.filename().string() + ": " + e.what());
    }
  }
}

struct Suite {
  std::string name;
  std::function<void()> run;
};

} // namespace

int run_selftest(bool full, const std::string& fixtures_dir) {
  std::vector<Suite> suites = {
      {"eigensolver-roundtrip", suite_eigensolver},
      {"functional-anchors", suite_functional_anchors},
      {"reference-curves", suite_reference_curves},
      {"steering-cells", suite_steering_cells},
      {"instrument-cells", suite_instrument_cells},
      {"seo-maps", suite_seo_maps},
      {"measurement-monotone", suite_measurement_monotone},
      {"hidden-object-zero", [full] { suite_ho_zero(full ? 500 : 60); }},
      {"serialization-roundtrip", suite_serialization},
  };
  if (full) {
    suites.push_back({"instrument-monotone", suite_instrument_monotone});
    suites.push_back({"wiring-monotonicity", suite_wiring});
    suites.push_back({"witness-convexity", suite_convexity});
    suites.push_back({"worker-determinism", suite_worker_determinism});
  }
  if (!fixtures_dir.empty())
    suites.push_back({"fixture-files", [fixtures_dir] { suite_fixtures(fixtures_dir); }});

  int passed = 0;
  for (const auto& s : suites) {
    try {
      s.run();
      std::printf("[PASS] %s\n", s.name.c_str());
      ++passed;
    } catch (const std::exception& e) {
      std::printf("[FAIL] %s: %s\n", s.name.c_str(), e.what());
    }
  }
  std::printf("%d of %zu suites passed\n", passed, suites.size());
  return passed == static_cast<int>(suites.size()) ? 0 : 1;
}
