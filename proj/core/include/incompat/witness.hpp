#ifndef INCOMPAT_WITNESS_HPP
#define INCOMPAT_WITNESS_HPP

// The certification engine.  A violation report compares the per-setting
// assemblage value of a convex functional against the per-setting value of
// its exact concave roof; any positive gap certifies that no hidden-object
// model reproduces the assemblage.  On top of that sit the steering-
// equivalent-observables map, the embed map (its right inverse on full-rank
// marginals), optimization-based measurement/instrument monotones, and
// classical wirings for the monotonicity story.

#include "incompat/functionals.hpp"

namespace incompat {

struct WitnessReport {
  std::vector<double> g_as; // per-setting assemblage value of g
  std::vector<double> F_as; // per-setting assemblage value of the roof
  int x_star = 0;           // argmax of g_as
  int x_lower = 0;          // argmin of F_as
  double violation = 0.0;   // max(max_x g_as - min_x F_as, 0)
  std::string functional;
  double p_floor = tol::weight_floor; // outcome-weight cutoff used
};

// max g_as - min F_as before the clamp; what the threshold finder bisects
double signed_gap(const WitnessReport& r);

// sum_a p(a|x) g(sigma_{a|x}/p(a|x)); outcomes below tol::weight_floor are skipped
double assemblage_value(const std::function<double(const DensityMatrix&)>& g,
                        const StateAssemblage& s, int x);

// same average with the roof part of the pair
double roof_value(const WitnessFunctional& f, const StateAssemblage& s, int x);

// Full report.  Refuses (SoundnessError) functionals whose roof is not exact:
// averaging a lower bound on the roof could fake a violation.
WitnessReport violation(const WitnessFunctional& f, const StateAssemblage& s);

// steering-equivalent observables: B_{a|x} = rho^{-1/2} sigma_{a|x} rho^{-1/2}
// with rho the shared marginal; throws RankError on rank-deficient marginals.
// Output completeness is checked at tol::seo_completeness.
MeasurementAssemblage seo(const StateAssemblage& s, double rank_tol = tol::rank_default);

// sigma_{a|x} = sqrt(rho_b) M_{a|x} sqrt(rho_b); right inverse of seo when
// rho_b has full rank
StateAssemblage embed_measurement(const MeasurementAssemblage& m, const DensityMatrix& rho_b);

struct OptimizerConfig {
  int grid_resolution = 9;    // per Bloch axis (qubit stage 1); odd keeps the origin on the grid
  int num_candidates = 200;   // stage-1 candidates for dimensions > 2
  double full_rank_floor = tol::full_rank_floor; // distance kept from the state-space boundary
  int nm_max_iter = 250;      // Nelder-Mead refinement budget
  double nm_tol = 1e-11;      // Nelder-Mead spread tolerance
  double nm_step = 0.12;      // initial simplex step
  uint64_t seed = 20260814;   // seeds the low-discrepancy candidate sequence
  void validate() const;
};

struct IncompatibilityResult {
  double value = 0.0;       // sup of the embedded violation over full-rank states
  DensityMatrix best_state; // argmax marginal
  WitnessReport report;     // report at the argmax
};

// Eq.-(8)-style monotone: sup over full-rank rho_b of the violation of
// sqrt(rho_b) M sqrt(rho_b).  Deterministic two-stage search (grid +
// Nelder-Mead); the result is a certified lower bound on the supremum.
IncompatibilityResult measurement_incompatibility(const WitnessFunctional& f,
                                                  const MeasurementAssemblage& m,
                                                  const OptimizerConfig& cfg = {});

struct InstrumentSearchSpace {
  // candidates for the ancilla measurement assemblage; entries whose
  // dimension does not match the dilation ancilla are skipped
  std::vector<MeasurementAssemblage> ancilla_measurements;
  // input states on the channel input; empty -> built-in pure grid
  std::vector<DensityMatrix> input_states;
};

struct InstrumentWitnessResult {
  double value = 0.0;
  int best_measurement = -1; // index into the searched family
  int best_input = -1;       // index into the searched input states
  bool via_seo = false;      // true when the inner optimizer beat the direct value
};

// Channel-level monotone: dilate minimally, steer the output by measuring the
// ancilla, and take the best certified violation over the searched inputs and
// ancilla measurements (direct evaluation and, on full-rank marginals, the
// measurement monotone of the steering-equivalent observables).
InstrumentWitnessResult instrument_incompatibility(const WitnessFunctional& f,
                                                   const std::vector<ComplexMatrix>& channel_kraus,
                                                   const InstrumentSearchSpace& space = {},
                                                   const OptimizerConfig& cfg = {});

// classical pre/post-processing: p(x|x') then p(a'|a,x,x')
struct Wiring {
  std::vector<std::vector<double>> setting_map; // [x'][x] = p(x|x')
  std::vector<std::vector<std::vector<std::vector<double>>>>
      outcome_map; // [x'][x][a][a'] = p(a'|a,x,x')
  static Wiring identity(int settings, const std::vector<int>& outcomes);
  void validate(int settings, const std::vector<int>& outcomes) const;
};

StateAssemblage apply_wiring(const StateAssemblage& s, const Wiring& w);
MeasurementAssemblage apply_wiring(const MeasurementAssemblage& m, const Wiring& w);

// [roof - g](rho_b): ceiling for the violation reachable from a pure
// bipartite state with marginal rho_b (rank-one measurements saturate it)
double pure_state_bound(const WitnessFunctional& f, const DensityMatrix& rho_b);

} // namespace incompat

#endif
