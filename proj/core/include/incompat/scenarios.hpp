#ifndef INCOMPAT_SCENARIOS_HPP
#define INCOMPAT_SCENARIOS_HPP

// Named experiments with closed-form anchors: the noisy-Pauli steering family
// over partially entangled pure states, the amplitude-damping instrument
// family, rectangular parameter scans over both, and threshold location on
// signed violation curves.  The closed forms double as regression anchors for
// the witness engine.

#include <optional>

#include "incompat/witness.hpp"

namespace incompat {

// one axis of a rectangular scan; value(0) and value(resolution-1) return the
// endpoints exactly so boundary rows hit w=0, gamma=1, ... bit-for-bit
struct ScanAxis {
  std::string name; // "theta" | "w" | "gamma" get domain checks
  double lo = 0.0;
  double hi = 0.0;
  int resolution = 2;

  double value(int i) const;
  void validate() const;
};

struct ScanTable {
  ScanAxis axis1; // varies slowest (row block)
  ScanAxis axis2;
  std::vector<std::string> functional_names;
  // values[i * axis2.resolution + j][k] = clamped violation of functional k
  std::vector<std::vector<double>> values;
  int rows() const { return axis1.resolution * axis2.resolution; }
};

// Signed (pre-clamp) reference curves at the maximally entangled point,
// noisy-Pauli settings; roots mark the incompatibility thresholds.
double analytic_mn_signed(double w); // l2-coherence pair: w^2 - 2w + 1/2
double analytic_mi_signed(double w); // skew-information pair: (1-w)^2 - sqrt(w(2-w))
double analytic_mn(double w);        // clamped at zero
double analytic_mi(double w);        // clamped; engine-checked on first use

// Signed witness gap of a single scan cell. Steering: |phi(theta)> measured
// with the noisy Pauli pair at w. Instrument: amplitude-damping isometry fed
// `input` (default |1><1|), ancilla measured with the noisy Pauli pair at w.
double steering_cell_signed(double theta, double w, const WitnessFunctional& f);
double instrument_cell_signed(double gamma, double w, const WitnessFunctional& f,
                              const std::optional<DensityMatrix>& input = std::nullopt);

// Cross-check of the closed forms against the full pipeline on a 20-point
// w-grid at 1e-8; runs at most once per process, throws SoundnessError on
// disagreement.
void verify_reference_curves();

// Rectangular scans; cells evaluate independently (parallel, index-ordered
// assembly) and store max(signed gap, 0) per functional.
ScanTable scan_steering(const std::vector<WitnessFunctional>& fs, const ScanAxis& theta,
                        const ScanAxis& w);
ScanTable scan_instrument(const std::vector<WitnessFunctional>& fs, const ScanAxis& gamma,
                          const ScanAxis& w,
                          const std::optional<DensityMatrix>& input = std::nullopt);

// Bisection for the zero crossing of a signed curve on [lo, hi]; requires
// curve(lo) > 0 > curve(hi) (BracketError otherwise), returns the root to
// within tol.
double find_threshold(const std::function<double(double)>& curve, double lo, double hi,
                      double tol);

} // namespace incompat

#endif
