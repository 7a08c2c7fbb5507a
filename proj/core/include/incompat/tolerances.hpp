#ifndef INCOMPAT_TOLERANCES_HPP
#define INCOMPAT_TOLERANCES_HPP

// Every numeric tolerance used by validation and certification lives here, so
// the soundness story stays auditable in one place.  Loosening any of these
// weakens what a reported violation certifies.

namespace incompat::tol {

inline constexpr double hermiticity = 1e-10;      // max |A - A^dag| entry
inline constexpr double psd_clamp = 1e-10;        // eigenvalues in [-psd_clamp, 0) clamp to 0
inline constexpr double rank_default = 1e-9;      // inverse routes reject eigenvalues <= this
inline constexpr double trace_one = 1e-10;        // |Tr rho - 1| for normalized states
inline constexpr double effect_bound = 1e-10;     // slack on 0 <= M <= 1 eigenvalue checks
inline constexpr double completeness = 1e-9;      // |sum_a M_{a|x} - 1| and assemblage weights
inline constexpr double no_signaling = 1e-9;      // per-setting reduced states must agree
inline constexpr double seo_completeness = 1e-8;  // steering-equivalent observables POVM check
inline constexpr double isometry = 1e-9;          // |V^dag V - 1|
inline constexpr double weight_floor = 1e-12;     // outcomes below this probability are skipped
inline constexpr double full_rank_floor = 1e-6;   // optimizer keeps states this far from the boundary

} // namespace incompat::tol

#endif
