#include "incompat/scenarios.hpp"

#include <cmath>
#include <mutex>

#include "incompat/parallel.hpp"

namespace incompat {

// ---------------------------------------------------------------- axes ----

double ScanAxis::value(int i) const {
  if (i < 0 || i >= resolution) throw ShapeError("ScanAxis '" + name + "': index out of range");
  if (i == 0) return lo;
  if (i == resolution - 1) return hi;
  return lo + (hi - lo) * (static_cast<double>(i) / (resolution - 1));
}

void ScanAxis::validate() const {
  if (resolution < 2)
    throw ValidationError("ScanAxis '" + name + "': resolution must be at least 2");
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
    throw ValidationError("ScanAxis '" + name + "': bad range");
  double dom_hi = -1.0;
  if (name == "theta") dom_hi = M_PI / 2.0;
  if (name == "w" || name == "gamma") dom_hi = 1.0;
  if (dom_hi > 0.0 && (lo < -1e-12 || hi > dom_hi + 1e-12))
    throw ValidationError("ScanAxis '" + name + "': range leaves the physical domain");
}

// ---------------------------------------------------------- closed forms --

double analytic_mn_signed(double w) { return w * w - 2.0 * w + 0.5; }

double analytic_mi_signed(double w) {
  return (1.0 - w) * (1.0 - w) - std::sqrt(w * (2.0 - w));
}

double analytic_mn(double w) { return std::max(analytic_mn_signed(w), 0.0); }

double analytic_mi(double w) {
  // implementer-derived curve: never serve it unchecked
  verify_reference_curves();
  return std::max(analytic_mi_signed(w), 0.0);
}

// ----------------------------------------------------------- scan cells ---

double steering_cell_signed(double theta, double w, const WitnessFunctional& f) {
  const DensityMatrix psi = pure_state_family(theta);
  const MeasurementAssemblage m = noisy_pauli_assemblage(w);
  const StateAssemblage sigma = conditional_assemblage(psi, m, 2, 2);
  return signed_gap(violation(f, sigma));
}

double instrument_cell_signed(double gamma, double w, const WitnessFunctional& f,
                              const std::optional<DensityMatrix>& input) {
  const std::vector<ComplexMatrix> kraus = amplitude_damping_kraus(gamma);
  // two-block presentation isometry V = sum_mu |mu> (x) K_mu; keeping both
  // blocks even where one vanishes makes the cell continuous in gamma
  ComplexMatrix v(4, 2);
  for (int mu = 0; mu < 2; ++mu)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) v(mu * 2 + i, j) = kraus[mu](i, j);
  const Isometry iso(v, 2, 2);
  const DensityMatrix rho_c = input ? *input : DensityMatrix::pure({0.0, 1.0});
  const ComplexMatrix dilated = iso.mat() * rho_c.mat() * adjoint(iso.mat());
  const StateAssemblage sigma =
      conditional_assemblage(DensityMatrix(dilated), noisy_pauli_assemblage(w), 2, 2);
  return signed_gap(violation(f, sigma));
}

// ------------------------------------------------------------ self-check --

namespace {

std::once_flag curves_once;

void check_curves_against_engine() {
  const WitnessFunctional l2 = make_functional("l2", 2);
  const WitnessFunctional wy = make_functional("wysi", 2);
  const double theta = M_PI / 4.0;
  for (int k = 0; k < 20; ++k) {
    const double w = static_cast<double>(k) / 19.0;
    const double dn = steering_cell_signed(theta, w, l2) - analytic_mn_signed(w);
    const double di = steering_cell_signed(theta, w, wy) - analytic_mi_signed(w);
    if (std::abs(dn) > 1e-8 || std::abs(di) > 1e-8)
      throw SoundnessError("reference curves disagree with the witness engine at w=" +
                           std::to_string(w));
  }
}

} // namespace

void verify_reference_curves() { std::call_once(curves_once, check_curves_against_engine); }

// ---------------------------------------------------------------- scans ---

namespace {

ScanTable run_scan(const std::vector<WitnessFunctional>& fs, const ScanAxis& a1,
                   const ScanAxis& a2,
                   const std::function<double(double, double, const WitnessFunctional&)>& cell) {
  if (fs.empty()) throw ValidationError("scan: at least one functional required");
  a1.validate();
  a2.validate();
  ScanTable t;
  t.axis1 = a1;
  t.axis2 = a2;
  for (const auto& f : fs) t.functional_names.push_back(f.name);
  t.values.assign(static_cast<size_t>(t.rows()), {});
  parallel_for(t.rows(), [&](int idx) {
    const int i = idx / a2.resolution;
    const int j = idx % a2.resolution;
    std::vector<double> row;
    row.reserve(fs.size());
    for (const auto& f : fs) row.push_back(std::max(cell(a1.value(i), a2.value(j), f), 0.0));
    t.values[static_cast<size_t>(idx)] = std::move(row);
  });
  return t;
}

} // namespace

ScanTable scan_steering(const std::vector<WitnessFunctional>& fs, const ScanAxis& theta,
                        const ScanAxis& w) {
  return run_scan(fs, theta, w, [](double th, double wv, const WitnessFunctional& f) {
    return steering_cell_signed(th, wv, f);
  });
}

ScanTable scan_instrument(const std::vector<WitnessFunctional>& fs, const ScanAxis& gamma,
                          const ScanAxis& w, const std::optional<DensityMatrix>& input) {
  return run_scan(fs, gamma, w, [&input](double g, double wv, const WitnessFunctional& f) {
    return instrument_cell_signed(g, wv, f, input);
  });
}

// ------------------------------------------------------------- threshold --

double find_threshold(const std::function<double(double)>& curve, double lo, double hi,
                      double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol))
    throw ValidationError("find_threshold: tolerance must be positive");
  if (!(lo < hi)) throw ValidationError("find_threshold: empty bracket");
  if (!(curve(lo) > 0.0) || !(curve(hi) < 0.0))
    throw BracketError("find_threshold: need curve(lo) > 0 > curve(hi)");
  for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (curve(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace incompat
