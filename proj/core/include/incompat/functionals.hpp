#ifndef INCOMPAT_FUNCTIONALS_HPP
#define INCOMPAT_FUNCTIONALS_HPP

// Convex state functionals paired with closed-form concave roofs.  Shipped
// pairs: skew information vs variance, basis l2-coherence vs summed variance,
// and ergotropy vs its affine pure-state roof.  A certificate built from a
// pair is only sound when the roof is exact, hence the roof_exact flag the
// witness engine insists on.

#include <functional>
#include <optional>
#include <string>

#include "incompat/quantum.hpp"

namespace incompat {

// ------------------------------------------------------------------ basis --

// complete set of rank-one orthogonal projectors
class ReferenceBasis {
public:
  explicit ReferenceBasis(std::vector<ComplexMatrix> projectors);
  static ReferenceBasis computational(int dim);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(projectors_.size()); }
  const ComplexMatrix& proj(int i) const { return projectors_[i]; }

private:
  std::vector<ComplexMatrix> projectors_;
  int dim_ = 0;
};

// ------------------------------------------------------------ evaluations --

// skew information Tr(rho H^2) - Tr(sqrt(rho) H sqrt(rho) H): convex, zero
// exactly on states commuting with H
double wysi(const DensityMatrix& rho, const HermitianMatrix& h);

// -1/4 Tr[rho,H]^2: measurable lower bound on wysi (equals wysi/2 on pure states)
double wysi_lower_bound(const DensityMatrix& rho, const HermitianMatrix& h);

// Tr(rho H^2) - (Tr rho H)^2: the exact concave roof of wysi
double variance(const DensityMatrix& rho, const HermitianMatrix& h);

// sum_i [Tr rho^2 P_i - Tr rho P_i rho P_i] = sum_{i != j} |rho_ij|^2 in the basis frame
double l2_coherence(const DensityMatrix& rho, const ReferenceBasis& basis);

// sum_j Var(rho, P_j): the exact concave roof of l2_coherence
double summed_variance(const DensityMatrix& rho, const ReferenceBasis& basis);

// Tr(rho H) - sum_k lambda_k^down(rho) eps_k^up(H): maximal unitary work extraction
double ergotropy(const DensityMatrix& rho, const HermitianMatrix& h);

// Tr(rho H) - min spec(H): affine, hence its own (exact) concave roof
double ergotropy_pure_roof(const DensityMatrix& rho, const HermitianMatrix& h);

// Best average of g over `samples` random pure-state decompositions of rho
// (spectral decomposition mixed through Haar unitaries of twice the rank).
// A lower bound on the true concave roof -- useful for diagnostics and
// tests, never sound as a certificate roof.
double roof_sample_lower_bound(const std::function<double(const DensityMatrix&)>& g,
                               const DensityMatrix& rho, int samples, uint64_t seed);

// -------------------------------------------------------------- pairings --

struct WitnessFunctional {
  std::string name;
  int dim = 0; // state dimension the context was built for
  std::function<double(const DensityMatrix&)> g;
  std::function<double(const DensityMatrix&)> roof;
  bool roof_exact = false;
};

WitnessFunctional make_wysi_functional(const HermitianMatrix& h);
WitnessFunctional make_l2_functional(const ReferenceBasis& basis);
WitnessFunctional make_ergotropy_functional(const HermitianMatrix& h);

// Name-keyed registry used by the command-line layer.  Context defaults:
// "wysi"/"ergotropy" fall back to sigma_z (dim 2 only; other dimensions must
// supply an observable), "l2" to the computational basis of the requested
// dimension.
struct FunctionalContext {
  std::optional<HermitianMatrix> observable;
  std::optional<ReferenceBasis> basis;
};

WitnessFunctional make_functional(const std::string& name, int dim,
                                  const FunctionalContext& context = {});
std::vector<std::string> registered_functionals();

} // namespace incompat

#endif
