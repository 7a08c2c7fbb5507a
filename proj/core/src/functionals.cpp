#include "incompat/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "incompat/sampling.hpp"

namespace incompat {

ReferenceBasis::ReferenceBasis(std::vector<ComplexMatrix> projectors)
    : projectors_(std::move(projectors)) {
  if (projectors_.empty()) throw ShapeError("ReferenceBasis: empty projector list");
  dim_ = projectors_[0].rows();
  ComplexMatrix sum(dim_, dim_);
  for (const auto& p : projectors_) {
    HermitianMatrix h(p);
    if (h.dim() != dim_) throw ShapeError("ReferenceBasis: mixed dimensions");
    if (std::abs(trace(p).real() - 1.0) > 1e-9)
      throw ValidationError("ReferenceBasis: projector trace != 1 (not rank one)");
    if (max_abs(p * p - p) > 1e-9)
      throw ValidationError("ReferenceBasis: element is not idempotent");
    sum = sum + p;
  }
  if (static_cast<int>(projectors_.size()) != dim_ ||
      max_abs(sum - ComplexMatrix::identity(dim_)) > 1e-9)
    throw ValidationError("ReferenceBasis: projectors do not resolve the identity");
}

ReferenceBasis ReferenceBasis::computational(int dim) {
  std::vector<ComplexMatrix> ps;
  for (int i = 0; i < dim; ++i) ps.push_back(computational_projector(dim, i));
  return ReferenceBasis(std::move(ps));
}

namespace {

void require_dim(const DensityMatrix& rho, int dim, const char* who) {
  if (rho.dim() != dim)
    throw ShapeError(std::string(who) + ": state dimension " + std::to_string(rho.dim()) +
                     " != context dimension " + std::to_string(dim));
}

} // namespace

double wysi(const DensityMatrix& rho, const HermitianMatrix& h) {
  require_dim(rho, h.dim(), "wysi");
  const ComplexMatrix s = psd_sqrt(rho.hermitian());
  const ComplexMatrix hm = h.mat();
  return trace(rho.mat() * hm * hm).real() - trace(s * hm * s * hm).real();
}

double wysi_lower_bound(const DensityMatrix& rho, const HermitianMatrix& h) {
  require_dim(rho, h.dim(), "wysi_lower_bound");
  return -0.25 * commutator_trace_sq(rho.hermitian(), h);
}

double variance(const DensityMatrix& rho, const HermitianMatrix& h) {
  require_dim(rho, h.dim(), "variance");
  const ComplexMatrix hm = h.mat();
  const double first = trace(rho.mat() * hm * hm).real();
  const double mean = trace(rho.mat() * hm).real();
  return first - mean * mean;
}

double l2_coherence(const DensityMatrix& rho, const ReferenceBasis& basis) {
  require_dim(rho, basis.dim(), "l2_coherence");
  const ComplexMatrix sq = rho.mat() * rho.mat();
  double total = 0.0;
  for (int i = 0; i < basis.size(); ++i) {
    const ComplexMatrix& p = basis.proj(i);
    total += trace(sq * p).real() - trace(rho.mat() * p * rho.mat() * p).real();
  }
  return total;
}

double summed_variance(const DensityMatrix& rho, const ReferenceBasis& basis) {
  require_dim(rho, basis.dim(), "summed_variance");
  double total = 0.0;
  for (int i = 0; i < basis.size(); ++i) {
    const double p = trace(rho.mat() * basis.proj(i)).real();
    total += p - p * p; // projector squares to itself
  }
  return total;
}

double ergotropy(const DensityMatrix& rho, const HermitianMatrix& h) {
  require_dim(rho, h.dim(), "ergotropy");
  std::vector<double> lam = hermitian_eig(rho.hermitian()).values; // ascending
  std::vector<double> eps = hermitian_eig(h).values;               // ascending
  // passive state: heaviest population on the lowest level
  double passive = 0.0;
  const size_t n = lam.size();
  for (size_t k = 0; k < n; ++k) passive += lam[n - 1 - k] * eps[k];
  return trace(rho.mat() * h.mat()).real() - passive;
}

double ergotropy_pure_roof(const DensityMatrix& rho, const HermitianMatrix& h) {
  require_dim(rho, h.dim(), "ergotropy_pure_roof");
  const double ground = hermitian_eig(h).values.front();
  return trace(rho.mat() * h.mat()).real() - ground;
}

double roof_sample_lower_bound(const std::function<double(const DensityMatrix&)>& g,
                               const DensityMatrix& rho, int samples, uint64_t seed) {
  if (samples < 1) throw ValidationError("roof_sample_lower_bound: need samples >= 1");
  EigenSystem es = hermitian_eig(rho.hermitian());
  const int d = rho.dim();
  std::vector<int> support;
  for (int i = 0; i < d; ++i)
    if (es.values[i] > tol::weight_floor) support.push_back(i);
  const int rank = static_cast<int>(support.size());
  const int mix = 2 * rank; // decomposition length

  std::mt19937_64 rng(seed);
  double best = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const ComplexMatrix u = haar_unitary(mix, rng);
    double avg = 0.0;
    for (int j = 0; j < mix; ++j) {
      // |psi_j~> = sum_i U_{ji} sqrt(lam_i) |v_i>
      std::vector<cplx> amp(d, cplx(0.0, 0.0));
      for (int i = 0; i < rank; ++i) {
        const cplx c = u(j, i) * std::sqrt(es.values[support[i]]);
        for (int r = 0; r < d; ++r) amp[r] += c * es.vectors(r, support[i]);
      }
      double p = 0.0;
      for (const auto& c : amp) p += std::norm(c);
      if (p < tol::weight_floor) continue;
      avg += p * g(DensityMatrix::pure(amp));
    }
    best = std::max(best, avg);
  }
  return best;
}

WitnessFunctional make_wysi_functional(const HermitianMatrix& h) {
  WitnessFunctional f;
  f.name = "wysi";
  f.dim = h.dim();
  f.g = [h](const DensityMatrix& rho) { return wysi(rho, h); };
  f.roof = [h](const DensityMatrix& rho) { return variance(rho, h); };
  f.roof_exact = true;
  return f;
}

WitnessFunctional make_l2_functional(const ReferenceBasis& basis) {
  WitnessFunctional f;
  f.name = "l2";
  f.dim = basis.dim();
  f.g = [basis](const DensityMatrix& rho) { return l2_coherence(rho, basis); };
  f.roof = [basis](const DensityMatrix& rho) { return summed_variance(rho, basis); };
  f.roof_exact = true;
  return f;
}

WitnessFunctional make_ergotropy_functional(const HermitianMatrix& h) {
  WitnessFunctional f;
  f.name = "ergotropy";
  f.dim = h.dim();
  f.g = [h](const DensityMatrix& rho) { return ergotropy(rho, h); };
  f.roof = [h](const DensityMatrix& rho) { return ergotropy_pure_roof(rho, h); };
  f.roof_exact = true; // affine => equals its own concave roof
  return f;
}

WitnessFunctional make_functional(const std::string& name, int dim,
                                  const FunctionalContext& context) {
  if (dim <= 0) throw ShapeError("make_functional: non-positive dimension");
  const bool wants_observable = (name == "wysi" || name == "ergotropy");
  if (wants_observable) {
    HermitianMatrix h = [&]() {
      if (context.observable) return *context.observable;
      if (dim != 2)
        throw ValidationError("make_functional: '" + name +
                              "' needs an explicit observable for dimension " +
                              std::to_string(dim));
      return HermitianMatrix(pauli_z());
    }();
    if (h.dim() != dim)
      throw ShapeError("make_functional: observable dimension " + std::to_string(h.dim()) +
                       " != requested dimension " + std::to_string(dim));
    return name == "wysi" ? make_wysi_functional(h) : make_ergotropy_functional(h);
  }
  if (name == "l2") {
    ReferenceBasis b = context.basis ? *context.basis : ReferenceBasis::computational(dim);
    if (b.dim() != dim)
      throw ShapeError("make_functional: basis dimension " + std::to_string(b.dim()) +
                       " != requested dimension " + std::to_string(dim));
    return make_l2_functional(b);
  }
  throw ValidationError("make_functional: unknown functional '" + name + "'");
}

std::vector<std::string> registered_functionals() { return {"wysi", "l2", "ergotropy"}; }

} // namespace incompat
