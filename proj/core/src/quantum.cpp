#include "incompat/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace incompat {

namespace {

void check_psd_window(const HermitianMatrix& h, double floor, double ceil, const char* who,
                      bool has_ceiling) {
  EigenSystem es = hermitian_eig(h);
  if (es.values.front() < floor)
    throw ValidationError(std::string(who) + ": eigenvalue " + std::to_string(es.values.front()) +
                          " below " + std::to_string(floor));
  if (has_ceiling && es.values.back() > ceil)
    throw ValidationError(std::string(who) + ": eigenvalue " + std::to_string(es.values.back()) +
                          " above " + std::to_string(ceil));
}

ComplexMatrix vec_row_major(const ComplexMatrix& k) {
  ComplexMatrix v(k.rows() * k.cols(), 1);
  for (int i = 0; i < k.rows(); ++i)
    for (int j = 0; j < k.cols(); ++j) v(i * k.cols() + j, 0) = k(i, j);
  return v;
}

} // namespace

// ---------------------------------------------------------------- states --

DensityMatrix::DensityMatrix(const ComplexMatrix& m) {
  HermitianMatrix h(m); // checks square/finite/hermitian and symmetrizes
  const double tr = trace(h.mat()).real();
  if (std::abs(tr - 1.0) > tol::trace_one)
    throw ValidationError("DensityMatrix: trace " + std::to_string(tr) + " != 1");
  check_psd_window(h, -tol::psd_clamp, 0.0, "DensityMatrix", false);
  m_ = h.mat();
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim <= 0) throw ShapeError("maximally_mixed: non-positive dimension");
  return DensityMatrix((1.0 / dim) * ComplexMatrix::identity(dim));
}

DensityMatrix DensityMatrix::pure(const std::vector<cplx>& amplitudes) {
  const int d = static_cast<int>(amplitudes.size());
  double norm2 = 0.0;
  for (const auto& c : amplitudes) norm2 += std::norm(c);
  if (norm2 <= 0.0 || !std::isfinite(norm2))
    throw ValidationError("DensityMatrix::pure: amplitudes not normalizable");
  ComplexMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = amplitudes[i] * std::conj(amplitudes[j]) / norm2;
  return DensityMatrix(m);
}

SubnormalizedState::SubnormalizedState(const ComplexMatrix& m) {
  HermitianMatrix h(m);
  weight_ = trace(h.mat()).real();
  if (weight_ < -tol::psd_clamp || weight_ > 1.0 + tol::trace_one)
    throw ValidationError("SubnormalizedState: trace " + std::to_string(weight_) +
                          " outside [0, 1]");
  check_psd_window(h, -tol::psd_clamp, 0.0, "SubnormalizedState", false);
  m_ = h.mat();
  weight_ = std::max(weight_, 0.0);
}

DensityMatrix SubnormalizedState::normalized() const {
  if (weight_ < tol::weight_floor)
    throw ValidationError("SubnormalizedState::normalized: weight below floor");
  // true division, not reciprocal multiply: p/p = 1 exactly, so boundary
  // cells (vanishing entanglement or damping) stay exactly zero downstream
  ComplexMatrix out(m_.rows(), m_.cols());
  for (int i = 0; i < m_.rows(); ++i)
    for (int j = 0; j < m_.cols(); ++j) out(i, j) = m_(i, j) / weight_;
  return DensityMatrix(out);
}

Effect::Effect(const ComplexMatrix& m) {
  HermitianMatrix h(m);
  check_psd_window(h, -tol::effect_bound, 1.0 + tol::effect_bound, "Effect", true);
  m_ = h.mat();
}

// ----------------------------------------------------------- assemblages --

StateAssemblage::StateAssemblage(std::vector<std::vector<SubnormalizedState>> elements)
    : elements_(std::move(elements)) {
  if (elements_.empty()) throw ShapeError("StateAssemblage: no settings");
  dim_ = 0;
  std::vector<ComplexMatrix> sums;
  for (size_t x = 0; x < elements_.size(); ++x) {
    if (elements_[x].empty()) throw ShapeError("StateAssemblage: setting with no outcomes");
    double total = 0.0;
    ComplexMatrix sum(elements_[x][0].dim(), elements_[x][0].dim());
    for (const auto& s : elements_[x]) {
      if (dim_ == 0) dim_ = s.dim();
      if (s.dim() != dim_) throw ShapeError("StateAssemblage: mixed dimensions");
      total += s.weight();
      sum = sum + s.mat();
    }
    if (std::abs(total - 1.0) > tol::completeness)
      throw ValidationError("StateAssemblage: setting " + std::to_string(x) +
                            " weights sum to " + std::to_string(total));
    sums.push_back(sum);
  }
  for (size_t x = 1; x < sums.size(); ++x) {
    const double gap = max_abs(sums[x] - sums[0]);
    if (gap > tol::no_signaling)
      throw ValidationError("StateAssemblage: settings 0 and " + std::to_string(x) +
                            " disagree on the reduced state by " + std::to_string(gap));
  }
  marginal_ = ComplexMatrix(dim_, dim_);
  for (const auto& s : sums) marginal_ = marginal_ + s;
  marginal_ = (1.0 / static_cast<double>(sums.size())) * marginal_;
}

MeasurementAssemblage::MeasurementAssemblage(std::vector<std::vector<Effect>> effects,
                                             double completeness_tol)
    : effects_(std::move(effects)) {
  if (effects_.empty()) throw ShapeError("MeasurementAssemblage: no settings");
  dim_ = 0;
  for (size_t x = 0; x < effects_.size(); ++x) {
    if (effects_[x].empty()) throw ShapeError("MeasurementAssemblage: setting with no outcomes");
    ComplexMatrix sum(effects_[x][0].dim(), effects_[x][0].dim());
    for (const auto& e : effects_[x]) {
      if (dim_ == 0) dim_ = e.dim();
      if (e.dim() != dim_) throw ShapeError("MeasurementAssemblage: mixed dimensions");
      sum = sum + e.mat();
    }
    const double gap = max_abs(sum - ComplexMatrix::identity(dim_));
    if (gap > completeness_tol)
      throw ValidationError("MeasurementAssemblage: setting " + std::to_string(x) +
                            " incomplete by " + std::to_string(gap));
  }
}

InstrumentAssemblage::InstrumentAssemblage(
    std::vector<std::vector<std::vector<ComplexMatrix>>> kraus)
    : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw ShapeError("InstrumentAssemblage: no settings");
  for (const auto& setting : kraus_) {
    if (setting.empty()) throw ShapeError("InstrumentAssemblage: setting with no outcomes");
    for (const auto& branch : setting) {
      if (branch.empty()) throw ShapeError("InstrumentAssemblage: branch with no Kraus operators");
      for (const auto& k : branch) {
        if (!all_finite(k)) throw ValidationError("InstrumentAssemblage: non-finite Kraus entry");
        if (dim_in_ == 0) {
          dim_in_ = k.cols();
          dim_out_ = k.rows();
        }
        if (k.cols() != dim_in_ || k.rows() != dim_out_)
          throw ShapeError("InstrumentAssemblage: inconsistent Kraus shapes");
      }
    }
  }
  // the marginal channel must not depend on the setting, and must be TP
  const ComplexMatrix c0 = marginal_choi();
  for (int x = 1; x < settings(); ++x) {
    ComplexMatrix cx(dim_out_ * dim_in_, dim_out_ * dim_in_);
    for (int a = 0; a < outcomes(x); ++a) cx = cx + choi(x, a);
    const double gap = max_abs(cx - c0);
    if (gap > tol::no_signaling)
      throw ValidationError("InstrumentAssemblage: settings 0 and " + std::to_string(x) +
                            " have different marginal channels (gap " + std::to_string(gap) + ")");
  }
  ComplexMatrix tp(dim_in_, dim_in_);
  for (int a = 0; a < outcomes(0); ++a)
    for (const auto& k : kraus_[0][a]) tp = tp + adjoint(k) * k;
  const double gap = max_abs(tp - ComplexMatrix::identity(dim_in_));
  if (gap > tol::completeness)
    throw ValidationError("InstrumentAssemblage: marginal not trace-preserving (gap " +
                          std::to_string(gap) + ")");
}

ComplexMatrix InstrumentAssemblage::choi(int x, int a) const {
  ComplexMatrix c(dim_out_ * dim_in_, dim_out_ * dim_in_);
  for (const auto& k : kraus_[x][a]) {
    const ComplexMatrix v = vec_row_major(k);
    c = c + v * adjoint(v);
  }
  return c;
}

ComplexMatrix InstrumentAssemblage::marginal_choi() const {
  ComplexMatrix c(dim_out_ * dim_in_, dim_out_ * dim_in_);
  for (int a = 0; a < outcomes(0); ++a) c = c + choi(0, a);
  return c;
}

ComplexMatrix InstrumentAssemblage::apply(int x, int a, const ComplexMatrix& rho) const {
  if (rho.rows() != dim_in_ || rho.cols() != dim_in_)
    throw ShapeError("InstrumentAssemblage::apply: state dimension mismatch");
  ComplexMatrix out(dim_out_, dim_out_);
  for (const auto& k : kraus_[x][a]) out = out + k * rho * adjoint(k);
  return out;
}

Isometry::Isometry(const ComplexMatrix& m, int dim_anc, int dim_out)
    : m_(m), dim_anc_(dim_anc), dim_out_(dim_out) {
  if (dim_anc <= 0 || dim_out <= 0) throw ShapeError("Isometry: non-positive dimension");
  if (m.rows() != dim_anc * dim_out)
    throw ShapeError("Isometry: rows " + std::to_string(m.rows()) + " != dim_anc*dim_out");
  if (!all_finite(m)) throw ValidationError("Isometry: non-finite entry");
  const double gap = max_abs(adjoint(m) * m - ComplexMatrix::identity(m.cols()));
  if (gap > tol::isometry)
    throw ValidationError("Isometry: V^dag V differs from identity by " + std::to_string(gap));
}

ComplexMatrix Isometry::kraus_block(int i) const {
  if (i < 0 || i >= dim_anc_) throw ShapeError("Isometry::kraus_block: index out of range");
  ComplexMatrix k(dim_out_, dim_in());
  for (int r = 0; r < dim_out_; ++r)
    for (int c = 0; c < dim_in(); ++c) k(r, c) = m_(i * dim_out_ + r, c);
  return k;
}

// ------------------------------------------------------------- constants --

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m(0, 1) = cplx(0.0, -1.0);
  m(1, 0) = cplx(0.0, 1.0);
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

ComplexMatrix computational_projector(int dim, int i) {
  if (i < 0 || i >= dim) throw ShapeError("computational_projector: index out of range");
  ComplexMatrix m(dim, dim);
  m(i, i) = 1.0;
  return m;
}

// --------------------------------------------------------- constructions --

StateAssemblage conditional_assemblage(const DensityMatrix& rho_ab, const MeasurementAssemblage& m,
                                       int dim_a, int dim_b) {
  if (rho_ab.dim() != dim_a * dim_b)
    throw ShapeError("conditional_assemblage: state is not on a " + std::to_string(dim_a) + "x" +
                     std::to_string(dim_b) + " product space");
  if (m.dim() != dim_a)
    throw ShapeError("conditional_assemblage: measurement dimension != dim_a");
  const ComplexMatrix one_b = ComplexMatrix::identity(dim_b);
  std::vector<std::vector<SubnormalizedState>> elements;
  for (int x = 0; x < m.settings(); ++x) {
    std::vector<SubnormalizedState> row;
    for (int a = 0; a < m.outcomes(x); ++a) {
      const ComplexMatrix op = kron(m.at(x, a).mat(), one_b) * rho_ab.mat();
      row.emplace_back(partial_trace(op, dim_a, dim_b, Subsystem::B));
    }
    elements.push_back(std::move(row));
  }
  return StateAssemblage(std::move(elements));
}

MeasurementAssemblage noisy_pauli_assemblage(double w) {
  if (w < 0.0 || w > 1.0)
    throw ValidationError("noisy_pauli_assemblage: w = " + std::to_string(w) + " outside [0, 1]");
  const ComplexMatrix half = 0.5 * ComplexMatrix::identity(2);
  const std::vector<cplx> plus = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  const std::vector<cplx> minus = {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)};
  std::vector<std::vector<Effect>> effects(2);
  effects[0].emplace_back((1.0 - w) * computational_projector(2, 0) + w * half);
  effects[0].emplace_back((1.0 - w) * computational_projector(2, 1) + w * half);
  effects[1].emplace_back((1.0 - w) * DensityMatrix::pure(plus).mat() + w * half);
  effects[1].emplace_back((1.0 - w) * DensityMatrix::pure(minus).mat() + w * half);
  return MeasurementAssemblage(std::move(effects));
}

DensityMatrix pure_state_family(double theta) {
  if (theta < 0.0 || theta > M_PI / 2.0 + 1e-12)
    throw ValidationError("pure_state_family: theta outside [0, pi/2]");
  std::vector<cplx> amp(4, 0.0);
  amp[0] = std::sin(theta); // |00>
  amp[3] = std::cos(theta); // |11>
  return DensityMatrix::pure(amp);
}

namespace {

void check_response(const ResponseTable& response, size_t n_lambda, const char* who) {
  if (response.size() != n_lambda)
    throw ShapeError(std::string(who) + ": response table has " + std::to_string(response.size()) +
                     " rows, expected one per hidden object");
  const size_t n_settings = response.front().size();
  for (const auto& per_lambda : response) {
    if (per_lambda.size() != n_settings)
      throw ShapeError(std::string(who) + ": ragged response table");
    for (const auto& dist : per_lambda) {
      double total = 0.0;
      for (double p : dist) {
        if (p < -1e-12) throw ValidationError(std::string(who) + ": negative response probability");
        total += p;
      }
      if (std::abs(total - 1.0) > 1e-9)
        throw ValidationError(std::string(who) + ": response distribution sums to " +
                              std::to_string(total));
    }
  }
}

} // namespace

StateAssemblage ho_state_assemblage(const std::vector<DensityMatrix>& states,
                                    const std::vector<double>& weights,
                                    const ResponseTable& response) {
  if (states.empty() || states.size() != weights.size())
    throw ShapeError("ho_state_assemblage: need matching states and weights");
  double wtotal = 0.0;
  for (double w : weights) {
    if (w < -1e-12) throw ValidationError("ho_state_assemblage: negative ensemble weight");
    wtotal += w;
  }
  if (std::abs(wtotal - 1.0) > 1e-9)
    throw ValidationError("ho_state_assemblage: ensemble weights sum to " + std::to_string(wtotal));
  check_response(response, states.size(), "ho_state_assemblage");

  const int dim = states.front().dim();
  const size_t n_settings = response.front().size();
  std::vector<std::vector<SubnormalizedState>> elements;
  for (size_t x = 0; x < n_settings; ++x) {
    const size_t n_outcomes = response.front()[x].size();
    std::vector<SubnormalizedState> row;
    for (size_t a = 0; a < n_outcomes; ++a) {
      ComplexMatrix sum(dim, dim);
      for (size_t l = 0; l < states.size(); ++l) {
        if (states[l].dim() != dim) throw ShapeError("ho_state_assemblage: mixed dimensions");
        if (response[l][x].size() != n_outcomes)
          throw ShapeError("ho_state_assemblage: ragged outcome counts");
        sum = sum + (weights[l] * response[l][x][a]) * states[l].mat();
      }
      row.emplace_back(sum);
    }
    elements.push_back(std::move(row));
  }
  return StateAssemblage(std::move(elements));
}

MeasurementAssemblage compatible_measurement(const std::vector<Effect>& parent,
                                             const ResponseTable& response) {
  if (parent.empty()) throw ShapeError("compatible_measurement: empty parent");
  const int dim = parent.front().dim();
  ComplexMatrix sum(dim, dim);
  for (const auto& g : parent) {
    if (g.dim() != dim) throw ShapeError("compatible_measurement: mixed dimensions");
    sum = sum + g.mat();
  }
  if (max_abs(sum - ComplexMatrix::identity(dim)) > tol::completeness)
    throw ValidationError("compatible_measurement: parent POVM incomplete");
  check_response(response, parent.size(), "compatible_measurement");

  const size_t n_settings = response.front().size();
  std::vector<std::vector<Effect>> effects;
  for (size_t x = 0; x < n_settings; ++x) {
    const size_t n_outcomes = response.front()[x].size();
    std::vector<Effect> row;
    for (size_t a = 0; a < n_outcomes; ++a) {
      ComplexMatrix m(dim, dim);
      for (size_t l = 0; l < parent.size(); ++l) {
        if (response[l][x].size() != n_outcomes)
          throw ShapeError("compatible_measurement: ragged outcome counts");
        m = m + response[l][x][a] * parent[l].mat();
      }
      row.emplace_back(m);
    }
    effects.push_back(std::move(row));
  }
  return MeasurementAssemblage(std::move(effects));
}

std::vector<ComplexMatrix> amplitude_damping_kraus(double gamma) {
  if (gamma < 0.0 || gamma > 1.0)
    throw ValidationError("amplitude_damping_kraus: gamma outside [0, 1]");
  ComplexMatrix k0(2, 2), k1(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return {k0, k1};
}

MinimalDilation minimal_dilation(const std::vector<ComplexMatrix>& kraus, double rank_tol) {
  if (kraus.empty()) throw ShapeError("minimal_dilation: no Kraus operators");
  const int dout = kraus.front().rows();
  const int din = kraus.front().cols();
  ComplexMatrix tp(din, din);
  ComplexMatrix choi(dout * din, dout * din);
  for (const auto& k : kraus) {
    if (k.rows() != dout || k.cols() != din)
      throw ShapeError("minimal_dilation: inconsistent Kraus shapes");
    if (!all_finite(k)) throw ValidationError("minimal_dilation: non-finite Kraus entry");
    tp = tp + adjoint(k) * k;
    const ComplexMatrix v = vec_row_major(k);
    choi = choi + v * adjoint(v);
  }
  if (max_abs(tp - ComplexMatrix::identity(din)) > tol::completeness)
    throw ValidationError("minimal_dilation: Kraus sum is not trace-preserving");

  EigenSystem es = hermitian_eig(HermitianMatrix(choi));
  // canonical Kraus from Choi eigenvectors, heaviest first; the phase of each
  // eigenvector is pinned by making its largest-magnitude entry real positive
  std::vector<ComplexMatrix> canonical;
  std::vector<double> weights;
  for (int k = static_cast<int>(es.values.size()) - 1; k >= 0; --k) {
    const double lam = es.values[k];
    if (lam <= rank_tol) continue;
    ComplexMatrix op(dout, din);
    int best = 0;
    double best_mag = -1.0;
    for (int r = 0; r < dout * din; ++r) {
      const double mag = std::abs(es.vectors(r, k));
      if (mag > best_mag + 1e-15) {
        best_mag = mag;
        best = r;
      }
    }
    const cplx pivot = es.vectors(best, k);
    const cplx phase = std::abs(pivot) / pivot;
    const double scale = std::sqrt(lam);
    for (int i = 0; i < dout; ++i)
      for (int j = 0; j < din; ++j) op(i, j) = scale * phase * es.vectors(i * din + j, k);
    canonical.push_back(op);
    weights.push_back(lam);
  }
  if (canonical.empty()) throw ValidationError("minimal_dilation: channel has zero Choi rank");

  const int r = static_cast<int>(canonical.size());
  ComplexMatrix v(r * dout, din);
  for (int i = 0; i < r; ++i)
    for (int a = 0; a < dout; ++a)
      for (int b = 0; b < din; ++b) v(i * dout + a, b) = canonical[i](a, b);
  return MinimalDilation{Isometry(v, r, dout), std::move(canonical), std::move(weights)};
}

InstrumentAssemblage instrument_from_dilation(const MinimalDilation& dilation,
                                              const MeasurementAssemblage& ancilla_measurement) {
  const int r = dilation.isometry.dim_anc();
  if (ancilla_measurement.dim() != r)
    throw ShapeError("instrument_from_dilation: measurement dimension " +
                     std::to_string(ancilla_measurement.dim()) + " != ancilla dimension " +
                     std::to_string(r));
  const int dout = dilation.isometry.dim_out();
  const int din = dilation.isometry.dim_in();
  std::vector<std::vector<std::vector<ComplexMatrix>>> kraus;
  for (int x = 0; x < ancilla_measurement.settings(); ++x) {
    std::vector<std::vector<ComplexMatrix>> row;
    for (int a = 0; a < ancilla_measurement.outcomes(x); ++a) {
      const ComplexMatrix sq = psd_sqrt(ancilla_measurement.at(x, a).hermitian());
      std::vector<ComplexMatrix> branch;
      for (int mu = 0; mu < r; ++mu) {
        ComplexMatrix b(dout, din);
        for (int i = 0; i < r; ++i) {
          const cplx c = sq(mu, i);
          if (c == cplx(0.0, 0.0)) continue;
          b = b + c * dilation.kraus[i];
        }
        if (frobenius(b) > 1e-12) branch.push_back(std::move(b));
      }
      if (branch.empty()) branch.emplace_back(ComplexMatrix(dout, din)); // explicit zero branch
      row.push_back(std::move(branch));
    }
    kraus.push_back(std::move(row));
  }
  return InstrumentAssemblage(std::move(kraus));
}

MeasurementAssemblage ancilla_measurement_from_instrument(const InstrumentAssemblage& inst,
                                                          double rank_tol) {
  std::vector<ComplexMatrix> channel;
  for (int a = 0; a < inst.outcomes(0); ++a)
    for (const auto& k : inst.at(0, a)) channel.push_back(k);
  const MinimalDilation dil = minimal_dilation(channel, rank_tol);
  const int r = dil.isometry.dim_anc();

  std::vector<ComplexMatrix> vk;
  vk.reserve(r);
  for (const auto& k : dil.kraus) vk.push_back(vec_row_major(k));

  std::vector<std::vector<Effect>> effects;
  for (int x = 0; x < inst.settings(); ++x) {
    std::vector<Effect> row;
    for (int a = 0; a < inst.outcomes(x); ++a) {
      const ComplexMatrix c = inst.choi(x, a);
      ComplexMatrix e(r, r);
      for (int m = 0; m < r; ++m) {
        const ComplexMatrix cvm = c * vk[m];
        for (int n = 0; n < r; ++n) {
          cplx q = 0.0;
          for (int i = 0; i < cvm.rows(); ++i) q += std::conj(vk[n](i, 0)) * cvm(i, 0);
          e(m, n) = q / (dil.choi_weights[n] * dil.choi_weights[m]);
        }
      }
      row.emplace_back(e);
    }
    effects.push_back(std::move(row));
  }
  return MeasurementAssemblage(std::move(effects));
}

FineGrainResult fine_grain(const MeasurementAssemblage& m) {
  std::vector<std::vector<Effect>> effects;
  std::vector<std::vector<std::pair<int, int>>> provenance;
  for (int x = 0; x < m.settings(); ++x) {
    std::vector<Effect> row;
    std::vector<std::pair<int, int>> labels;
    for (int a = 0; a < m.outcomes(x); ++a) {
      EigenSystem es = hermitian_eig(m.at(x, a).hermitian());
      const int d = m.dim();
      for (int i = 0; i < d; ++i) {
        const double lam = std::max(es.values[i], 0.0);
        if (lam < tol::weight_floor) continue;
        ComplexMatrix piece(d, d);
        for (int r = 0; r < d; ++r)
          for (int c = 0; c < d; ++c)
            piece(r, c) = lam * es.vectors(r, i) * std::conj(es.vectors(c, i));
        row.emplace_back(piece);
        labels.emplace_back(a, i);
      }
    }
    if (row.empty()) throw ValidationError("fine_grain: setting " + std::to_string(x) +
                                           " has no nonzero pieces");
    effects.push_back(std::move(row));
    provenance.push_back(std::move(labels));
  }
  return FineGrainResult{MeasurementAssemblage(std::move(effects)), std::move(provenance)};
}

} // namespace incompat
