#ifndef INCOMPAT_QUANTUM_HPP
#define INCOMPAT_QUANTUM_HPP

// Validated quantum objects (states, effects, assemblages, instruments,
// isometries) and the constructions the certification pipeline needs:
// steering assemblages from bipartite states, hidden-object models, noisy
// Pauli pairs, minimal Stinespring dilations and measure-the-ancilla
// instruments, and eigenvalue fine-graining.
//
// Index conventions: settings x and outcomes a are dense 0-based ints;
// composite spaces order the ancilla/Alice factor first, so a bipartite
// matrix index reads i_A * dim_B + i_B.

#include <optional>
#include <utility>
#include <vector>

#include "incompat/linalg.hpp"

namespace incompat {

// ---------------------------------------------------------------- states --

class DensityMatrix {
public:
  explicit DensityMatrix(const ComplexMatrix& m);

  static DensityMatrix maximally_mixed(int dim);
  // |psi><psi| from amplitudes (normalized here; zero vector rejected)
  static DensityMatrix pure(const std::vector<cplx>& amplitudes);

  int dim() const { return m_.rows(); }
  const ComplexMatrix& mat() const { return m_; }
  HermitianMatrix hermitian() const { return HermitianMatrix(m_); }

private:
  ComplexMatrix m_;
};

// PSD with 0 <= trace <= 1: one unnormalized branch of an assemblage.
class SubnormalizedState {
public:
  explicit SubnormalizedState(const ComplexMatrix& m);

  int dim() const { return m_.rows(); }
  const ComplexMatrix& mat() const { return m_; }
  double weight() const { return weight_; }
  // throws ValidationError when the branch weight sits below tol::weight_floor
  DensityMatrix normalized() const;

private:
  ComplexMatrix m_;
  double weight_ = 0.0;
};

// 0 <= M <= 1 (eigenvalue slack tol::effect_bound)
class Effect {
public:
  explicit Effect(const ComplexMatrix& m);

  int dim() const { return m_.rows(); }
  const ComplexMatrix& mat() const { return m_; }
  HermitianMatrix hermitian() const { return HermitianMatrix(m_); }

private:
  ComplexMatrix m_;
};

// ----------------------------------------------------------- assemblages --

// sigma_{a|x}: per-setting branches summing (in trace) to 1 and no-signaling
// across settings; the shared reduced state is cached at construction.
class StateAssemblage {
public:
  explicit StateAssemblage(std::vector<std::vector<SubnormalizedState>> elements);

  int settings() const { return static_cast<int>(elements_.size()); }
  int outcomes(int x) const { return static_cast<int>(elements_[x].size()); }
  int dim() const { return dim_; }
  const SubnormalizedState& at(int x, int a) const { return elements_[x][a]; }
  const ComplexMatrix& marginal() const { return marginal_; }

private:
  std::vector<std::vector<SubnormalizedState>> elements_;
  ComplexMatrix marginal_;
  int dim_ = 0;
};

// M_{a|x}: every setting a complete POVM (within completeness_tol)
class MeasurementAssemblage {
public:
  explicit MeasurementAssemblage(std::vector<std::vector<Effect>> effects,
                                 double completeness_tol = tol::completeness);

  int settings() const { return static_cast<int>(effects_.size()); }
  int outcomes(int x) const { return static_cast<int>(effects_[x].size()); }
  int dim() const { return dim_; }
  const Effect& at(int x, int a) const { return effects_[x][a]; }

private:
  std::vector<std::vector<Effect>> effects_;
  int dim_ = 0;
};

// Lambda_{a|x} as Kraus lists (possibly rectangular dim_out x dim_in); the
// per-setting sums must form one trace-preserving channel shared by all
// settings (compared through Choi matrices).
class InstrumentAssemblage {
public:
  explicit InstrumentAssemblage(std::vector<std::vector<std::vector<ComplexMatrix>>> kraus);

  int settings() const { return static_cast<int>(kraus_.size()); }
  int outcomes(int x) const { return static_cast<int>(kraus_[x].size()); }
  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  const std::vector<ComplexMatrix>& at(int x, int a) const { return kraus_[x][a]; }

  ComplexMatrix choi(int x, int a) const; // sum_k vec(K) vec(K)^dag, row-major vec
  ComplexMatrix marginal_choi() const;    // Choi of the common channel (setting 0)
  ComplexMatrix apply(int x, int a, const ComplexMatrix& rho) const;

private:
  std::vector<std::vector<std::vector<ComplexMatrix>>> kraus_;
  int dim_in_ = 0;
  int dim_out_ = 0;
};

// V: in -> anc (x) out with V^dag V = 1; row index reads i_anc * dim_out + i_out
class Isometry {
public:
  Isometry(const ComplexMatrix& m, int dim_anc, int dim_out);

  int dim_in() const { return m_.cols(); }
  int dim_out() const { return dim_out_; }
  int dim_anc() const { return dim_anc_; }
  const ComplexMatrix& mat() const { return m_; }
  ComplexMatrix kraus_block(int i) const; // rows [i*dim_out, (i+1)*dim_out)

private:
  ComplexMatrix m_;
  int dim_anc_ = 0;
  int dim_out_ = 0;
};

struct MinimalDilation {
  Isometry isometry;
  std::vector<ComplexMatrix> kraus;  // canonical (vec-orthogonal) Kraus, one per ancilla index
  std::vector<double> choi_weights;  // matching Choi eigenvalues, descending
};

// ------------------------------------------------------------- constants --

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
// |i><i| on C^dim
ComplexMatrix computational_projector(int dim, int i);

// ---------------------------------------------------------- constructions --

// sigma_{a|x} = Tr_A[(M_{a|x} (x) 1_B) rho_AB]
StateAssemblage conditional_assemblage(const DensityMatrix& rho_ab, const MeasurementAssemblage& m,
                                       int dim_a, int dim_b);

// two settings (x=0: Z, x=1: X), outcomes 0/1: (1-w) P_{a|x} + w 1/2
MeasurementAssemblage noisy_pauli_assemblage(double w);

// |phi(theta)> = sin(theta)|00> + cos(theta)|11>, theta in [0, pi/2]
DensityMatrix pure_state_family(double theta);

// response[l][x][a] = p(a|x, lambda); rows over a must each sum to 1
using ResponseTable = std::vector<std::vector<std::vector<double>>>;

// sigma_{a|x} = sum_l p(l) p(a|x,l) rho_l  -- unsteerable by construction
StateAssemblage ho_state_assemblage(const std::vector<DensityMatrix>& states,
                                    const std::vector<double>& weights,
                                    const ResponseTable& response);

// M_{a|x} = sum_l p(a|x,l) G_l from a parent POVM -- jointly measurable
MeasurementAssemblage compatible_measurement(const std::vector<Effect>& parent,
                                             const ResponseTable& response);

// K0 = diag(1, sqrt(1-gamma)), K1 = sqrt(gamma)|0><1|
std::vector<ComplexMatrix> amplitude_damping_kraus(double gamma);

// Minimal Stinespring dilation via Choi eigendecomposition; eigenvalues
// <= rank_tol are dropped, so dim_anc equals the numerical Choi rank.
MinimalDilation minimal_dilation(const std::vector<ComplexMatrix>& kraus,
                                 double rank_tol = 1e-10);

// Measure M on the ancilla of V: Kraus of Lambda_{a|x} are
// B_mu = sum_i sqrt(M_{a|x})_{mu i} K_i with K_i the blocks of V.
InstrumentAssemblage instrument_from_dilation(const MinimalDilation& dilation,
                                              const MeasurementAssemblage& ancilla_measurement);

// Inverse direction: recover the ancilla measurement a given instrument
// realizes on the minimal dilation of its own marginal channel, via
// <m|M_{a|x}|n> = vec(K_n)^dag C_{a|x} vec(K_m) / (lambda_n lambda_m).
MeasurementAssemblage ancilla_measurement_from_instrument(const InstrumentAssemblage& inst,
                                                          double rank_tol = 1e-10);

struct FineGrainResult {
  MeasurementAssemblage assemblage;
  // provenance[x][k] = (coarse outcome a, eigenvalue index i) of fine outcome k
  std::vector<std::vector<std::pair<int, int>>> provenance;
};

// Split every effect into its rank-one eigenvalue pieces (pieces with trace
// below tol::weight_floor are dropped); summing pieces that share (a, x)
// recovers the input.
FineGrainResult fine_grain(const MeasurementAssemblage& m);

} // namespace incompat

#endif
