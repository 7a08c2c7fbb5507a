#ifndef INCOMPAT_LINALG_HPP
#define INCOMPAT_LINALG_HPP

// Small-matrix Hermitian linear algebra: a cyclic Jacobi eigensolver plus the
// PSD helpers (sqrt, inverse sqrt, partial trace, kron) the witness machinery
// is built on.  Jacobi wins here: dimensions stay <= 16, it is simple to
// audit, and it returns orthonormal vectors even for degenerate spectra.

#include "incompat/complex_matrix.hpp"

namespace incompat {

struct EigenSystem {
  std::vector<double> values; // ascending
  ComplexMatrix vectors;      // unitary; column k pairs with values[k]
};

// Cyclic Jacobi with quadratic convergence; throws NumericalError if the
// off-diagonal mass will not drop below ~1e-14 * max(1, |A|_F).
EigenSystem hermitian_eig(const HermitianMatrix& a);

// Principal square root of a PSD matrix.  Eigenvalues in [-tol::psd_clamp, 0)
// are clamped to zero; anything below that window is a hard error.
ComplexMatrix psd_sqrt(const HermitianMatrix& rho);

// Inverse square root on the full support; eigenvalues <= rank_tol throw
// RankError rather than amplifying noise into the certificate.
ComplexMatrix psd_inv_sqrt(const HermitianMatrix& rho, double rank_tol = tol::rank_default);

enum class Subsystem { A, B };

// Partial trace of a (dim_a * dim_b) square matrix over the factor NOT kept.
ComplexMatrix partial_trace(const ComplexMatrix& rho, int dim_a, int dim_b, Subsystem keep);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Tr([A,B]^2); real and <= 0 for hermitian inputs.
double commutator_trace_sq(const HermitianMatrix& a, const HermitianMatrix& b);

} // namespace incompat

#endif
