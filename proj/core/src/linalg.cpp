#include "incompat/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace incompat {

namespace {

double offdiag_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

} // namespace

EigenSystem hermitian_eig(const HermitianMatrix& h) {
  const int n = h.dim();
  ComplexMatrix a = h.mat();
  ComplexMatrix v = ComplexMatrix::identity(n);

  if (n == 0) throw ShapeError("hermitian_eig: empty matrix");

  const double stop = 1e-14 * std::max(1.0, frobenius(a));
  const int max_sweeps = 80;
  bool converged = (n == 1);

  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    if (offdiag_norm(a) <= stop) {
      converged = true;
      break;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double hpq = std::abs(a(p, q));
        // entries this small cannot lift the off-diagonal norm above `stop`
        if (hpq <= stop / (2.0 * n)) continue;

        const cplx phase = a(p, q) / hpq;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * hpq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // unitary G: identity except G(p,p)=c, G(p,q)=s,
        // G(q,p)=-s*conj(phase), G(q,q)=c*conj(phase); A <- G^dag A G
        const cplx gqp = -s * std::conj(phase);
        const cplx gqq = c * std::conj(phase);
        for (int k = 0; k < n; ++k) { // columns: A <- A G, V <- V G
          const cplx ap = a(k, p), aq = a(k, q);
          a(k, p) = c * ap + gqp * aq;
          a(k, q) = s * ap + gqq * aq;
          const cplx vp = v(k, p), vq = v(k, q);
          v(k, p) = c * vp + gqp * vq;
          v(k, q) = s * vp + gqq * vq;
        }
        for (int k = 0; k < n; ++k) { // rows: A <- G^dag A
          const cplx bp = a(p, k), bq = a(q, k);
          a(p, k) = c * bp + std::conj(gqp) * bq;
          a(q, k) = s * bp + std::conj(gqq) * bq;
        }
        a(p, q) = 0.0; // zeroed by construction; kill round-off residue
        a(q, p) = 0.0;
      }
    }
    if (offdiag_norm(a) <= stop) converged = true;
  }

  if (!converged)
    throw NumericalError("hermitian_eig: Jacobi sweeps did not converge (off-diagonal " +
                         std::to_string(offdiag_norm(a)) + ")");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

  EigenSystem es;
  es.values.resize(n);
  es.vectors = ComplexMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    es.values[k] = a(order[k], order[k]).real();
    for (int r = 0; r < n; ++r) es.vectors(r, k) = v(r, order[k]);
  }
  return es;
}

namespace {

// U f(Lambda) U^dag for a spectral function applied entrywise to eigenvalues
ComplexMatrix spectral_apply(const EigenSystem& es, const std::vector<double>& fvals) {
  const int n = static_cast<int>(es.values.size());
  ComplexMatrix out(n, n);
  for (int k = 0; k < n; ++k) {
    if (fvals[k] == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const cplx uik = es.vectors(i, k) * fvals[k];
      for (int j = 0; j < n; ++j) out(i, j) += uik * std::conj(es.vectors(j, k));
    }
  }
  return out;
}

} // namespace

ComplexMatrix psd_sqrt(const HermitianMatrix& rho) {
  EigenSystem es = hermitian_eig(rho);
  std::vector<double> f(es.values.size());
  for (size_t k = 0; k < es.values.size(); ++k) {
    double lam = es.values[k];
    if (lam < -tol::psd_clamp)
      throw ValidationError("psd_sqrt: matrix not PSD (eigenvalue " + std::to_string(lam) + ")");
    f[k] = std::sqrt(std::max(lam, 0.0));
  }
  return spectral_apply(es, f);
}

ComplexMatrix psd_inv_sqrt(const HermitianMatrix& rho, double rank_tol) {
  EigenSystem es = hermitian_eig(rho);
  std::vector<double> f(es.values.size());
  for (size_t k = 0; k < es.values.size(); ++k) {
    double lam = es.values[k];
    if (lam < -tol::psd_clamp)
      throw ValidationError("psd_inv_sqrt: matrix not PSD (eigenvalue " + std::to_string(lam) +
                            ")");
    if (lam <= rank_tol)
      throw RankError("psd_inv_sqrt: rank deficient (eigenvalue " + std::to_string(lam) +
                      " <= cutoff " + std::to_string(rank_tol) + ")");
    f[k] = 1.0 / std::sqrt(lam);
  }
  return spectral_apply(es, f);
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, int dim_a, int dim_b, Subsystem keep) {
  if (dim_a <= 0 || dim_b <= 0) throw ShapeError("partial_trace: non-positive factor dimension");
  if (!rho.square() || rho.rows() != dim_a * dim_b)
    throw ShapeError("partial_trace: matrix is " + std::to_string(rho.rows()) + "x" +
                     std::to_string(rho.cols()) + ", expected " + std::to_string(dim_a * dim_b) +
                     " square");
  if (keep == Subsystem::B) {
    ComplexMatrix out(dim_b, dim_b);
    for (int b = 0; b < dim_b; ++b)
      for (int bp = 0; bp < dim_b; ++bp) {
        cplx s(0.0, 0.0);
        for (int a = 0; a < dim_a; ++a) s += rho(a * dim_b + b, a * dim_b + bp);
        out(b, bp) = s;
      }
    return out;
  }
  ComplexMatrix out(dim_a, dim_a);
  for (int a = 0; a < dim_a; ++a)
    for (int ap = 0; ap < dim_a; ++ap) {
      cplx s(0.0, 0.0);
      for (int b = 0; b < dim_b; ++b) s += rho(a * dim_b + b, ap * dim_b + b);
      out(a, ap) = s;
    }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx(0.0, 0.0)) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

double commutator_trace_sq(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw ShapeError("commutator_trace_sq: dimension mismatch");
  const ComplexMatrix c = a.mat() * b.mat() - b.mat() * a.mat();
  return trace(c * c).real(); // imaginary part is exactly zero up to round-off
}

} // namespace incompat
