#ifndef INCOMPAT_COMPLEX_MATRIX_HPP
#define INCOMPAT_COMPLEX_MATRIX_HPP

// Dense row-major complex matrices.  Everything downstream works on
// dimensions <= 16, so the arithmetic is deliberately plain O(n^2)/O(n^3)
// loops -- no blocking, no expression templates, no external BLAS.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "incompat/errors.hpp"
#include "incompat/tolerances.hpp"

namespace incompat {

using cplx = std::complex<double>;

class ComplexMatrix {
public:
  ComplexMatrix() = default;

  ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0)
      throw ShapeError("ComplexMatrix: negative dimension");
    data_.assign(static_cast<size_t>(rows) * cols, cplx(0.0, 0.0));
  }

  static ComplexMatrix identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const cplx& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  const std::vector<cplx>& data() const { return data_; }

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> data_;
};

inline void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError(std::string(who) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
}

inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "operator+");
  ComplexMatrix out(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "operator-");
  ComplexMatrix out(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw ShapeError("operator*: inner dimensions " + std::to_string(a.cols()) + " vs " +
                     std::to_string(b.rows()));
  ComplexMatrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx(0.0, 0.0)) continue;
      for (int j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

inline ComplexMatrix operator*(cplx s, const ComplexMatrix& a) {
  ComplexMatrix out(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(i, j) = s * a(i, j);
  return out;
}

inline ComplexMatrix operator*(double s, const ComplexMatrix& a) { return cplx(s, 0.0) * a; }

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

inline ComplexMatrix transpose(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

inline cplx trace(const ComplexMatrix& a) {
  if (!a.square()) throw ShapeError("trace: matrix not square");
  cplx t(0.0, 0.0);
  for (int i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

// max |entry|; doubles as an infinity-like norm for tolerance checks
inline double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (const auto& v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

inline double frobenius(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& v : a.data()) s += std::norm(v);
  return std::sqrt(s);
}

inline bool all_finite(const ComplexMatrix& a) {
  for (const auto& v : a.data())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

inline double hermiticity_defect(const ComplexMatrix& a) {
  if (!a.square()) throw ShapeError("hermiticity_defect: matrix not square");
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
  return m;
}

// Square matrix validated hermitian at construction (within tol::hermiticity)
// and stored exactly symmetrized, so downstream eigensolves see A == A^dag.
class HermitianMatrix {
public:
  explicit HermitianMatrix(const ComplexMatrix& m, double tolerance = tol::hermiticity) {
    if (!m.square()) throw ShapeError("HermitianMatrix: matrix not square");
    if (!all_finite(m)) throw ValidationError("HermitianMatrix: non-finite entry");
    const double defect = hermiticity_defect(m);
    if (defect > tolerance)
      throw ValidationError("HermitianMatrix: not hermitian (defect " + std::to_string(defect) +
                            ")");
    m_ = ComplexMatrix(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) m_(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  }

  int dim() const { return m_.rows(); }
  const ComplexMatrix& mat() const { return m_; }

private:
  ComplexMatrix m_;
};

} // namespace incompat

#endif
