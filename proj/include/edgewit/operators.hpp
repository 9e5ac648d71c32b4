#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <utility>

#include "types.hpp"

namespace edgewit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Subsystem { A, B };

class HermitianOperator {
 public:
  HermitianOperator(BipartiteDims dims, Matrix m, double herm_tol = tol::hermiticity)
      : dims_(dims), m_(std::move(m)) {
    const int d = dims_.total();
    if (m_.rows() != d || m_.cols() != d)
      throw invalid_operator_error("matrix size does not match subsystem dimensions");
    const double dev = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (dev > herm_tol) throw invalid_operator_error("matrix is not Hermitian within tolerance");
    Matrix h = (m_ + m_.adjoint()) / 2.0;
    m_ = std::move(h);
  }

  const BipartiteDims& dims() const { return dims_; }
  const Matrix& matrix() const { return m_; }

 private:
  BipartiteDims dims_;
  Matrix m_;
};

class DensityMatrix : public HermitianOperator {
 public:
  DensityMatrix(BipartiteDims dims, const Matrix& m) : HermitianOperator(dims, m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix(), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol::psd_floor)
      throw invalid_operator_error("density matrix has a negative eigenvalue");
    const Complex tr = matrix().trace();
    if (std::abs(tr.real() - 1.0) > tol::trace_one || std::abs(tr.imag()) > tol::trace_one)
      throw invalid_operator_error("density matrix trace differs from 1");
  }

  explicit DensityMatrix(const HermitianOperator& h) : DensityMatrix(h.dims(), h.matrix()) {}
};

namespace detail {

inline Vector phase_fix(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) return v * std::polar(1.0, -std::arg(v(i)));
  }
  return v;
}

}  // namespace detail

class ProductVector {
 public:
  ProductVector(Vector e, Vector f) : e_(std::move(e)), f_(std::move(f)) {
    const double ne = e_.norm();
    const double nf = f_.norm();
    if (ne < 1e-14 || nf < 1e-14) throw parameter_error("product vector factors must be nonzero");
    e_ /= ne;
    f_ /= nf;
  }

  const Vector& e() const { return e_; }
  const Vector& f() const { return f_; }

  Vector tensor() const {
    Vector t(e_.size() * f_.size());
    for (Eigen::Index i = 0; i < e_.size(); ++i) t.segment(i * f_.size(), f_.size()) = e_(i) * f_;
    return t;
  }

  ProductVector partial_conjugate() const { return ProductVector(e_, f_.conjugate()); }

  ProductVector phase_fixed() const {
    return ProductVector(detail::phase_fix(e_), detail::phase_fix(f_));
  }

 private:
  Vector e_, f_;
};

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline HermitianOperator identity_operator(const BipartiteDims& dims) {
  return HermitianOperator(dims, Matrix::Identity(dims.total(), dims.total()));
}

inline HermitianOperator zero_operator(const BipartiteDims& dims) {
  return HermitianOperator(dims, Matrix::Zero(dims.total(), dims.total()));
}

inline Matrix partial_transpose_raw(const Matrix& m, const BipartiteDims& dims, Subsystem s) {
  const int dA = dims.d_A, dB = dims.d_B;
  if (m.rows() != dims.total() || m.cols() != dims.total())
    throw invalid_operator_error("matrix size does not match subsystem dimensions");
  Matrix out(m.rows(), m.cols());
  for (int a = 0; a < dA; ++a)
    for (int b = 0; b < dB; ++b)
      for (int a2 = 0; a2 < dA; ++a2)
        for (int b2 = 0; b2 < dB; ++b2) {
          if (s == Subsystem::B)
            out(dims.index(a, b), dims.index(a2, b2)) = m(dims.index(a, b2), dims.index(a2, b));
          else
            out(dims.index(a, b), dims.index(a2, b2)) = m(dims.index(a2, b), dims.index(a, b2));
        }
  return out;
}

inline HermitianOperator partial_transpose(const HermitianOperator& m, Subsystem s) {
  return HermitianOperator(m.dims(), partial_transpose_raw(m.matrix(), m.dims(), s));
}

// Trace out the given subsystem; the result lives on the remaining factor.
inline Matrix partial_trace_raw(const Matrix& m, const BipartiteDims& dims, Subsystem traced) {
  const int dA = dims.d_A, dB = dims.d_B;
  if (traced == Subsystem::A) {
    Matrix out = Matrix::Zero(dB, dB);
    for (int a = 0; a < dA; ++a)
      for (int b = 0; b < dB; ++b)
        for (int b2 = 0; b2 < dB; ++b2) out(b, b2) += m(dims.index(a, b), dims.index(a, b2));
    return out;
  }
  Matrix out = Matrix::Zero(dA, dA);
  for (int b = 0; b < dB; ++b)
    for (int a = 0; a < dA; ++a)
      for (int a2 = 0; a2 < dA; ++a2) out(a, a2) += m(dims.index(a, b), dims.index(a2, b));
  return out;
}

inline Matrix partial_trace(const HermitianOperator& m, Subsystem traced) {
  return partial_trace_raw(m.matrix(), m.dims(), traced);
}

inline Matrix swap_factors_raw(const Matrix& m, const BipartiteDims& dims) {
  const int dA = dims.d_A, dB = dims.d_B;
  const BipartiteDims swapped(dB, dA);
  Matrix out(m.rows(), m.cols());
  for (int a = 0; a < dA; ++a)
    for (int b = 0; b < dB; ++b)
      for (int a2 = 0; a2 < dA; ++a2)
        for (int b2 = 0; b2 < dB; ++b2)
          out(swapped.index(b, a), swapped.index(b2, a2)) = m(dims.index(a, b), dims.index(a2, b2));
  return out;
}

inline HermitianOperator swap_factors(const HermitianOperator& m) {
  const BipartiteDims swapped(m.dims().d_B, m.dims().d_A);
  return HermitianOperator(swapped, swap_factors_raw(m.matrix(), m.dims()));
}

}  // namespace edgewit
