#pragma once

#include <cmath>
#include <vector>

#include "operators.hpp"

namespace edgewit {

struct SpectralSplit {
  HermitianOperator range_projector;
  HermitianOperator kernel_projector;
  int rank = 0;
  std::vector<double> eigenvalues;
};

namespace detail {

inline double rank_threshold(const Eigen::VectorXd& eigs, double rank_tol) {
  const double lmax = eigs.size() > 0 ? eigs.cwiseAbs().maxCoeff() : 0.0;
  return rank_tol * std::max(1.0, lmax);
}

}  // namespace detail

inline SpectralSplit spectral_split(const HermitianOperator& m, double rank_tol = tol::rank) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.matrix());
  const Eigen::VectorXd eigs = es.eigenvalues();
  const double thr = detail::rank_threshold(eigs, rank_tol);
  const int d = m.dims().total();
  Matrix range = Matrix::Zero(d, d);
  int rank = 0;
  for (int i = 0; i < d; ++i) {
    if (std::abs(eigs(i)) > thr) {
      const Vector v = es.eigenvectors().col(i);
      range.noalias() += v * v.adjoint();
      ++rank;
    }
  }
  Matrix kernel = Matrix::Identity(d, d) - range;
  std::vector<double> evals(eigs.data(), eigs.data() + eigs.size());
  return SpectralSplit{HermitianOperator(m.dims(), range), HermitianOperator(m.dims(), kernel),
                       rank, std::move(evals)};
}

// Orthonormal basis of the kernel (eigenvectors below the rank threshold), as matrix columns.
inline Matrix kernel_basis(const HermitianOperator& m, double rank_tol = tol::rank) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.matrix());
  const Eigen::VectorXd eigs = es.eigenvalues();
  const double thr = detail::rank_threshold(eigs, rank_tol);
  const int d = m.dims().total();
  int k = 0;
  for (int i = 0; i < d; ++i)
    if (std::abs(eigs(i)) <= thr) ++k;
  Matrix basis(d, k);
  int j = 0;
  for (int i = 0; i < d; ++i)
    if (std::abs(eigs(i)) <= thr) basis.col(j++) = es.eigenvectors().col(i);
  return basis;
}

inline HermitianOperator pseudo_inverse(const HermitianOperator& m, double rank_tol = tol::rank) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.matrix());
  const Eigen::VectorXd eigs = es.eigenvalues();
  const double thr = detail::rank_threshold(eigs, rank_tol);
  const int d = m.dims().total();
  Matrix out = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    if (std::abs(eigs(i)) > thr) {
      const Vector v = es.eigenvectors().col(i);
      out.noalias() += (v * v.adjoint()) / eigs(i);
    }
  }
  return HermitianOperator(m.dims(), out);
}

namespace detail {

// Moore-Penrose inverse of a small Hermitian matrix (no bipartite structure assumed).
inline Matrix pinv_hermitian(const Matrix& m, double rank_tol = 1e-10) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0);
  const Eigen::VectorXd eigs = es.eigenvalues();
  const double thr = rank_tol * std::max(1.0, eigs.size() > 0 ? eigs.cwiseAbs().maxCoeff() : 0.0);
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    if (std::abs(eigs(i)) > thr) {
      const Vector v = es.eigenvectors().col(i);
      out.noalias() += (v * v.adjoint()) / eigs(i);
    }
  }
  return out;
}

// Projector onto the range of a small Hermitian matrix.
inline Matrix range_projector_small(const Matrix& m, double rank_tol = tol::rank) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0);
  const Eigen::VectorXd eigs = es.eigenvalues();
  const double thr = rank_tol * std::max(1.0, eigs.size() > 0 ? eigs.cwiseAbs().maxCoeff() : 0.0);
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    if (std::abs(eigs(i)) > thr) {
      const Vector v = es.eigenvectors().col(i);
      out.noalias() += v * v.adjoint();
    }
  }
  return out;
}

inline int rank_small(const Matrix& m, double rank_tol = tol::rank) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd eigs = es.eigenvalues();
  const double thr = rank_tol * std::max(1.0, eigs.size() > 0 ? eigs.cwiseAbs().maxCoeff() : 0.0);
  int r = 0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i)
    if (std::abs(eigs(i)) > thr) ++r;
  return r;
}

inline double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace detail

struct PptResult {
  bool is_ppt = false;
  double min_pt_eigenvalue = 0.0;
};

inline PptResult ppt_check(const DensityMatrix& rho) {
  const Matrix pt = partial_transpose_raw(rho.matrix(), rho.dims(), Subsystem::B);
  const double me = detail::min_eigenvalue(pt);
  return PptResult{me >= -tol::psd_floor, me};
}

}  // namespace edgewit
