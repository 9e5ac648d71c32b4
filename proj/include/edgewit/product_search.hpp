#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "operators.hpp"
#include "random.hpp"
#include "spectral.hpp"

namespace edgewit {

// ⟨e|M|e⟩ as an operator on the second factor.
inline Matrix contract_A(const Matrix& m, const BipartiteDims& dims, const Vector& e) {
  Matrix out = Matrix::Zero(dims.d_B, dims.d_B);
  for (int a = 0; a < dims.d_A; ++a)
    for (int a2 = 0; a2 < dims.d_A; ++a2)
      out.noalias() +=
          std::conj(e(a)) * e(a2) * m.block(a * dims.d_B, a2 * dims.d_B, dims.d_B, dims.d_B);
  return out;
}

// ⟨f|M|f⟩ as an operator on the first factor.
inline Matrix contract_B(const Matrix& m, const BipartiteDims& dims, const Vector& f) {
  Matrix out(dims.d_A, dims.d_A);
  for (int a = 0; a < dims.d_A; ++a)
    for (int a2 = 0; a2 < dims.d_A; ++a2)
      out(a, a2) = (f.adjoint() * m.block(a * dims.d_B, a2 * dims.d_B, dims.d_B, dims.d_B) * f)
                       .value();
  return out;
}

inline double product_expectation(const HermitianOperator& m, const ProductVector& v) {
  const Vector t = v.tensor();
  return (t.adjoint() * m.matrix() * t).value().real();
}

struct ProductMinResult {
  double value = 0.0;
  ProductVector argmin;
  int restarts_used = 0;
  bool converged = false;
};

namespace detail {

struct SeesawOutcome {
  double value = 0.0;
  Vector e;
  Vector f;
  bool converged = false;
};

// Alternating minimization of ⟨e,f|M|e,f⟩: update f for fixed e, then e for fixed f.
// Each half step solves a small Hermitian eigenproblem, so the value never increases.
inline SeesawOutcome seesaw_min(const Matrix& m, const BipartiteDims& dims, const Vector& e0,
                                int max_sweeps = 200, double conv_tol = 1e-12,
                                std::vector<double>* value_trace = nullptr) {
  Vector e = e0.normalized();
  Vector f = Vector::Zero(dims.d_B);
  double value = 0.0;
  bool have_prev = false;
  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const Matrix fm = contract_A(m, dims, e);
    Eigen::SelfAdjointEigenSolver<Matrix> fs((fm + fm.adjoint()) / 2.0);
    f = fs.eigenvectors().col(0);
    if (value_trace) value_trace->push_back(fs.eigenvalues()(0));
    const Matrix em = contract_B(m, dims, f);
    Eigen::SelfAdjointEigenSolver<Matrix> es((em + em.adjoint()) / 2.0);
    e = es.eigenvectors().col(0);
    const double next = es.eigenvalues()(0);
    if (value_trace) value_trace->push_back(next);
    if (have_prev && std::abs(next - value) < conv_tol) {
      value = next;
      converged = true;
      break;
    }
    value = next;
    have_prev = true;
  }
  return SeesawOutcome{value, e, f, converged};
}

// Same scheme for F(e,f) = ⟨e,f|X1|e,f⟩ + ⟨e,conj(f)|X2|e,conj(f)⟩.
inline SeesawOutcome seesaw_pair_min(const Matrix& x1, const Matrix& x2,
                                     const BipartiteDims& dims, const Vector& e0,
                                     int max_sweeps = 200, double conv_tol = 1e-12) {
  Vector e = e0.normalized();
  Vector f = Vector::Zero(dims.d_B);
  double value = 0.0;
  bool have_prev = false;
  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    Matrix fm = contract_A(x1, dims, e) + contract_A(x2, dims, e).conjugate();
    Eigen::SelfAdjointEigenSolver<Matrix> fs((fm + fm.adjoint()) / 2.0);
    f = fs.eigenvectors().col(0);
    Matrix em = contract_B(x1, dims, f) + contract_B(x2, dims, f.conjugate());
    Eigen::SelfAdjointEigenSolver<Matrix> es((em + em.adjoint()) / 2.0);
    e = es.eigenvectors().col(0);
    const double next = es.eigenvalues()(0);
    if (have_prev && std::abs(next - value) < conv_tol) {
      value = next;
      converged = true;
      break;
    }
    value = next;
    have_prev = true;
  }
  return SeesawOutcome{value, e, f, converged};
}

}  // namespace detail

inline ProductMinResult min_product_expectation(const HermitianOperator& m,
                                                int restarts = default_restarts,
                                                std::uint64_t seed = 0) {
  if (restarts < 1) throw parameter_error("product minimization needs at least one restart");
  std::optional<ProductMinResult> best;
  for (int r = 0; r < restarts; ++r) {
    auto engine = make_engine(derive_seed(seed, static_cast<std::uint64_t>(r)));
    const Vector e0 = haar_vector(m.dims().d_A, engine);
    const auto out = detail::seesaw_min(m.matrix(), m.dims(), e0);
    if (!best || out.value < best->value)
      best = ProductMinResult{out.value, ProductVector(out.e, out.f), restarts, out.converged};
  }
  return *best;
}

inline ProductMinResult max_product_expectation(const HermitianOperator& m,
                                                int restarts = default_restarts,
                                                std::uint64_t seed = 0) {
  HermitianOperator neg(m.dims(), Matrix(-m.matrix()));
  ProductMinResult res = min_product_expectation(neg, restarts, seed);
  res.value = -res.value;
  return res;
}

// Minimize ⟨e,f|X1|e,f⟩ + ⟨e,conj(f)|X2|e,conj(f)⟩ over unit product vectors.
inline ProductMinResult conjugate_pair_minimize(const HermitianOperator& x1,
                                                const HermitianOperator& x2,
                                                int restarts = default_restarts,
                                                std::uint64_t seed = 0) {
  if (x1.dims() != x2.dims())
    throw invalid_operator_error("conjugate pair terms must share dimensions");
  if (restarts < 1) throw parameter_error("product minimization needs at least one restart");
  std::optional<ProductMinResult> best;
  for (int r = 0; r < restarts; ++r) {
    auto engine = make_engine(derive_seed(seed, static_cast<std::uint64_t>(r)));
    const Vector e0 = haar_vector(x1.dims().d_A, engine);
    const auto out = detail::seesaw_pair_min(x1.matrix(), x2.matrix(), x1.dims(), e0);
    if (!best || out.value < best->value)
      best = ProductMinResult{out.value, ProductVector(out.e, out.f), restarts, out.converged};
  }
  return *best;
}

struct RangeSearchResult {
  std::optional<ProductVector> vector;
  double f_min = 0.0;
  int restarts_used = 0;
};

// Search for a product vector in the range of rho whose partial conjugate lies in the
// range of the partial transpose. The objective sums both kernel-projector expectations,
// so a (near-)zero value certifies membership in both ranges at once.
inline RangeSearchResult range_product_search(const DensityMatrix& rho,
                                              int restarts = default_restarts,
                                              std::uint64_t seed = 0,
                                              double zero_tol = tol::zero) {
  if (!ppt_check(rho).is_ppt)
    throw precondition_error("range search expects a positive partial transpose");
  const HermitianOperator k1 = spectral_split(rho).kernel_projector;
  const HermitianOperator pt = partial_transpose(rho, Subsystem::B);
  const HermitianOperator k2 = spectral_split(pt).kernel_projector;
  const ProductMinResult res = conjugate_pair_minimize(k1, k2, restarts, seed);
  RangeSearchResult out;
  out.f_min = res.value;
  out.restarts_used = res.restarts_used;
  if (res.value <= zero_tol) {
    // The sweep stopping rule leaves a direction error near the square root of the
    // objective, which is too coarse for rank-reducing subtraction. A fixed block of
    // extra sweeps drives the factors onto the range pair at solver precision.
    const auto polished =
        detail::seesaw_pair_min(k1.matrix(), k2.matrix(), rho.dims(), res.argmin.e(), 80, 0.0);
    const ProductVector candidate(polished.e, polished.f);
    const double after = product_expectation(k1, candidate) +
                         product_expectation(k2, candidate.partial_conjugate());
    const double before = product_expectation(k1, res.argmin) +
                          product_expectation(k2, res.argmin.partial_conjugate());
    out.vector = after <= before ? candidate : res.argmin;
    out.f_min = std::max(std::min(after, before), 0.0);
  }
  return out;
}

inline int span_dimension(const std::vector<ProductVector>& vectors) {
  const int n = static_cast<int>(vectors.size());
  if (n == 0) return 0;
  Matrix gram(n, n);
  for (int i = 0; i < n; ++i) {
    const Vector ti = vectors[i].tensor();
    for (int j = 0; j < n; ++j) gram(i, j) = ti.adjoint() * vectors[j].tensor();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es((gram + gram.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  int r = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > tol::gram_rank) ++r;
  return r;
}

namespace detail {

// Orthonormal basis (as columns) for the span of the given product vectors.
inline Matrix product_span_basis(const std::vector<ProductVector>& vectors, int total_dim) {
  const int n = static_cast<int>(vectors.size());
  if (n == 0) return Matrix(total_dim, 0);
  Matrix t(total_dim, n);
  for (int i = 0; i < n; ++i) t.col(i) = vectors[i].tensor();
  Matrix gram = t.adjoint() * t;
  Eigen::SelfAdjointEigenSolver<Matrix> es((gram + gram.adjoint()) / 2.0);
  int r = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > tol::gram_rank) ++r;
  Matrix basis(total_dim, r);
  int k = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > tol::gram_rank) {
      basis.col(k++) = t * es.eigenvectors().col(i) / std::sqrt(es.eigenvalues()(i));
    }
  }
  return basis;
}

// Appends newly found (phase-fixed, deduplicated) product zeros of m to out.
// Returns the best value seen across all restarts.
inline double collect_zeros_into(const Matrix& m, const BipartiteDims& dims, int restarts,
                                 std::uint64_t seed, double zero_tol,
                                 std::vector<ProductVector>& out) {
  if (restarts < 1) throw parameter_error("zero collection needs at least one restart");
  double best = 0.0;
  bool have_best = false;
  for (int r = 0; r < restarts; ++r) {
    auto engine = make_engine(derive_seed(seed, static_cast<std::uint64_t>(r)));
    const Vector e0 = haar_vector(dims.d_A, engine);
    const auto res = seesaw_min(m, dims, e0);
    if (!have_best || res.value < best) {
      best = res.value;
      have_best = true;
    }
    if (std::abs(res.value) <= zero_tol) {
      const ProductVector cand = ProductVector(res.e, res.f).phase_fixed();
      const Vector tc = cand.tensor();
      bool duplicate = false;
      for (const auto& existing : out) {
        if (std::abs((existing.tensor().adjoint() * tc).value()) >
            1.0 - tol::duplicate_overlap) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) out.push_back(cand);
    }
  }
  return best;
}

}  // namespace detail

struct ZeroSet {
  std::vector<ProductVector> vectors;
  int span_dim = 0;
};

// Collects product vectors with vanishing expectation. Throws if the minimum is
// strictly negative beyond tolerance, because then the operator has no product zeros
// to collect on its nonnegative boundary.
inline ZeroSet collect_zero_set(const HermitianOperator& w, int restarts = default_restarts,
                                std::uint64_t seed = 0, double zero_tol = tol::zero) {
  std::vector<ProductVector> vectors;
  const double best =
      detail::collect_zeros_into(w.matrix(), w.dims(), restarts, seed, zero_tol, vectors);
  if (best < -zero_tol)
    throw not_a_witness_error("operator attains a negative product expectation");
  const int span = span_dimension(vectors);
  return ZeroSet{std::move(vectors), span};
}

}  // namespace edgewit
