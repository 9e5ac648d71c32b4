#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "operators.hpp"
#include "product_search.hpp"
#include "spectral.hpp"

namespace edgewit {

struct SubtractionStep {
  ProductVector vector;
  double lambda = 0.0;
  std::array<int, 2> rank_before{0, 0};
  std::array<int, 2> rank_after{0, 0};
};

struct SubtractionResult {
  double lambda = 0.0;
  std::optional<DensityMatrix> remainder;
};

namespace detail {

inline std::array<int, 2> rank_pair(const DensityMatrix& rho, double rank_tol) {
  const Matrix pt = partial_transpose_raw(rho.matrix(), rho.dims(), Subsystem::B);
  return {rank_small(rho.matrix(), rank_tol), rank_small(pt, rank_tol)};
}

}  // namespace detail

// Removes the largest multiple of |e,f><e,f| that keeps the state and its partial
// transpose positive, then renormalizes. An absent remainder means the state was the
// projector onto the subtracted vector itself.
inline SubtractionResult subtract_product(const DensityMatrix& rho, const ProductVector& v,
                                          double rank_tol = tol::rank) {
  const BipartiteDims dims = rho.dims();
  if (v.e().size() != dims.d_A || v.f().size() != dims.d_B)
    throw invalid_operator_error("product vector does not match operator dimensions");
  if (!ppt_check(rho).is_ppt)
    throw precondition_error("subtraction expects a positive partial transpose");
  const Matrix pt = partial_transpose_raw(rho.matrix(), dims, Subsystem::B);
  const Vector t = v.tensor();
  const Vector tc = v.partial_conjugate().tensor();
  const Matrix krho = Matrix::Identity(dims.total(), dims.total()) -
                      detail::range_projector_small(rho.matrix(), rank_tol);
  const Matrix kpt =
      Matrix::Identity(dims.total(), dims.total()) - detail::range_projector_small(pt, rank_tol);
  if ((t.adjoint() * krho * t).value().real() > tol::zero ||
      (tc.adjoint() * kpt * tc).value().real() > tol::zero)
    throw range_criterion_error(
        "vector must lie in the ranges of the state and of its partial transpose");
  const double q1 =
      (t.adjoint() * detail::pinv_hermitian(rho.matrix(), rank_tol) * t).value().real();
  const double q2 = (tc.adjoint() * detail::pinv_hermitian(pt, rank_tol) * tc).value().real();
  double lam = std::numeric_limits<double>::infinity();
  if (q1 > 0.0) lam = std::min(lam, 1.0 / q1);
  if (q2 > 0.0) lam = std::min(lam, 1.0 / q2);
  if (!std::isfinite(lam)) throw range_criterion_error("subtraction weight is not defined");
  lam = std::min(lam, 1.0);
  if (1.0 - lam <= 1e-12) return SubtractionResult{lam, std::nullopt};
  // Bisect against half the positivity floor so accepted remainders clear the
  // downstream checks with margin instead of landing exactly on the boundary.
  const auto feasible = [&](double l) {
    const Matrix r = (rho.matrix() - l * t * t.adjoint()) / (1.0 - l);
    const Matrix rpt = (pt - l * tc * tc.adjoint()) / (1.0 - l);
    return detail::min_eigenvalue(r) >= -0.5 * tol::psd_floor &&
           detail::min_eigenvalue(rpt) >= -0.5 * tol::psd_floor;
  };
  if (!feasible(lam)) {
    double lo = 0.0, hi = lam;
    for (int it = 0; it < 60; ++it) {
      const double mid = (lo + hi) / 2.0;
      if (feasible(mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    lam = lo;
  }
  if (lam < 1e-12)
    throw range_criterion_error("subtraction weight vanished at the positivity boundary");
  Matrix r = (rho.matrix() - lam * t * t.adjoint()) / (1.0 - lam);
  r = (r + r.adjoint()) / 2.0;
  const Matrix rpt = partial_transpose_raw(r, dims, Subsystem::B);
  if (detail::min_eigenvalue(r) < -tol::psd_floor ||
      detail::min_eigenvalue(rpt) < -tol::psd_floor)
    throw range_criterion_error("remainder left the positive-partial-transpose set");
  const int before_sum = detail::rank_small(rho.matrix(), rank_tol) +
                         detail::rank_small(pt, rank_tol);
  const int after_sum = detail::rank_small(r, rank_tol) + detail::rank_small(rpt, rank_tol);
  if (after_sum >= before_sum)
    throw range_criterion_error("subtraction did not reduce the rank sum");
  return SubtractionResult{lam, DensityMatrix(dims, std::move(r))};
}

struct EdgeDecomposition {
  double p = 0.0;  // weight of the edge remainder; zero when fully separable
  std::vector<std::pair<double, ProductVector>> separable_part;  // mixture weights, sum = 1
  std::optional<DensityMatrix> edge_part;
  std::vector<SubtractionStep> steps;
};

inline Matrix reconstruct_decomposition(const EdgeDecomposition& dec, const BipartiteDims& dims) {
  const int d = dims.total();
  Matrix m = Matrix::Zero(d, d);
  for (const auto& [weight, v] : dec.separable_part) {
    const Vector t = v.tensor();
    m.noalias() += (1.0 - dec.p) * weight * (t * t.adjoint());
  }
  if (dec.edge_part) m.noalias() += dec.p * dec.edge_part->matrix();
  return m;
}

// Greedy split of a PPT state into a separable mixture plus an edge remainder:
// repeatedly find an admissible product vector and subtract it until none remains.
// The rank sum drops at every step, so at most rank(rho) + rank(pt) steps occur.
inline EdgeDecomposition decompose_edge(const DensityMatrix& rho, int restarts = default_restarts,
                                        std::uint64_t seed = 0, double rank_tol = tol::rank,
                                        double zero_tol = tol::zero) {
  if (!ppt_check(rho).is_ppt)
    throw precondition_error("edge decomposition expects a positive partial transpose");
  EdgeDecomposition out;
  DensityMatrix current = rho;
  double remaining = 1.0;
  const std::array<int, 2> initial = detail::rank_pair(rho, rank_tol);
  const int step_cap = initial[0] + initial[1];
  int rejections = 0;
  std::uint64_t stream = 0;
  bool consumed = false;
  while (static_cast<int>(out.steps.size()) < step_cap) {
    const RangeSearchResult search =
        range_product_search(current, restarts, derive_seed(seed, stream++), zero_tol);
    if (!search.vector) break;
    const std::array<int, 2> before = detail::rank_pair(current, rank_tol);
    SubtractionResult sub;
    try {
      sub = subtract_product(current, *search.vector, rank_tol);
    } catch (const range_criterion_error&) {
      if (++rejections > 50) break;
      continue;
    }
    if (!sub.remainder) {
      out.steps.push_back(SubtractionStep{*search.vector, sub.lambda, before, {0, 0}});
      out.separable_part.emplace_back(remaining, *search.vector);
      remaining = 0.0;
      consumed = true;
      break;
    }
    const std::array<int, 2> after = detail::rank_pair(*sub.remainder, rank_tol);
    out.steps.push_back(SubtractionStep{*search.vector, sub.lambda, before, after});
    out.separable_part.emplace_back(remaining * sub.lambda, *search.vector);
    remaining *= 1.0 - sub.lambda;
    current = *sub.remainder;
  }
  out.p = remaining;
  // Stored weights are the mixture weights of the separable part alone, so they
  // sum to one and the reassembly is (1-p) * sum_k w_k |v_k><v_k| + p * delta.
  const double sep_weight = 1.0 - out.p;
  if (sep_weight > 1e-300)
    for (auto& [weight, v] : out.separable_part) weight /= sep_weight;
  if (!consumed) out.edge_part = current;
  return out;
}

// A PPT state is edge when no product vector sits in its range with the partially
// conjugated partner in the range of the partial transpose. In 2x2 and 2x3 every PPT
// state is separable, so nothing there can be edge.
inline bool is_edge(const DensityMatrix& delta, int restarts = default_restarts,
                    std::uint64_t seed = 0) {
  if (!ppt_check(delta).is_ppt)
    throw precondition_error("edge check expects a positive partial transpose");
  if (delta.dims().total() <= 6) return false;
  return !range_product_search(delta, restarts, seed).vector.has_value();
}

struct SubspacePair {
  std::vector<Vector> basis_a;
  std::vector<Vector> basis_b;
};

struct SubspaceConditions {
  bool cond_i = false;
  bool cond_ii = false;
  bool cond_iii = false;
};

namespace detail {

inline Matrix subspace_projector(const std::vector<Vector>& basis, int total_dim) {
  Matrix p = Matrix::Zero(total_dim, total_dim);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].size() != total_dim)
      throw parameter_error("subspace basis vector has the wrong length");
    for (std::size_t j = 0; j <= i; ++j) {
      const Complex ov = (basis[j].adjoint() * basis[i]).value();
      const double target = i == j ? 1.0 : 0.0;
      if (std::abs(ov - target) > 1e-10)
        throw parameter_error("subspace basis must be orthonormal");
    }
    p.noalias() += basis[i] * basis[i].adjoint();
  }
  return p;
}

}  // namespace detail

// Checks the three structural conditions under which a subspace pair supports an
// edge state: (i) no product vector of the first subspace has its partial conjugate
// in the second; (ii) the partial traces of both projectors share ranges (with
// conjugation on the A-trace of the second); (iii) each subspace is larger than the
// ranks of its own partial traces.
inline SubspaceConditions validate_subspace_pair(const SubspacePair& pair,
                                                 const BipartiteDims& dims,
                                                 int restarts = default_restarts,
                                                 std::uint64_t seed = 0) {
  const int d = dims.total();
  const Matrix pa = detail::subspace_projector(pair.basis_a, d);
  const Matrix pb = detail::subspace_projector(pair.basis_b, d);
  const Matrix eye = Matrix::Identity(d, d);
  SubspaceConditions out;
  const double gap = conjugate_pair_minimize(HermitianOperator(dims, eye - pa),
                                             HermitianOperator(dims, eye - pb), restarts, seed)
                         .value;
  out.cond_i = gap > tol::zero;
  const Matrix ta_a = partial_trace_raw(pa, dims, Subsystem::B);
  const Matrix ta_b = partial_trace_raw(pb, dims, Subsystem::B);
  const Matrix tb_a = partial_trace_raw(pa, dims, Subsystem::A);
  const Matrix tb_b = partial_trace_raw(pb, dims, Subsystem::A);
  const auto same_range = [](const Matrix& x, const Matrix& y) {
    return (detail::range_projector_small(x) - detail::range_projector_small(y)).norm() <=
           tol::residual;
  };
  out.cond_ii = same_range(ta_a, ta_b) && same_range(tb_a, Matrix(tb_b.conjugate()));
  const auto cond_three = [](const Matrix& proj_trace_a, const Matrix& proj_trace_b, int dim) {
    return dim > std::max(detail::rank_small(proj_trace_a), detail::rank_small(proj_trace_b));
  };
  out.cond_iii = cond_three(tb_a, ta_a, static_cast<int>(pair.basis_a.size())) &&
                 cond_three(tb_b, ta_b, static_cast<int>(pair.basis_b.size()));
  return out;
}

}  // namespace edgewit
