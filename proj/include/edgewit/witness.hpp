#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "edge.hpp"
#include "operators.hpp"
#include "product_search.hpp"
#include "random.hpp"
#include "spectral.hpp"

namespace edgewit {

struct WitnessConstruction {
  HermitianOperator P;  // kernel projector of the edge state
  HermitianOperator Q;  // kernel projector of its partial transpose
  HermitianOperator C;  // reference operator subtracted to tilt the witness
  double epsilon = 0.0;  // shift actually applied (safety times the estimated margin)
  double c = 0.0;        // largest product expectation of C
  HermitianOperator W;
};

struct DecomposableOperator {
  HermitianOperator P;
  HermitianOperator Q;
  HermitianOperator D;  // P + partial transpose of Q
};

inline DecomposableOperator make_decomposable(const HermitianOperator& p,
                                              const HermitianOperator& q) {
  if (p.dims() != q.dims())
    throw invalid_operator_error("decomposable parts must share dimensions");
  if (detail::min_eigenvalue(p.matrix()) < -1e-8 || detail::min_eigenvalue(q.matrix()) < -1e-8)
    throw parameter_error("decomposable parts must be positive semidefinite");
  Matrix d = p.matrix() + partial_transpose_raw(q.matrix(), q.dims(), Subsystem::B);
  return DecomposableOperator{p, q, HermitianOperator(p.dims(), std::move(d))};
}

inline double detects(const HermitianOperator& w, const DensityMatrix& rho) {
  if (w.dims() != rho.dims())
    throw invalid_operator_error("witness and state dimensions differ");
  return (w.matrix() * rho.matrix()).trace().real();
}

// Builds a witness from an edge state: the sum of the two kernel projectors (one
// partially transposed) is nonnegative on products with a strictly positive margin,
// and lowering it by a fraction of that margin makes the edge state detectable.
inline WitnessConstruction construct_edge_witness(const DensityMatrix& delta,
                                                  const HermitianOperator& c_op,
                                                  double safety = default_safety,
                                                  int restarts = default_restarts,
                                                  std::uint64_t seed = 0) {
  if (!(safety > 0.0) || safety > 1.0) throw parameter_error("safety must lie in (0,1]");
  if (c_op.dims() != delta.dims())
    throw invalid_operator_error("reference operator dimensions differ from the state");
  if (!is_edge(delta, restarts, derive_seed(seed, 0)))
    throw precondition_error("witness construction expects an edge state");
  const BipartiteDims dims = delta.dims();
  const HermitianOperator p = spectral_split(delta).kernel_projector;
  const HermitianOperator q =
      spectral_split(partial_transpose(delta, Subsystem::B)).kernel_projector;
  const Matrix base =
      p.matrix() + partial_transpose_raw(q.matrix(), dims, Subsystem::B);
  const double eps_est =
      min_product_expectation(HermitianOperator(dims, base), restarts, derive_seed(seed, 1))
          .value;
  if (eps_est <= 1e-8)
    throw degenerate_edge_error("no certifiable product-expectation margin");
  const int d = dims.total();
  double c = 1.0;
  if ((c_op.matrix() - Matrix::Identity(d, d)).norm() > 1e-14) {
    c = max_product_expectation(c_op, restarts, derive_seed(seed, 2)).value;
    if (c <= 1e-12)
      throw precondition_error("reference operator vanishes on all product vectors");
  }
  if ((delta.matrix() * c_op.matrix()).trace().real() <= 0.0)
    throw precondition_error("reference operator must overlap the edge state");
  const double eps_used = safety * eps_est;
  Matrix w = base - (eps_used / c) * c_op.matrix();
  return WitnessConstruction{p, q, c_op, eps_used, c, HermitianOperator(dims, std::move(w))};
}

inline WitnessConstruction construct_edge_witness(const DensityMatrix& delta,
                                                  double safety = default_safety,
                                                  int restarts = default_restarts,
                                                  std::uint64_t seed = 0) {
  return construct_edge_witness(delta, identity_operator(delta.dims()), safety, restarts, seed);
}

// Lowers a witness by its product-expectation minimum so it touches the product cone.
inline HermitianOperator shift_to_tangent(const HermitianOperator& w,
                                          double safety = default_safety,
                                          int restarts = default_restarts,
                                          std::uint64_t seed = 0) {
  if (!(safety > 0.0) || safety > 1.0) throw parameter_error("safety must lie in (0,1]");
  const double m = min_product_expectation(w, restarts, seed).value;
  if (m < -tol::zero) throw not_a_witness_error("operator is negative on a product vector");
  if (m <= 0.0) return w;
  const int d = w.dims().total();
  return HermitianOperator(w.dims(), w.matrix() - (safety * m) * Matrix::Identity(d, d));
}

namespace detail {

struct PencilOutcome {
  double value = 0.0;
  Vector minimizer;
  bool constrained = false;
};

// Largest removable multiple along one side: for contracted blocks (Wc, Dc), finds
// min over f with ⟨f|Dc|f⟩ > 0 of the generalized eigenvalue. Directions in the kernel
// of Dc carry no constraint themselves but couple through Wc, so the minimum is taken
// on the Schur complement of Wc over that kernel in Dc-whitened coordinates.
inline PencilOutcome pencil_min(const Matrix& wc, const Matrix& dc, double rank_tol = 1e-11) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((dc + dc.adjoint()) / 2.0);
  const Eigen::VectorXd eigs = es.eigenvalues();
  const Eigen::Index n = eigs.size();
  const double thr = rank_tol * std::max(1.0, n > 0 ? eigs.maxCoeff() : 0.0);
  int r = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (eigs(i) > thr) ++r;
  if (r == 0) return PencilOutcome{};
  Matrix a(n, r);
  Matrix vk(n, n - r);
  int ia = 0, ik = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eigs(i) > thr)
      a.col(ia++) = es.eigenvectors().col(i) / std::sqrt(eigs(i));
    else
      vk.col(ik++) = es.eigenvectors().col(i);
  }
  Matrix s = a.adjoint() * wc * a;
  Matrix wkk_pinv;
  Matrix wkr;
  if (ik > 0) {
    const Matrix wkk = vk.adjoint() * wc * vk;
    wkr = vk.adjoint() * wc * a;
    wkk_pinv = pinv_hermitian(wkk, 1e-10);
    s.noalias() -= wkr.adjoint() * wkk_pinv * wkr;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> ss((s + s.adjoint()) / 2.0);
  const Vector u = ss.eigenvectors().col(0);
  Vector f = a * u;
  if (ik > 0) f.noalias() -= vk * (wkk_pinv * (wkr * u));
  const double norm = f.norm();
  if (norm > 1e-300) f /= norm;
  return PencilOutcome{ss.eigenvalues()(0), std::move(f), true};
}

struct Lambda0Outcome {
  double value = 0.0;
  std::optional<ProductVector> argmin;
};

// Alternating pencil minimization of the largest subtractable multiple of D from W
// over product directions. Degenerate directions (D contracts to zero) impose no
// constraint and are skipped.
inline Lambda0Outcome lambda0_search(const Matrix& w, const Matrix& dmat,
                                     const BipartiteDims& dims, int restarts,
                                     std::uint64_t seed) {
  double best = std::numeric_limits<double>::infinity();
  std::optional<ProductVector> best_vec;
  for (int r = 0; r < restarts; ++r) {
    auto engine = make_engine(derive_seed(seed, static_cast<std::uint64_t>(r)));
    Vector e = haar_vector(dims.d_A, engine);
    Vector f;
    double val = std::numeric_limits<double>::infinity();
    bool have = false;
    for (int sweep = 0; sweep < 200; ++sweep) {
      const PencilOutcome pf = pencil_min(contract_A(w, dims, e), contract_A(dmat, dims, e));
      if (!pf.constrained) break;
      const PencilOutcome pe =
          pencil_min(contract_B(w, dims, pf.minimizer), contract_B(dmat, dims, pf.minimizer));
      if (!pe.constrained) break;
      e = pe.minimizer;
      f = pf.minimizer;
      have = true;
      if (std::abs(pe.value - val) < 1e-13) {
        val = pe.value;
        break;
      }
      val = pe.value;
    }
    if (have && val < best) {
      best = val;
      best_vec = ProductVector(e, f);
    }
  }
  if (!best_vec) return Lambda0Outcome{0.0, std::nullopt};
  return Lambda0Outcome{best, std::move(best_vec)};
}

}  // namespace detail

inline double compute_lambda0(const HermitianOperator& w, const DecomposableOperator& d,
                              int restarts = default_restarts, std::uint64_t seed = 0,
                              double safety = 1.0) {
  if (w.dims() != d.D.dims()) throw invalid_operator_error("pencil operands must share dimensions");
  if (!(safety > 0.0) || safety > 1.0) throw parameter_error("safety must lie in (0,1]");
  if (restarts < 1) throw parameter_error("pencil search needs at least one restart");
  const auto out = detail::lambda0_search(w.matrix(), d.D.matrix(), w.dims(), restarts, seed);
  return std::max(0.0, safety * out.value);
}

inline double compute_lambda0(const HermitianOperator& w, const HermitianOperator& d,
                              int restarts = default_restarts, std::uint64_t seed = 0,
                              double safety = 1.0) {
  if (detail::min_eigenvalue(d.matrix()) < -1e-8)
    throw parameter_error("plain operator must be positive semidefinite to be decomposable");
  if (w.dims() != d.dims()) throw invalid_operator_error("pencil operands must share dimensions");
  if (!(safety > 0.0) || safety > 1.0) throw parameter_error("safety must lie in (0,1]");
  if (restarts < 1) throw parameter_error("pencil search needs at least one restart");
  const auto out = detail::lambda0_search(w.matrix(), d.matrix(), w.dims(), restarts, seed);
  return std::max(0.0, safety * out.value);
}

struct OptimizationStep {
  HermitianOperator D;
  double lambda0 = 0.0;
  int span_pw = 0;
  int span_pwt = 0;
};

enum class OptimalityCertificate { OptimalBySpan, Unknown };

struct WitnessReport {
  HermitianOperator witness;  // final witness, unit Frobenius norm
  ZeroSet zero_set;
  ZeroSet zero_set_pt;
  OptimalityCertificate optimal_certificate = OptimalityCertificate::Unknown;
  std::optional<DensityMatrix> nd_certificate;
  std::vector<OptimizationStep> steps;
  HermitianOperator initial_witness;  // as supplied, unnormalized
  int iterations = 0;
};

namespace detail {

inline double min_sampled_product(const Matrix& w, const BipartiteDims& dims, std::uint64_t seed,
                                  int samples) {
  auto engine = make_engine(seed);
  double best = std::numeric_limits<double>::infinity();
  Vector t(dims.total());
  for (int k = 0; k < samples; ++k) {
    const Vector e = haar_vector(dims.d_A, engine);
    const Vector f = haar_vector(dims.d_B, engine);
    for (int a = 0; a < dims.d_A; ++a) t.segment(a * dims.d_B, dims.d_B) = e(a) * f;
    best = std::min(best, (t.adjoint() * w * t).value().real());
  }
  return best;
}

inline void push_zero(std::vector<ProductVector>& out, const ProductVector& cand) {
  const ProductVector fixed = cand.phase_fixed();
  const Vector tc = fixed.tensor();
  for (const auto& existing : out) {
    if (std::abs((existing.tensor().adjoint() * tc).value()) > 1.0 - tol::duplicate_overlap)
      return;
  }
  out.push_back(fixed);
}

// Candidate decomposable operators that vanish on both recorded zero families.
// When the witness equals its partial transpose the candidates are built to share
// that symmetry, so a single zero family suffices.
inline std::vector<DecomposableOperator> admissible_candidates(
    const std::vector<ProductVector>& zeros_w, const std::vector<ProductVector>& zeros_wt,
    const BipartiteDims& dims, bool symmetric, std::uint64_t seed, int n_random = 20) {
  const int d = dims.total();
  const Matrix eye = Matrix::Identity(d, d);
  std::vector<DecomposableOperator> out;
  auto engine = make_engine(seed);
  const auto push = [&](const Matrix& p, const Matrix& q) {
    const Matrix draw = p + partial_transpose_raw(q, dims, Subsystem::B);
    const double s = draw.norm();
    if (s <= tol::lambda_floor) return;
    out.push_back(make_decomposable(HermitianOperator(dims, p / s), HermitianOperator(dims, q / s)));
  };
  if (symmetric) {
    std::vector<ProductVector> all = zeros_w;
    for (const auto& z : zeros_wt) push_zero(all, z);
    const Matrix basis = product_span_basis(all, d);
    const Matrix pc = eye - basis * basis.adjoint();
    push(pc, pc);
    for (int k = 0; k < n_random; ++k) {
      Vector x = pc * haar_vector(d, engine);
      if (x.norm() <= 1e-6) continue;
      x.normalize();
      const Matrix xx = x * x.adjoint();
      push(xx, xx);
    }
    return out;
  }
  const Matrix ba = product_span_basis(zeros_w, d);
  const Matrix bb = product_span_basis(zeros_wt, d);
  const Matrix pc = eye - ba * ba.adjoint();
  const Matrix qc = eye - bb * bb.adjoint();
  push(pc, qc);
  for (int k = 0; k < n_random; ++k) {
    Vector x = pc * haar_vector(d, engine);
    Vector y = qc * haar_vector(d, engine);
    Matrix p = Matrix::Zero(d, d);
    Matrix q = Matrix::Zero(d, d);
    if (x.norm() > 1e-6) {
      x.normalize();
      p = x * x.adjoint();
    }
    if (y.norm() > 1e-6) {
      y.normalize();
      q = y * y.adjoint();
    }
    push(p, q);
  }
  return out;
}

}  // namespace detail

// Iteratively subtracts decomposable operators that vanish on the witness's product
// zeros. The subtracted amount is the pencil infimum, so the minimizing product vector
// becomes an exact new zero while the old ones persist; each accepted step therefore
// enlarges at least one zero-set span and the loop ends after finitely many steps.
// When both spans reach the full dimension no admissible subtraction is left and
// the witness is certified optimal by spans.
inline WitnessReport optimize_witness(const HermitianOperator& w0, int max_iters = 0,
                                      int restarts = default_restarts, std::uint64_t seed = 0) {
  const BipartiteDims dims = w0.dims();
  const int d = dims.total();
  if (max_iters <= 0) max_iters = 2 * d;
  if (restarts < 1) throw parameter_error("optimization needs at least one restart");
  {
    const double m0 = min_product_expectation(w0, restarts, derive_seed(seed, 1)).value;
    if (m0 < -tol::zero) throw not_a_witness_error("operator is negative on a product vector");
  }
  Matrix w = w0.matrix();
  const bool symmetric =
      (w - partial_transpose_raw(w, dims, Subsystem::B)).norm() <= 1e-9;
  std::vector<ProductVector> zeros_w, zeros_wt;
  std::vector<OptimizationStep> steps;
  OptimalityCertificate cert = OptimalityCertificate::Unknown;
  const int scoring_restarts = std::max(40, restarts / 5);
  const int verify_restarts = 32;
  std::uint64_t stream = 100;
  int stalls = 0;
  int rounds = 0;
  while (static_cast<int>(steps.size()) < max_iters && rounds < 3 * max_iters + 3) {
    ++rounds;
    detail::collect_zeros_into(w, dims, restarts, derive_seed(seed, stream++), tol::zero,
                               zeros_w);
    if (symmetric) {
      zeros_wt.clear();
      for (const auto& z : zeros_w) detail::push_zero(zeros_wt, z.partial_conjugate());
    } else {
      const Matrix wt = partial_transpose_raw(w, dims, Subsystem::B);
      detail::collect_zeros_into(wt, dims, restarts, derive_seed(seed, stream++), tol::zero,
                                 zeros_wt);
    }
    const int span_w = span_dimension(zeros_w);
    const int span_wt = span_dimension(zeros_wt);
    if (span_w == d && span_wt == d) {
      cert = OptimalityCertificate::OptimalBySpan;
      break;
    }
    const std::vector<DecomposableOperator> cands = detail::admissible_candidates(
        zeros_w, zeros_wt, dims, symmetric, derive_seed(seed, stream++));
    struct Scored {
      double lambda;
      const DecomposableOperator* cand;
      ProductVector argmin;
    };
    std::vector<Scored> scored;
    for (const auto& cand : cands) {
      const auto out = detail::lambda0_search(w, cand.D.matrix(), dims, scoring_restarts,
                                              derive_seed(seed, stream++));
      if (out.argmin && out.value > tol::lambda_floor)
        scored.push_back(Scored{out.value, &cand, *out.argmin});
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const Scored& a, const Scored& b) { return a.lambda > b.lambda; });
    bool accepted = false;
    for (const auto& sc : scored) {
      double lam = sc.lambda;
      const Matrix& dm = sc.cand->D.matrix();
      if ((w - lam * dm).norm() <= 1e-8 * w.norm()) continue;  // would erase the witness
      Matrix wn = w - lam * dm;
      // Random sampling plus a dedicated search: subtraction must never push the
      // operator negative on any product vector the scorer failed to see.
      const auto verified_min = [&](const Matrix& m) {
        const double sampled =
            detail::min_sampled_product(m, dims, derive_seed(seed, stream++), 100000);
        if (sampled < -tol::verify_product) return sampled;
        const double searched =
            min_product_expectation(HermitianOperator(dims, m), verify_restarts,
                                    derive_seed(seed, stream++))
                .value;
        return std::min(sampled, searched);
      };
      int halvings = 0;
      double floor_value = verified_min(wn);
      while (floor_value < -tol::verify_product && halvings < 5) {
        lam /= 2.0;
        wn = w - lam * dm;
        floor_value = verified_min(wn);
        ++halvings;
      }
      if (floor_value < -tol::verify_product || lam <= tol::lambda_floor) continue;
      std::vector<ProductVector> znew = zeros_w;
      std::vector<ProductVector> znewt = zeros_wt;
      const Vector tn = sc.argmin.tensor();
      if (std::abs((tn.adjoint() * wn * tn).value().real()) <= tol::zero) {
        detail::push_zero(znew, sc.argmin);
        detail::push_zero(znewt, sc.argmin.partial_conjugate());
      }
      const int s1 = span_dimension(znew);
      const int s2 = span_dimension(znewt);
      if (s1 + s2 > span_w + span_wt) {
        w = std::move(wn);
        zeros_w = std::move(znew);
        zeros_wt = std::move(znewt);
        steps.push_back(OptimizationStep{sc.cand->D, lam, s1, s2});
        accepted = true;
        break;
      }
    }
    if (accepted) {
      stalls = 0;
    } else {
      // A stalled round usually means the zero sets are still incomplete; fresh
      // searches on the next pass often recover the missing directions.
      if (++stalls > 2) break;
    }
  }
  const double wnorm = w.norm();
  if (wnorm > 1e-300) w /= wnorm;
  const int final_span_w = span_dimension(zeros_w);
  const int final_span_wt = span_dimension(zeros_wt);
  WitnessReport report{HermitianOperator(dims, std::move(w)),
                       ZeroSet{std::move(zeros_w), final_span_w},
                       ZeroSet{std::move(zeros_wt), final_span_wt},
                       cert,
                       std::nullopt,
                       std::move(steps),
                       w0,
                       0};
  report.iterations = static_cast<int>(report.steps.size());
  return report;
}

// Report for a witness taken as-is: zero sets are collected but no subtraction runs.
inline WitnessReport basic_report(const HermitianOperator& w, int restarts = default_restarts,
                                  std::uint64_t seed = 0) {
  if (restarts < 1) throw parameter_error("restarts must be at least 1");
  Matrix wm = w.matrix();
  const double wnorm = wm.norm();
  if (wnorm > 1e-300) wm /= wnorm;
  HermitianOperator wn(w.dims(), std::move(wm));
  ZeroSet zs = collect_zero_set(wn, restarts, derive_seed(seed, 1));
  ZeroSet zt = collect_zero_set(partial_transpose(wn, Subsystem::B), restarts,
                                derive_seed(seed, 2));
  const int d = w.dims().total();
  const OptimalityCertificate cert = (zs.span_dim == d && zt.span_dim == d)
                                         ? OptimalityCertificate::OptimalBySpan
                                         : OptimalityCertificate::Unknown;
  return WitnessReport{std::move(wn), std::move(zs),          std::move(zt), cert,
                       std::nullopt,  {},                     w,             0};
}

struct CanonicalFormResult {
  bool ok = false;
  double lambda_star = 0.0;
  double residual = 0.0;
};

namespace detail {

inline Eigen::VectorXd real_vectorize(const Matrix& m) {
  Eigen::VectorXd v(2 * m.size());
  const Eigen::Map<const Vector> flat(m.data(), m.size());
  v.head(m.size()) = flat.real();
  v.tail(m.size()) = flat.imag();
  return v;
}

// Hermitian basis of operators supported on the column span of the given
// orthonormal columns.
inline std::vector<Matrix> hermitian_basis_on(const Matrix& basis, int total_dim) {
  std::vector<Matrix> out;
  const int k = static_cast<int>(basis.cols());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < k; ++i) {
    const Vector ui = basis.col(i);
    out.push_back(ui * ui.adjoint());
    for (int j = i + 1; j < k; ++j) {
      const Vector uj = basis.col(j);
      out.push_back((ui * uj.adjoint() + uj * ui.adjoint()) * inv_sqrt2);
      out.push_back((Complex(0.0, 1.0) * (ui * uj.adjoint() - uj * ui.adjoint())) * inv_sqrt2);
    }
  }
  (void)total_dim;
  return out;
}

}  // namespace detail

// Tests whether W plus the smallest nonnegative multiple of the identity is a sum of
// two positive operators supported on the kernels of delta and of its partial
// transpose (one entering partially transposed). The shift is located by a sign
// bisection of the squared-residual derivative, then the fitted parts are checked
// for positivity and small Frobenius residual.
inline CanonicalFormResult canonical_form_details(const HermitianOperator& w,
                                                  const DensityMatrix& delta,
                                                  int restarts = default_restarts,
                                                  std::uint64_t seed = 0) {
  (void)restarts;
  (void)seed;
  CanonicalFormResult out;
  if (w.dims() != delta.dims()) {
    out.residual = std::numeric_limits<double>::infinity();
    return out;
  }
  const BipartiteDims dims = w.dims();
  const int d = dims.total();
  const Matrix kb = kernel_basis(delta);
  const Matrix ktb =
      kernel_basis(HermitianOperator(dims, partial_transpose_raw(delta.matrix(), dims,
                                                                 Subsystem::B)));
  const std::vector<Matrix> pbasis = detail::hermitian_basis_on(kb, d);
  const std::vector<Matrix> qbasis = detail::hermitian_basis_on(ktb, d);
  const int np = static_cast<int>(pbasis.size());
  const int nq = static_cast<int>(qbasis.size());
  const int cols = np + nq;
  Eigen::MatrixXd a(2 * d * d, std::max(cols, 1));
  for (int k = 0; k < np; ++k) a.col(k) = detail::real_vectorize(pbasis[k]);
  for (int k = 0; k < nq; ++k)
    a.col(np + k) =
        detail::real_vectorize(partial_transpose_raw(qbasis[k], dims, Subsystem::B));
  if (cols == 0) a.setZero();
  const Eigen::VectorXd b0 = detail::real_vectorize(w.matrix());
  const Eigen::VectorXd b1 = detail::real_vectorize(Matrix::Identity(d, d));
  Eigen::MatrixXd ortho(2 * d * d, 0);
  if (cols > 0) {
    const Eigen::MatrixXd gram = a.transpose() * a;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ge(gram);
    int r = 0;
    for (Eigen::Index i = 0; i < ge.eigenvalues().size(); ++i)
      if (ge.eigenvalues()(i) > tol::gram_rank) ++r;
    ortho.resize(2 * d * d, r);
    int k = 0;
    for (Eigen::Index i = 0; i < ge.eigenvalues().size(); ++i) {
      if (ge.eigenvalues()(i) > tol::gram_rank)
        ortho.col(k++) = a * ge.eigenvectors().col(i) / std::sqrt(ge.eigenvalues()(i));
    }
  }
  const Eigen::VectorXd p0 = b0 - ortho * (ortho.transpose() * b0);
  const Eigen::VectorXd p1 = b1 - ortho * (ortho.transpose() * b1);
  const double cross = p0.dot(p1);
  const double quad = p1.squaredNorm();
  const auto slope = [&](double lam) { return cross + lam * quad; };
  const double hi_end = std::max(w.matrix().norm(), 1e-6);
  double lam_star = 0.0;
  if (slope(0.0) >= 0.0) {
    lam_star = 0.0;
  } else if (slope(hi_end) <= 0.0) {
    lam_star = hi_end;
  } else {
    double lo = 0.0, hi = hi_end;
    for (int it = 0; it < 100; ++it) {
      const double mid = (lo + hi) / 2.0;
      if (slope(mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    lam_star = (lo + hi) / 2.0;
  }
  out.lambda_star = lam_star;
  out.residual = (p0 + lam_star * p1).norm();
  if (out.residual > tol::residual) return out;
  if (cols == 0) {
    out.ok = true;  // the zero decomposition already fits
    return out;
  }
  const Eigen::VectorXd target = b0 + lam_star * b1;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  const Eigen::VectorXd coef = cod.solve(target);
  Matrix x = Matrix::Zero(d, d);
  Matrix y = Matrix::Zero(d, d);
  for (int k = 0; k < np; ++k) x += coef(k) * pbasis[k];
  for (int k = 0; k < nq; ++k) y += coef(np + k) * qbasis[k];
  out.ok = detail::min_eigenvalue(x) >= -1e-8 && detail::min_eigenvalue(y) >= -1e-8 &&
           lam_star >= -1e-12;
  return out;
}

inline bool canonical_form_check(const HermitianOperator& w, const DensityMatrix& delta,
                                 int restarts = default_restarts, std::uint64_t seed = 0) {
  return canonical_form_details(w, delta, restarts, seed).ok;
}

// First candidate state that stays positive under partial transposition yet is
// detected: such a state certifies that no decomposable operator can reproduce W.
inline std::optional<DensityMatrix> nondecomposability_certificate(
    const HermitianOperator& w, const std::vector<DensityMatrix>& candidates) {
  for (const auto& rho : candidates) {
    if (rho.dims() != w.dims()) continue;
    if (!ppt_check(rho).is_ppt) continue;
    if (detects(w, rho) < -1e-10) return rho;
  }
  return std::nullopt;
}

// Necessary (never sufficient) extremality screen: either the witness is optimal by
// spans and admits the kernel-supported canonical form for delta, or it is a projector
// or partially transposed projector up to positive scale.
inline bool extremality_necessary(const WitnessReport& report, const DensityMatrix& delta,
                                  int restarts = default_restarts, std::uint64_t seed = 0) {
  if (report.optimal_certificate == OptimalityCertificate::OptimalBySpan &&
      canonical_form_check(report.witness, delta, restarts, seed))
    return true;
  const auto scaled_projector = [](const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    const double s = es.eigenvalues().maxCoeff();
    if (s <= tol::lambda_floor) return false;
    const Matrix n = m / s;
    return (n * n - n).norm() <= tol::residual;
  };
  if (scaled_projector(report.witness.matrix())) return true;
  return scaled_projector(
      partial_transpose_raw(report.witness.matrix(), report.witness.dims(), Subsystem::B));
}

}  // namespace edgewit
