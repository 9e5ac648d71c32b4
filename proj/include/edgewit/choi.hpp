#pragma once

#include "operators.hpp"
#include "spectral.hpp"

namespace edgewit {

// A linear map packaged as its representing operator: the map sends inputs on the
// first factor to outputs on the second via a partial-trace contraction.
struct ChoiMap {
  HermitianOperator choi;
  int d_in = 0;
  int d_out = 0;
};

inline ChoiMap witness_to_map(const HermitianOperator& w) {
  return ChoiMap{w, w.dims().d_A, w.dims().d_B};
}

inline HermitianOperator map_to_witness(const ChoiMap& m) { return m.choi; }

// Λ(X)(b,b') = Σ_{a1,a2} X(a1,a2) · C[(a1,b),(a2,b')], i.e. Tr_A[(X^T ⊗ 1) · C].
inline Matrix apply_map(const ChoiMap& m, const Matrix& x) {
  if (x.rows() != m.d_in || x.cols() != m.d_in)
    throw invalid_operator_error("map input has the wrong dimension");
  const Matrix& c = m.choi.matrix();
  Matrix out = Matrix::Zero(m.d_out, m.d_out);
  for (int a1 = 0; a1 < m.d_in; ++a1)
    for (int a2 = 0; a2 < m.d_in; ++a2)
      out.noalias() += x(a1, a2) * c.block(a1 * m.d_out, a2 * m.d_out, m.d_out, m.d_out);
  return out;
}

// Minimal eigenvalue of the map extended over the first factor of rho. The map eats
// the A side, so the factors are swapped first and the map is applied blockwise to
// the trailing subsystem; a negative result certifies entanglement.
inline double detect_via_map(const ChoiMap& m, const DensityMatrix& rho) {
  if (rho.dims().d_A != m.d_in)
    throw invalid_operator_error("state dimension does not match the map input");
  const BipartiteDims dims = rho.dims();
  const Matrix swapped = swap_factors_raw(rho.matrix(), dims);
  const int db = dims.d_B;
  Matrix z = Matrix::Zero(db * m.d_out, db * m.d_out);
  for (int b1 = 0; b1 < db; ++b1)
    for (int b2 = 0; b2 < db; ++b2) {
      const Matrix block = swapped.block(b1 * dims.d_A, b2 * dims.d_A, dims.d_A, dims.d_A);
      z.block(b1 * m.d_out, b2 * m.d_out, m.d_out, m.d_out) = apply_map(m, block);
    }
  return detail::min_eigenvalue(z);
}

}  // namespace edgewit
