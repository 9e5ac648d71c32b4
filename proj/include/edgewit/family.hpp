#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "choi.hpp"
#include "operators.hpp"
#include "random.hpp"
#include "witness.hpp"

namespace edgewit {

// Two-qubit-times-four family on C2 x C4, parametrized on [0,1]: positive under
// partial transposition throughout, separable exactly at the endpoints, edge in
// between. Basis index is 4a + k for |a> x |k>.
inline DensityMatrix rho_b(double b) {
  if (!(b >= 0.0) || !(b <= 1.0)) throw parameter_error("family parameter must lie in [0,1]");
  Matrix m = Matrix::Zero(8, 8);
  for (int k = 0; k < 4; ++k) m(k, k) = b;
  for (int k = 0; k < 3; ++k) {
    m(k, 5 + k) = b;
    m(5 + k, k) = b;
  }
  m(4, 4) = (1.0 + b) / 2.0;
  m(7, 7) = (1.0 + b) / 2.0;
  const double off = std::sqrt(1.0 - b * b) / 2.0;
  m(4, 7) = off;
  m(7, 4) = off;
  m(5, 5) = b;
  m(6, 6) = b;
  m /= 7.0 * b + 1.0;
  return DensityMatrix(BipartiteDims(2, 4), m);
}

inline std::vector<double> default_family_grid(int steps = 39) {
  if (steps < 1) throw parameter_error("grid needs at least one point");
  std::vector<double> grid(steps);
  for (int k = 1; k <= steps; ++k) grid[k - 1] = static_cast<double>(k) / (steps + 1);
  return grid;
}

struct FamilyScanRow {
  double b_source = 0.0;
  std::vector<double> grid;
  std::vector<double> tr_w_rho;
  std::vector<double> min_eig_map;
  std::vector<bool> detected_by_witness;
  std::vector<bool> detected_by_map;
  std::optional<double> b_detected_max_witness;
  std::optional<double> b_detected_max_map;
};

// Builds a witness from the family member at b_source (optionally optimized),
// converts it to a map, and evaluates both detectors over the grid.
inline FamilyScanRow scan_family(double b_source, const std::vector<double>& grid, bool optimize,
                                 int restarts = default_restarts, std::uint64_t seed = 0,
                                 double safety = default_safety) {
  if (!(b_source > 0.0) || !(b_source < 1.0))
    throw parameter_error("source parameter must lie strictly inside (0,1)");
  const DensityMatrix delta = rho_b(b_source);
  const WitnessConstruction built =
      construct_edge_witness(delta, safety, restarts, derive_seed(seed, 101));
  HermitianOperator w = built.W;
  if (optimize) w = optimize_witness(w, 0, restarts, derive_seed(seed, 102)).witness;
  const ChoiMap map = witness_to_map(w);
  FamilyScanRow row;
  row.b_source = b_source;
  row.grid = grid;
  for (double bp : grid) {
    const DensityMatrix rho = rho_b(bp);
    const double tr = detects(w, rho);
    const double me = detect_via_map(map, rho);
    row.tr_w_rho.push_back(tr);
    row.min_eig_map.push_back(me);
    const bool dw = tr < -1e-10;
    const bool dm = me < -1e-10;
    row.detected_by_witness.push_back(dw);
    row.detected_by_map.push_back(dm);
    if (dw && (!row.b_detected_max_witness || bp > *row.b_detected_max_witness))
      row.b_detected_max_witness = bp;
    if (dm && (!row.b_detected_max_map || bp > *row.b_detected_max_map))
      row.b_detected_max_map = bp;
  }
  return row;
}

namespace detail {

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

}  // namespace detail

inline std::string scan_row_to_csv(const FamilyScanRow& row) {
  std::string out = "b_prime,tr_W_rho,min_eig_map,detected_by_witness,detected_by_map\n";
  for (std::size_t i = 0; i < row.grid.size(); ++i) {
    out += detail::format_number(row.grid[i]);
    out += ',';
    out += detail::format_number(row.tr_w_rho[i]);
    out += ',';
    out += detail::format_number(row.min_eig_map[i]);
    out += ',';
    out += row.detected_by_witness[i] ? '1' : '0';
    out += ',';
    out += row.detected_by_map[i] ? '1' : '0';
    out += '\n';
  }
  return out;
}

// Candidate pool for nondecomposability certificates: the known PPT family first
// (when the dimensions fit), then random PPT states.
inline std::vector<DensityMatrix> default_nd_candidates(const BipartiteDims& dims,
                                                        std::uint64_t seed = 0,
                                                        int n_random = 1000) {
  std::vector<DensityMatrix> out;
  if (dims == BipartiteDims(2, 4)) {
    for (double b : default_family_grid()) out.push_back(rho_b(b));
  }
  for (int k = 0; k < n_random; ++k)
    out.push_back(sample_random_ppt(dims, derive_seed(seed, static_cast<std::uint64_t>(k))));
  return out;
}

}  // namespace edgewit
