#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "choi.hpp"
#include "edge.hpp"
#include "family.hpp"
#include "json_io.hpp"
#include "witness.hpp"

namespace edgewit {

inline constexpr int exit_success = 0;
inline constexpr int exit_parse = 2;
inline constexpr int exit_precondition = 3;
inline constexpr int exit_no_edge = 4;

class no_edge_error : public error {
 public:
  using error::error;
};

struct Tolerances {
  double rank_tol = tol::rank;
  double zero_tol = tol::zero;
  double psd_floor = tol::psd_floor;
};

struct RunConfig {
  std::uint64_t seed = 1;
  int restarts = default_restarts;
  Tolerances tolerances;
  double safety = default_safety;
  std::string output_path;

  void validate() const {
    if (restarts < 1) throw parameter_error("restarts must be at least 1");
    if (!(tolerances.rank_tol > 0.0) || !(tolerances.zero_tol > 0.0) ||
        !(tolerances.psd_floor > 0.0))
      throw parameter_error("tolerances must be positive");
    if (!(safety > 0.0) || safety > 1.0) throw parameter_error("safety must lie in (0, 1]");
  }
};

// PPT test plus, when it passes, the edge diagnosis and a decomposition summary.
inline Json cmd_analyze(const std::string& input_path, const RunConfig& cfg) {
  cfg.validate();
  const DensityMatrix rho = density_from_json(load_json_file(input_path));
  const PptResult ppt = ppt_check(rho);
  Json out;
  out["is_ppt"] = ppt.is_ppt;
  out["min_pt_eigenvalue"] = ppt.min_pt_eigenvalue;
  if (!ppt.is_ppt) return out;
  out["is_edge"] = is_edge(rho, cfg.restarts, derive_seed(cfg.seed, 11));
  const EdgeDecomposition dec = decompose_edge(rho, cfg.restarts, derive_seed(cfg.seed, 12),
                                               cfg.tolerances.rank_tol, cfg.tolerances.zero_tol);
  const Matrix recon = reconstruct_decomposition(dec, rho.dims());
  out["decomposition"] = Json{{"p", dec.p},
                              {"components", static_cast<int>(dec.separable_part.size())},
                              {"steps", static_cast<int>(dec.steps.size())},
                              {"reconstruction_error", (recon - rho.matrix()).norm()}};
  return out;
}

// Decompose, build a witness from the edge remainder, optionally sharpen it, and
// attach a nondecomposability certificate when some candidate state exposes one.
inline Json cmd_witness(const std::string& input_path, const RunConfig& cfg, bool optimize,
                        bool to_map) {
  cfg.validate();
  const DensityMatrix rho = density_from_json(load_json_file(input_path));
  if (!ppt_check(rho).is_ppt)
    throw precondition_error("input state fails the positive-partial-transpose test");
  const EdgeDecomposition dec = decompose_edge(rho, cfg.restarts, derive_seed(cfg.seed, 21),
                                               cfg.tolerances.rank_tol, cfg.tolerances.zero_tol);
  if (!dec.edge_part) throw no_edge_error("no edge component");
  const WitnessConstruction built =
      construct_edge_witness(*dec.edge_part, cfg.safety, cfg.restarts, derive_seed(cfg.seed, 22));
  WitnessReport report =
      optimize ? optimize_witness(built.W, 0, cfg.restarts, derive_seed(cfg.seed, 23))
               : basic_report(built.W, cfg.restarts, derive_seed(cfg.seed, 23));
  std::vector<DensityMatrix> candidates;
  candidates.push_back(rho);
  candidates.push_back(*dec.edge_part);
  std::vector<DensityMatrix> pool = default_nd_candidates(rho.dims(), derive_seed(cfg.seed, 24));
  for (DensityMatrix& c : pool) candidates.push_back(std::move(c));
  report.nd_certificate = nondecomposability_certificate(report.witness, candidates);
  Json out = witness_report_to_json(report);
  if (to_map) out["map"] = choi_to_json(witness_to_map(report.witness));
  return out;
}

// Sweep the benchmark family, write the per-point CSV plus a JSON run header
// next to it, and return the header.
inline Json cmd_scan(const RunConfig& cfg, double b_source, int grid_steps, bool optimize) {
  cfg.validate();
  const std::vector<double> grid = default_family_grid(grid_steps);
  const FamilyScanRow row = scan_family(b_source, grid, optimize, cfg.restarts, cfg.seed,
                                        cfg.safety);
  const std::string csv_path = cfg.output_path.empty() ? "scan.csv" : cfg.output_path;
  save_text_file(csv_path, scan_row_to_csv(row));
  Json header;
  header["b_source"] = b_source;
  header["seed"] = cfg.seed;
  header["settings"] = Json{{"restarts", cfg.restarts},   {"safety", cfg.safety},
                            {"optimize", optimize},       {"grid_steps", grid_steps},
                            {"rank_tol", cfg.tolerances.rank_tol},
                            {"zero_tol", cfg.tolerances.zero_tol}};
  header["b_detected_max_witness"] =
      row.b_detected_max_witness ? Json(*row.b_detected_max_witness) : Json(nullptr);
  header["b_detected_max_map"] =
      row.b_detected_max_map ? Json(*row.b_detected_max_map) : Json(nullptr);
  header["csv_path"] = csv_path;
  std::filesystem::path header_path(csv_path);
  header_path.replace_extension(".json");
  save_json_file(header_path.string(), header);
  return header;
}

}  // namespace edgewit
