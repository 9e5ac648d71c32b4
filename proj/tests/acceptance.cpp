// Acceptance gate: nine end-to-end checks, one pass/fail line each, with a wall-clock
// budget per check. Exit status is the number of failed checks.
#include <edgewit/edgewit.hpp>

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace edgewit;

namespace {

Matrix random_hermitian(int d, std::mt19937_64& engine) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Complex(gauss(engine), gauss(engine));
  return (g + g.adjoint()) / 2.0;
}

double min_eig(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Independent rank count (relative eigenvalue cutoff, floored at one).
int eigen_rank(const Matrix& m, double cutoff) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  int r = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i)) > cutoff * scale) ++r;
  return r;
}

double trace_product(const Matrix& a, const Matrix& b) { return (a * b).trace().real(); }

DensityMatrix bell_phi_plus() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return DensityMatrix(BipartiteDims{2, 2}, v * v.adjoint());
}

// Shared fixtures, built lazily so each check's timer covers what it introduces:
// the witness construction is paid by the first caller, the optimization by the next.
const WitnessConstruction& family_witness() {
  static const WitnessConstruction built = construct_edge_witness(rho_b(0.5), 0.9, 200, 0);
  return built;
}

const WitnessReport& optimized_report() {
  static const WitnessReport report = optimize_witness(family_witness().W, 0, 200, 0);
  return report;
}

bool check_partial_transpose_fixtures() {
  bool ok = true;
  const HermitianOperator pt = partial_transpose(bell_phi_plus(), Subsystem::B);
  Eigen::SelfAdjointEigenSolver<Matrix> es(pt.matrix(), Eigen::EigenvaluesOnly);
  const double expected[4] = {-0.5, 0.5, 0.5, 0.5};
  for (int i = 0; i < 4; ++i) ok &= std::abs(es.eigenvalues()(i) - expected[i]) <= 1e-10;
  const std::vector<BipartiteDims> shapes{{2, 2}, {2, 3}, {2, 4}, {3, 3}};
  auto engine = make_engine(derive_seed(100, 1));
  for (int k = 0; k < 1000 && ok; ++k) {
    const BipartiteDims dims = shapes[k % shapes.size()];
    const Matrix m = random_hermitian(dims.total(), engine);
    const HermitianOperator x(dims, m);
    const Subsystem side = (k % 2 == 0) ? Subsystem::B : Subsystem::A;
    const Matrix twice = partial_transpose(partial_transpose(x, side), side).matrix();
    ok &= (twice - m).cwiseAbs().maxCoeff() <= 1e-12;
  }
  return ok;
}

bool check_family_validity() {
  bool ok = true;
  for (int i = 0; i <= 10; ++i) {
    const DensityMatrix rho = rho_b(i / 10.0);
    ok &= std::abs(rho.matrix().trace().real() - 1.0) <= 1e-12;
    ok &= min_eig(rho.matrix()) >= -1e-12;
    ok &= ppt_check(rho).is_ppt;
  }
  return ok;
}

bool check_edge_certification() {
  const RangeSearchResult res = range_product_search(rho_b(0.5), 200, derive_seed(300, 0));
  bool ok = !res.vector.has_value() && res.f_min > 1e-6;
  ok &= is_edge(rho_b(0.5), 200, derive_seed(300, 1));
  ok &= !is_edge(rho_b(0.0), 200, derive_seed(300, 2));
  ok &= !is_edge(rho_b(1.0), 200, derive_seed(300, 3));
  return ok;
}

bool check_witness_tilt_and_positivity() {
  const WitnessConstruction& built = family_witness();
  const DensityMatrix delta = rho_b(0.5);
  const double lhs = trace_product(built.W.matrix(), delta.matrix());
  const double rhs = -(built.epsilon / built.c) * trace_product(delta.matrix(), built.C.matrix());
  bool ok = std::abs(lhs - rhs) <= 1e-10;
  const BipartiteDims dims{2, 4};
  for (int i = 0; i < 10000 && ok; ++i) {
    const DensityMatrix sigma = sample_separable_mixture(dims, derive_seed(400, i));
    ok &= detects(built.W, sigma) >= -1e-8;
  }
  return ok;
}

bool check_decomposition_reconstruction() {
  const BipartiteDims dims{2, 4};
  const DensityMatrix base = rho_b(0.5);
  bool ok = true;
  for (int i = 0; i < 20 && ok; ++i) {
    const DensityMatrix sep = sample_separable_mixture(dims, derive_seed(500, i));
    const double t = 0.25 + 0.5 * (i / 19.0);
    Matrix m = t * base.matrix() + (1.0 - t) * sep.matrix();
    m = (m + m.adjoint()) / 2.0;
    const DensityMatrix mix(dims, m);
    ok &= ppt_check(mix).is_ppt;
    const int r = eigen_rank(m, 1e-9);
    const int rpt = eigen_rank(partial_transpose(mix, Subsystem::B).matrix(), 1e-9);
    const EdgeDecomposition dec = decompose_edge(mix, 200, derive_seed(550, i));
    ok &= static_cast<int>(dec.steps.size()) <= r + rpt;
    ok &= (reconstruct_decomposition(dec, dims) - m).norm() <= 1e-8;
  }
  return ok;
}

bool check_optimization_monotonicity() {
  const WitnessReport& report = optimized_report();
  bool ok = report.iterations >= 1 && report.iterations <= 16;
  ok &= static_cast<int>(report.steps.size()) == report.iterations;
  int prev_span = 0;  // the starting witness is strictly positive on products: empty zero sets
  for (const auto& step : report.steps) {
    const int span = step.span_pw + step.span_pwt;
    ok &= step.lambda0 > 0.0;
    ok &= span > prev_span;
    prev_span = span;
  }
  if (!report.steps.empty())
    ok &= report.steps.back().span_pw == 8 && report.steps.back().span_pwt == 8;
  int initially_detected = 0;
  for (double b : default_family_grid(39)) {
    const DensityMatrix rho = rho_b(b);
    if (detects(report.initial_witness, rho) < -1e-10) {
      ++initially_detected;
      ok &= detects(report.witness, rho) < -1e-10;
    }
  }
  ok &= initially_detected > 0;
  return ok;
}

bool check_map_containment_and_fixtures() {
  const WitnessReport& report = optimized_report();
  const ChoiMap map = witness_to_map(report.witness);
  bool ok = true;
  int witness_detected = 0;
  for (double b : default_family_grid(39)) {
    const DensityMatrix rho = rho_b(b);
    if (detects(report.witness, rho) < -1e-10) {
      ++witness_detected;
      ok &= detect_via_map(map, rho) < -1e-10;
    }
  }
  ok &= witness_detected > 0;
  auto engine = make_engine(derive_seed(700, 0));
  const auto roundtrip_exact = [](const HermitianOperator& x) {
    return (map_to_witness(witness_to_map(x)).matrix() - x.matrix()).cwiseAbs().maxCoeff() <=
           1e-12;
  };
  ok &= roundtrip_exact(family_witness().W);
  ok &= roundtrip_exact(report.witness);
  for (int k = 0; k < 5; ++k) {
    const BipartiteDims dims = (k % 2 == 0) ? BipartiteDims{2, 4} : BipartiteDims{3, 3};
    ok &= roundtrip_exact(HermitianOperator(dims, random_hermitian(dims.total(), engine)));
  }
  // The matrix of the transposition map: assemble it column by column from images of
  // matrix units, and compare against the swap operator.
  Matrix swap = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) swap(2 * j + i, 2 * i + j) = 1.0;
  Matrix choi_t = Matrix::Zero(4, 4);
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2) {
      Matrix unit = Matrix::Zero(2, 2);
      unit(a1, a2) = 1.0;
      const Matrix image = unit.transpose();
      for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2) choi_t(2 * a1 + b1, 2 * a2 + b2) = image(b1, b2);
    }
  ok &= (choi_t - swap).cwiseAbs().maxCoeff() <= 1e-15;
  const ChoiMap transposition{HermitianOperator(BipartiteDims{2, 2}, swap), 2, 2};
  for (int k = 0; k < 20; ++k) {
    const Matrix x = random_hermitian(2, engine);
    ok &= (apply_map(transposition, x) - x.transpose()).cwiseAbs().maxCoeff() <= 1e-12;
  }
  return ok;
}

bool check_ppt_closure_low_dims() {
  bool ok = true;
  for (int i = 0; i < 1000 && ok; ++i)
    ok &= ppt_check(sample_separable_mixture(BipartiteDims{2, 2}, derive_seed(810, i))).is_ppt;
  for (int i = 0; i < 1000 && ok; ++i)
    ok &= ppt_check(sample_separable_mixture(BipartiteDims{2, 3}, derive_seed(820, i))).is_ppt;
  ok &= !ppt_check(bell_phi_plus()).is_ppt;
  auto engine = make_engine(derive_seed(830, 0));
  int found = 0;
  for (int guard = 0; found < 50 && guard < 5000 && ok; ++guard) {
    const Vector v = haar_vector(4, engine);
    Eigen::Matrix2cd m;
    m << v(0), v(1), v(2), v(3);
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m);
    if (svd.singularValues()(1) < 0.05) continue;  // nearly a product state: redraw
    ++found;
    ok &= !ppt_check(DensityMatrix(BipartiteDims{2, 2}, v * v.adjoint())).is_ppt;
  }
  ok &= found == 50;
  return ok;
}

bool check_scan_determinism() {
  const fs::path dir = fs::temp_directory_path() / "edgewit_acceptance";
  fs::create_directories(dir);
  RunConfig cfg;
  cfg.seed = 5;
  cfg.restarts = 120;
  cfg.output_path = (dir / "scan_run1.csv").string();
  cmd_scan(cfg, 0.5, 39, false);
  cfg.output_path = (dir / "scan_run2.csv").string();
  cmd_scan(cfg, 0.5, 39, false);
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };
  const std::string first = slurp(dir / "scan_run1.csv");
  const std::string second = slurp(dir / "scan_run2.csv");
  return !first.empty() && first == second;
}

}  // namespace

int main() {
  int failures = 0;
  const auto run = [&failures](int index, const char* name, double budget_s,
                               const std::function<bool()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string note;
    try {
      ok = body();
      if (!ok) note = "checks failed";
    } catch (const std::exception& e) {
      note = std::string("exception: ") + e.what();
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > budget_s) {
      ok = false;
      note += note.empty() ? "over budget" : "; over budget";
    }
    std::printf("criterion %d (%s): %s  [%.2fs, budget %.0fs]%s%s\n", index, name,
                ok ? "PASS" : "FAIL", dt, budget_s, note.empty() ? "" : " -- ", note.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  };

  run(1, "partial transpose fixtures", 5.0, check_partial_transpose_fixtures);
  run(2, "benchmark family validity", 5.0, check_family_validity);
  run(3, "edge certification", 60.0, check_edge_certification);
  run(4, "witness tilt and positivity on separables", 120.0, check_witness_tilt_and_positivity);
  run(5, "decomposition reconstruction", 600.0, check_decomposition_reconstruction);
  run(6, "optimization monotonicity and grid containment", 900.0, check_optimization_monotonicity);
  run(7, "map containment and transposition fixture", 300.0, check_map_containment_and_fixtures);
  run(8, "PPT closure at low dimensions", 30.0, check_ppt_closure_low_dims);
  run(9, "scan determinism", 30.0, check_scan_determinism);

  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures;
}
