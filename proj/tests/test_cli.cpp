#include "catch2/catch_amalgamated.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <edgewit/edgewit.hpp>

using namespace edgewit;
namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "edgewit_cli_tests";
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(EDGEWIT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}

std::string write_state(const std::string& name, const HermitianOperator& op) {
  const fs::path path = work_dir() / name;
  save_json_file(path.string(), operator_to_json(op));
  return path.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DensityMatrix bell_state() {
  Vector phi = Vector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  return DensityMatrix(BipartiteDims(2, 2), Matrix(phi * phi.adjoint()));
}

}  // namespace

TEST_CASE("analyze reports a separable state as fully decomposable", "[cli]") {
  const DensityMatrix rho(BipartiteDims(2, 2), Matrix(Matrix::Identity(4, 4) / 4.0));
  const std::string input = write_state("separable.json", rho);
  const std::string out = (work_dir() / "separable_report.json").string();
  REQUIRE(run_cli("analyze " + input + " --restarts 60 --out " + out) == 0);
  const Json report = load_json_file(out);
  REQUIRE(report.at("is_ppt").get<bool>());
  REQUIRE_FALSE(report.at("is_edge").get<bool>());
  REQUIRE(report.at("decomposition").at("p").get<double>() <= 1e-8);
  REQUIRE(report.at("decomposition").at("reconstruction_error").get<double>() <= 1e-8);
}

TEST_CASE("analyze stops at the PPT verdict for entangled pure states", "[cli]") {
  const std::string input = write_state("bell.json", bell_state());
  const std::string out = (work_dir() / "bell_report.json").string();
  REQUIRE(run_cli("analyze " + input + " --out " + out) == 0);
  const Json report = load_json_file(out);
  REQUIRE_FALSE(report.at("is_ppt").get<bool>());
  REQUIRE(report.at("min_pt_eigenvalue").get<double>() < -0.4);
  REQUIRE_FALSE(report.contains("is_edge"));
  REQUIRE_FALSE(report.contains("decomposition"));
}

TEST_CASE("broken inputs exit with the parse code", "[cli]") {
  REQUIRE(run_cli("analyze " + (work_dir() / "no_such_file.json").string()) == 2);

  const fs::path garbage = work_dir() / "garbage.json";
  save_text_file(garbage.string(), "{ not json ]");
  REQUIRE(run_cli("analyze " + garbage.string()) == 2);

  const fs::path skew = work_dir() / "skew.json";
  save_text_file(skew.string(),
                 R"({"dims":[2,2],"matrix":[[[1,0],[1,0],[0,0],[0,0]],)"
                 R"([[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],)"
                 R"([[0,0],[0,0],[0,0],[0,0]]]})");
  REQUIRE(run_cli("analyze " + skew.string()) == 2);

  const std::string not_normalized =
      write_state("unnormalized.json",
                  HermitianOperator(BipartiteDims(2, 2), Matrix(Matrix::Identity(4, 4))));
  REQUIRE(run_cli("analyze " + not_normalized) == 2);
}

TEST_CASE("witness requires an edge component and a PPT input", "[cli]") {
  Matrix diag = Matrix::Zero(4, 4);
  diag(0, 0) = diag(3, 3) = 0.5;
  const std::string separable =
      write_state("diag_mixture.json", DensityMatrix(BipartiteDims(2, 2), diag));
  REQUIRE(run_cli("witness " + separable + " --restarts 60") == 4);

  const std::string bell = write_state("bell_npt.json", bell_state());
  REQUIRE(run_cli("witness " + bell) == 3);
}

TEST_CASE("witness emits a certified report for the benchmark state", "[cli]") {
  const std::string input = write_state("family_half.json", rho_b(0.5));
  const std::string out = (work_dir() / "family_witness.json").string();
  REQUIRE(run_cli("witness " + input + " --restarts 120 --out " + out) == 0);
  const Json report = load_json_file(out);
  REQUIRE(report.contains("witness"));
  REQUIRE(report.at("iterations").get<int>() == 0);
  REQUIRE_FALSE(report.at("nd_certificate").is_null());
  // the certificate is a PPT state the witness catches
  const HermitianOperator cert = operator_from_json(report.at("nd_certificate"));
  const HermitianOperator w = operator_from_json(report.at("witness"));
  REQUIRE(detects(w, DensityMatrix(cert)) < -1e-10);
  REQUIRE_FALSE(report.contains("map"));
}

TEST_CASE("witness attaches the induced map on request", "[cli]") {
  const std::string input = write_state("family_half_map.json", rho_b(0.5));
  const std::string out = (work_dir() / "family_witness_map.json").string();
  REQUIRE(run_cli("witness " + input + " --restarts 120 --to-map --out " + out) == 0);
  const Json report = load_json_file(out);
  REQUIRE(report.contains("map"));
  REQUIRE(report.at("map").at("d_in").get<int>() == 2);
  REQUIRE(report.at("map").at("d_out").get<int>() == 4);
  const ChoiMap map = choi_from_json(report.at("map"));
  REQUIRE(detect_via_map(map, rho_b(0.5)) < -1e-10);
}

TEST_CASE("two scans with one seed write identical files", "[cli]") {
  const std::string csv1 = (work_dir() / "scan_a.csv").string();
  const std::string csv2 = (work_dir() / "scan_b.csv").string();
  const std::string args = "scan --grid-steps 7 --restarts 100 --seed 5 --out ";
  REQUIRE(run_cli(args + csv1) == 0);
  REQUIRE(run_cli(args + csv2) == 0);
  const std::string a = read_file(csv1);
  REQUIRE(a == read_file(csv2));
  REQUIRE(a.rfind("b_prime,tr_W_rho,min_eig_map,detected_by_witness,detected_by_map\n", 0) == 0);

  const Json header = load_json_file((work_dir() / "scan_a.json").string());
  REQUIRE(header.at("b_source").get<double>() == 0.5);
  REQUIRE(header.at("settings").at("restarts").get<int>() == 100);
  REQUIRE(header.at("csv_path").get<std::string>() == csv1);
  REQUIRE_FALSE(header.at("b_detected_max_witness").is_null());
}

TEST_CASE("flag and option errors use distinct exit codes", "[cli]") {
  REQUIRE(run_cli("--help") == 0);
  REQUIRE(run_cli("scan --no-such-flag") == 2);
  REQUIRE(run_cli("") == 2);  // a subcommand is required
  const std::string input = write_state("family_half_safety.json", rho_b(0.5));
  REQUIRE(run_cli("witness " + input + " --safety 1.5") == 3);
  REQUIRE(run_cli("analyze " + input + " --restarts 0") == 3);
}
