#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include <edgewit/edgewit.hpp>

namespace {

using edgewit::Json;
using edgewit::RunConfig;

void emit(const Json& result, const RunConfig& cfg) {
  if (cfg.output_path.empty())
    std::cout << result.dump(2) << "\n";
  else
    edgewit::save_json_file(cfg.output_path, result);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edge-state analysis and entanglement-witness toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  app.add_option("--seed", cfg.seed, "base seed for all randomized searches");
  app.add_option("--restarts", cfg.restarts, "restarts per product-vector search");
  app.add_option("--rank-tol", cfg.tolerances.rank_tol, "relative rank cutoff");
  app.add_option("--zero-tol", cfg.tolerances.zero_tol, "zero acceptance threshold");
  app.add_option("--safety", cfg.safety, "fraction of each bound actually used, in (0, 1]");
  app.add_option("--out", cfg.output_path, "output file (default: stdout; scan: scan.csv)");

  std::string analyze_input;
  CLI::App* analyze = app.add_subcommand("analyze", "PPT and edge analysis of a state file");
  analyze->fallthrough();  // global options may follow the subcommand
  analyze->add_option("input", analyze_input, "JSON operator file")->required();

  std::string witness_input;
  bool optimize = false;
  bool to_map = false;
  CLI::App* witness = app.add_subcommand("witness", "construct a witness from a state file");
  witness->fallthrough();
  witness->add_option("input", witness_input, "JSON operator file")->required();
  witness->add_flag("--optimize", optimize, "sharpen the witness by subtraction");
  witness->add_flag("--to-map", to_map, "also emit the induced positive map");

  double b_source = 0.5;
  int grid_steps = 39;
  bool scan_optimize = false;
  CLI::App* scan = app.add_subcommand("scan", "detection sweep over the benchmark family");
  scan->fallthrough();
  scan->add_option("--b-source", b_source, "family parameter of the source state, in (0, 1)");
  scan->add_option("--grid-steps", grid_steps, "number of interior grid points");
  scan->add_flag("--optimize", scan_optimize, "sharpen the witness before sweeping");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? edgewit::exit_success : edgewit::exit_parse;
  }

  try {
    if (analyze->parsed()) {
      emit(edgewit::cmd_analyze(analyze_input, cfg), cfg);
    } else if (witness->parsed()) {
      emit(edgewit::cmd_witness(witness_input, cfg, optimize, to_map), cfg);
    } else if (scan->parsed()) {
      std::cout << edgewit::cmd_scan(cfg, b_source, grid_steps, scan_optimize).dump(2) << "\n";
    }
  } catch (const edgewit::no_edge_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return edgewit::exit_no_edge;
  } catch (const edgewit::invalid_operator_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return edgewit::exit_parse;
  } catch (const edgewit::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return edgewit::exit_parse;
  } catch (const edgewit::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return edgewit::exit_precondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return edgewit::exit_parse;
  }
  return edgewit::exit_success;
}
