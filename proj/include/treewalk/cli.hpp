#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace treewalk {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitSymbolSingular = 2,
  kExitInvalidInput = 3,
  kExitResidualBreach = 4,
};

struct RunConfig {
  std::string command;
  std::string walk_path;
  std::size_t depth = 10;
  std::size_t halfwidth = 300;
  std::size_t truncation = 200;
  std::string measure = "uniform";
  std::string mode = "exact";
  std::size_t samples = 4000;
  std::size_t quadrature_samples = 4096;
  std::uint64_t seed = 1;
  std::optional<double> tol;  // per-command default when unset
  std::string out_path;
  std::size_t workers = 1;
  std::string gamma_form = "symmetric";
  std::string cylinder;
  std::string p_grid = "0,0.25,0.5,0.75";
  std::string a_grid = "-0.95:0.95:0.05";
};

/// Parses "x1,x2,..." or "start:stop:step"; the empty string is the empty grid.
std::vector<double> parse_grid(const std::string& text);

/// Entry point shared by the executable and the tests. Reports go to `out`
/// (or --out), diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace treewalk
