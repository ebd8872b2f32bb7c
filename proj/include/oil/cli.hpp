// Command-line driver. One subcommand runs one experiment and writes one
// report; exit status is 0 when every checked quantity is within tolerance,
// 1 when a check fails or the report cannot be written, 2 on usage errors.
#pragma once

#include "oil/deformation.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace oil {

struct RunConfig {
  std::string command;

  double p = 2.0;
  double eps = 0.4;
  double eps_min = 0.1;
  double eps_max = 1.0;
  int steps = 16;
  int modes = 0;    // 0: per-command default
  int ambient = 0;  // 0: modes + 2
  int trials = 100;
  std::size_t max_index = 65536;
  std::uint64_t seed = 42;
  LambdaFamily family = LambdaFamily::paper_formula;
  bool with_lemma = false;

  std::string symbol_path;
  std::string symbol_b_path;
  std::optional<int> window_lo;
  std::optional<int> window_hi;
  std::string op = "commutator";

  int dim_in = 4;   // stinespring-check: n
  int dim_out = 4;  // stinespring-check: m
  int kraus = 3;
  int maps = 20;
  int pairs = 0;  // 0: per-command default

  std::string out_path;  // empty: stdout
  std::string format = "json";
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Thrown by parse_command_line for --help; carries the help text.
struct HelpRequested {
  std::string text;
};

/// Parses argv into a RunConfig. The seed defaults to $OIL_SEED, then 42.
/// Throws UsageError on unknown commands or malformed flags.
RunConfig parse_command_line(int argc, const char* const* argv);

/// Runs the configured experiment. Reports go to config.out_path, or to
/// stdout when it is empty; diagnostics go to err.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_command_line + dispatch with exit-status mapping.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

const std::vector<std::string>& known_commands();

}  // namespace oil
