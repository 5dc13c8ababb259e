#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sumlab {

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnvVar = "SUMLAB_CONFIG";

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalid = 2,
  kExitWindowOverflow = 3,
  kExitBoundExceeded = 4,
};

/// Tolerances, horizons, budgets and output settings shared by all
/// subcommands. Precedence: built-in defaults, then the config file, then
/// command-line flags.
struct RunConfig {
  /// Recurrence scans have no built-in eps or horizon; they must come from
  /// the config file or flags.
  std::optional<double> eps;
  std::optional<std::int64_t> horizon;
  std::int64_t min_hits = 2;
  double tol = 1e-9;
  std::int64_t candidate_bound = 10'000;
  std::int64_t max_candidates = 1'000'000;
  std::int64_t anchor_bound = 16;
  std::int64_t bound = 32;
  double max_search_space = 1e12;
  std::int64_t max_atoms = 1'000'000;
  std::int64_t time_limit_ms = 0;  // 0: no limit
  std::string format = "auto";
  std::string plot_path;

  /// Applies flat `key = value` lines; `#` starts a comment. Unknown keys and
  /// unparsable values throw ParseError.
  void apply_file_text(const std::string& text);
  void validate() const;
};

/// Runs one command. `args` excludes the program name. `config_env` stands
/// in for the environment variable so callers can test precedence.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            std::optional<std::string> config_env);

/// As above, reading the config path from the environment.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sumlab
