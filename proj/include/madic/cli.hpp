#pragma once

// Batch command-line front end: one subcommand per module, key = value
// config files, CSV or JSON output with a provenance header.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "madic/errors.hpp"
#include "madic/fractional.hpp"

namespace madic::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirVariable = "MADIC_OUTPUT_DIR";

enum ExitCode : int { kOk = 0, kUsage = 1, kToleranceFailure = 2, kBadConfig = 3 };

/// Carries the process exit code alongside the message.
class CliError : public Error {
 public:
  CliError(int code, const std::string& what) : Error(what), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

enum class Format { csv, json };

struct RunConfig {
  std::string command;
  int m = 3;
  double alpha = 1.0;
  double beta = 1.0;
  std::vector<double> times{1.0};
  std::uint64_t samples = 10000;
  std::uint64_t seed = 1;
  std::optional<ShellWindow> window;
  double tolerance = 1e-6;
  std::string output;
  std::optional<Format> format;
  int r = 0;
  int l = -2;
  std::optional<int> k;
  int k_lo = -5;
  int k_hi = 5;
  std::string input;
  std::string direction = "forward";
  std::string waiting = "exponential";
  double rate = 1.0;
  double tau = 1.0;
  bool analytic = false;
  InitialCondition initial = InitialCondition::delta;

  /// Keys accepted by this subcommand with their current values, as text.
  std::map<std::string, std::string> effective() const;
  Format output_format() const;
};

/// Parses `subcommand --key value ...`. Keys read from `config_text` (or
/// from the file named by --config) are applied first and flags override
/// them. Throws CliError with kUsage for bad flags and kBadConfig for a bad
/// config file.
RunConfig parse_config(const std::vector<std::string>& args,
                       std::optional<std::string> config_text = std::nullopt);

/// Executes a parsed configuration. Results go to the configured output;
/// diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& err);

/// Entry point used by the executable: parse, run, map errors to exit codes.
int main_entry(int argc, char** argv);

}  // namespace madic::cli
