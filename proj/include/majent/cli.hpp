#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace majent {

inline constexpr const char* kVersion = "0.1.0";

namespace cli {

struct RunConfig {
  std::string command;
  std::string what;  // generator kind for `gen`
  std::vector<std::string> inputs;
  std::optional<std::string> output;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::optional<std::size_t> d;
  std::optional<std::size_t> trials;
  bool require = false;
  bool expect_isometry = false;
};

struct RunResult {
  int exit_code = 0;
  std::string report;  // JSON or CSV text, empty on error
  std::string error;   // diagnostic for stderr
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitFormat = 2;

const std::vector<std::string>& subcommands();

/// Runs one subcommand. Never throws: library errors are mapped to exit
/// codes 1 (domain) and 2 (I/O, format, usage).
RunResult dispatch(const RunConfig& config);

/// Parses arguments (without the program name). Throws FormatError on
/// malformed usage.
RunConfig parse_args(std::vector<std::string> args);

/// Parses argv, dispatches and writes the report to --out or stdout.
int run(int argc, char** argv);

}  // namespace cli
}  // namespace majent
