#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace grade {

// Flag-level overrides; they beat the config file, which beats defaults.
struct CliOverrides {
  std::optional<double> lambda;
  std::optional<int> depth;
  std::optional<std::string> base;     // mmd | coral | tv
  std::optional<std::string> variant;  // plain | degree | label
  std::optional<std::uint64_t> seed;
  std::optional<int> k;
  std::optional<std::string> out;
};

// Parses the optional JSON config (one section per subcommand, unknown keys
// rejected), applies overrides, resolves every path, echoes the effective
// config into the output directory (for subcommands that have one) and runs.
// Returns the process exit code; invalid input throws.
int run_cli_command(const std::string& subcommand, const std::optional<std::string>& config_path,
                    const CliOverrides& overrides);

}  // namespace grade
