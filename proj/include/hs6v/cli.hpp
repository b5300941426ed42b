#pragma once

// Batch front-end behind the hs6v executable. The configuration schema is
// documented in docs/config.md.

#include <string>
#include <vector>

#include <json.hpp>

namespace hs6v::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_accuracy = 3;
inline constexpr int exit_resource = 4;

/// Parses argv (program name first), runs one subcommand and returns the exit
/// status. Artifacts go to --out; errors are reported as JSON on stderr and,
/// when the output directory is usable, in error.json.
int run(const std::vector<std::string>& args);

/// Reads a JSON config file; ConfigurationError on I/O or syntax errors.
nlohmann::json load_config(const std::string& path);

std::string version();

}  // namespace hs6v::cli
