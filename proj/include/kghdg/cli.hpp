#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>

namespace kghdg::cli {

/// Exit codes of the command-line driver.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSolver = 1;
inline constexpr int kExitUsage = 2;

/// Inclusive range "a..b" or a single integer "a".
std::pair<int, int> parse_range(const std::string& text);

/// Flat key = value file; '#' starts a comment. Throws ConfigError on malformed lines.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Parse argv, run the selected subcommand and return the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace kghdg::cli
