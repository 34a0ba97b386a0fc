#ifndef BELLSCOPE_CLI_HPP
#define BELLSCOPE_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace bellscope::cli
{

inline constexpr const char* tool_version = "0.1.0";

// Fixed exit-code contract.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_falsified = 2;

/// Parses the command line, runs one subcommand and writes a JSON report to
/// `out`. Diagnostics go to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Convenience overload for tests: args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bellscope::cli

#endif
