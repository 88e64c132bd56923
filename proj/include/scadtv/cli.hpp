#pragma once

#include <string>
#include <vector>

namespace scadtv {

/// Runs the command-line interface on the given arguments (without the
/// program name). Returns the process exit code: 0 on success, 2 on usage
/// errors, 1 on runtime failures. Output files of a failed command are
/// removed.
int run_cli(const std::vector<std::string>& args);

/// Parses a lo:hi:n specification into n log-spaced values.
std::vector<double> parse_log_grid(const std::string& spec);

} // namespace scadtv
