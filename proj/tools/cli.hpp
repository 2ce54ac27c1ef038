#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace descent_tails::cli {

/// Runs the command line `args` (args[0] is the program name) writing records
/// to `out` and diagnostics to `err`. Returns the process exit code: 0 when
/// every requested row was computed, 1 when some row hit a domain error, and
/// the CLI11 code for usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace descent_tails::cli
