#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tlsprint::cli {

/// Exit statuses shared by every subcommand.
enum ExitCode : int {
  ok = 0,
  usage = 1,
  malformed_input = 2,
  insufficient_data = 3,
  ambiguous = 4,
};

/// Runs `tlsprint <args...>` (program name excluded). Data goes to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tlsprint::cli
