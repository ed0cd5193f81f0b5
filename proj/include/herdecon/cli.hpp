#ifndef HERDECON_CLI_HPP
#define HERDECON_CLI_HPP

#include <string>
#include <vector>

namespace herdecon {

// Full command-line surface. Returns the process exit status:
//   0 success, 1 validation error, 2 computation error, 3 I/O error.
// Subcommands: losses, surplus, sweep, margins, incidence, power,
// simulate, report.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, const char* const* argv);

}  // namespace herdecon

#endif
