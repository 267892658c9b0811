#ifndef SIHT_TOOLS_CLI_HPP
#define SIHT_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace siht::cli {

enum ExitCode : int { ok = 0, validation_error = 1, io_error = 2 };

// Runs the `siht` command line. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace siht::cli

#endif  // SIHT_TOOLS_CLI_HPP
