#ifndef MCDE_CLI_HPP
#define MCDE_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace mcde::cli {

/// Runs the command-line frontend on already-split arguments (without
/// the program name). Exit codes: 0 success, 1 verification failure,
/// 2 usage/parse/semantic errors.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace mcde::cli

#endif
