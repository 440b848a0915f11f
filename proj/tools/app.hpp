#ifndef IFDIV_TOOLS_APP_HPP
#define IFDIV_TOOLS_APP_HPP

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace ifdiv::app {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitValidation = 2,
    kExitNotConverged = 3,
    kExitParse = 4,
};

struct CommandResult {
    int exit_code = kExitOk;
    /// machine-readable result; null when the command failed before producing one
    nlohmann::json document;
};

/// Runs one invocation (arguments without the program name). Diagnostics and
/// help text go to `err`; nothing is printed on success.
CommandResult execute(const std::vector<std::string> &args, std::ostream &err);

/// execute() plus printing the JSON document to `out`.
int run_command(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Rounds to nine significant digits, the precision of every emitted number.
double sig9(double x);

} // namespace ifdiv::app

#endif
