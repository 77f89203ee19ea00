#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mind {

/// Runs one subcommand (gen, summary, dissim, represent, cv, curve, analyze).
/// `args` excludes the program name. Returns 0 on success, 1 when the
/// pipeline fails and 2 on a usage error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_command(int argc, char** argv);

}  // namespace mind
