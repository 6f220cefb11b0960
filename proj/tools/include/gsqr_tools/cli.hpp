#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gsqr::tools {

enum ExitCode : int {
    kExitOk = 0,
    kExitInput = 2,
    kExitTieBreak = 3,
    kExitSingular = 4,
    kExitCertify = 5,
};

/// Runs the gsqr command line; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gsqr::tools
