#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cli/commands.hpp"

namespace crowdplay::cli {

/// Entry point behind the `crowdplay` executable. `args` excludes the program
/// name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const ValidationHooks& hooks = {});

}  // namespace crowdplay::cli
