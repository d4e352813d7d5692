#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nng::cli {

enum ExitCode : int
{
    exit_ok = 0,
    exit_internal = 1,
    exit_usage = 2,
    exit_parse = 3,
    exit_verify = 4,
};

/// Entry point of the `nng` tool; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}
