#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace idnguard::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_usage = 2, // bad flags, unreadable or invalid config, model mismatch
    exit_data = 3,  // empty or single-class data, too few records
};

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace idnguard::cli
