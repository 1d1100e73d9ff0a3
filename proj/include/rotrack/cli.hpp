#pragma once

#include <string>
#include <vector>

namespace rotrack {

// Command-line entry point behind the binary. `args` excludes the
// program name. Returns the process exit code: 0 on success, 1 on usage
// errors, 2 on data errors.
int cli_run(const std::vector<std::string>& args);

}  // namespace rotrack
