#pragma once

#include <string>
#include <vector>

namespace gar {

/// Run one CLI invocation (argument list without the program name).
/// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
int run_command(const std::vector<std::string>& args);

}  // namespace gar
