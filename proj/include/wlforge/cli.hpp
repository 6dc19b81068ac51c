#pragma once

#include <string>
#include <vector>

namespace wlforge {

// Full command-line surface. Returns the process exit status:
// 0 success, 1 usage error, 2 format error, 3 property-suite failure.
int run_command(const std::vector<std::string>& args);

}  // namespace wlforge
