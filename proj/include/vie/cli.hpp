#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vie {

/// Exit codes: 0 success, 1 usage error, 2 solver error, 3 validation
/// failure, 4 problem-file parse error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vie
