#pragma once

// Command-line front end. `run` takes the full argument vector (program name
// first) and returns the process exit code:
//   0 success, 1 runtime failure, 2 validation failure, 3 infeasible construction.

#include <iosfwd>
#include <string>
#include <vector>

namespace curvecode {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace curvecode
