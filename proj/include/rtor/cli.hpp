#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rtor {

/// Runs the command line `rtor <args...>` (program name excluded) and
/// returns the exit status: 0 success, 2 usage or validation, 3 violated
/// assumption, 4 numerical failure or failed check.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rtor
