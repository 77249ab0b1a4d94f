#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fhn {

// Full CLI entry point, testable without a process boundary. `args` excludes
// the program name. Returns the process exit code:
//   0 success, 1 verification failure, 2 configuration error,
//   3 integration failure, 4 I/O error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace fhn
