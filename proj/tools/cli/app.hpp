#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tdac::cli {

/// Full command-line entry point. `args` excludes the program name. Returns
/// the process exit status:
///   0 success, 1 input/data error, 2 usage error, 3 non-converged fit.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tdac::cli
