#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace conrel::cli {

/// Runs one command line (without the program name). Returns the exit
/// status: 0 on success, 1 for input errors, 2 for numerical failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace conrel::cli
