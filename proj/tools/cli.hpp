#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pgirth::cli {

// Runs one command line; returns the process exit code (0 ok, 1 input error,
// 2 internal or verification failure).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pgirth::cli
