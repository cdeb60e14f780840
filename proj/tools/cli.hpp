#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mixspin::cli {

// args excludes the program name. Returns the process exit code:
// 0 success, 2 usage or validation error, 3 computational failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mixspin::cli
