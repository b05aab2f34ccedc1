#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mirrorplace::cli {

/// Runs the command line `args` (without the program name). Data goes to
/// `out`, diagnostics to `err`. Returns 0 on success, 1 on usage or
/// validation errors and 2 on other runtime errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mirrorplace::cli
