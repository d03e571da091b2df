#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fsmkit::cli {

enum ExitCode : int { kSuccess = 0, kCheckFailed = 1, kUsageError = 2 };

/// Runs one `fsmkit` invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fsmkit::cli
