#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace regsynth {

/// Runs one CLI invocation (args excludes the program name). Errors go to
/// `err` as {"code", "message", "detail"} JSON. Returns the exit code: 0 on
/// success, 2 for usage, file and schema errors, 3 for domain errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace regsynth
