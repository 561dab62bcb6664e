#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace periodlab::cli {

/// Runs one subcommand; `args` excludes the program name. Returns 0 on
/// success, 1 on domain errors and 2 on usage errors. Errors go to `err` as
/// one line "error[<code>]: <message>".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace periodlab::cli
