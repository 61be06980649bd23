#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace palcanon {

/// Entry point of the `palcanon` tool. `args` excludes the program name.
/// Returns 0 on success, 1 on usage or validation errors, 2 on numerical
/// failures.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace palcanon
