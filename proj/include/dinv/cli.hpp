#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dinv {

/// CLI entry point; `dinv` main forwards here. Returns the process exit
/// code: 0 all checks passed, 1 some check failed, 2 usage or validation
/// error. Reports go to `out`, diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dinv
