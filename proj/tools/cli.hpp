#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fairvec::cli {

// Runs one command line (without the program name). Machine-readable output
// goes to `out`, diagnostics to `err`. Returns 0 on success, 2 on a usage
// error and 3 on a data error.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace fairvec::cli
