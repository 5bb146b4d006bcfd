#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tma::cli {

/// Entry point behind the `tma` executable. Reports go to `out` unless an
/// output path is given; diagnostics go to `err`. Returns the process exit
/// code: 0 success, 2 validation error, 3 data error, 4 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tma::cli
