#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pixelgrasp::cli {

/// Runs one command line (without the program name). Exit codes: 0 success,
/// 1 usage error, 2 data or format error, 3 internal invariant violation.
/// Machine output goes to `out`, diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pixelgrasp::cli
