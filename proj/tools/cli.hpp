#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace entropometer::cli {

/// Runs one command line (without the program name). Errors become a single
/// "entropometer: error: ..." line on `err` and a nonzero return.
///
/// Exit codes: 0 success, 1 failed verification or inconsistent graph,
/// 2 usage or model error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entropometer::cli
