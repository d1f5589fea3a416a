#pragma once

#include <iosfwd>

namespace imagearc::cli {

/// Exit codes: 0 success or PASS, 1 FAIL or numerical failure,
/// 2 INAPPLICABLE or violated hypothesis, 3 usage or parse error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace imagearc::cli
