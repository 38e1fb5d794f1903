#pragma once

#include <iosfwd>

namespace spa::cli {

/// Exit codes: 0 success, 1 runtime failure or failed check, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spa::cli
