#pragma once

#include <iosfwd>

namespace fraclap::cli {

// Exit codes: 0 success, 1 an identity or constant check failed,
// 2 invalid input or unsupported request, 3 numerical failure.
enum ExitCode { ok = 0, checkFailed = 1, badInput = 2, numerical = 3 };

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fraclap::cli
