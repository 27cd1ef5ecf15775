#pragma once

#include <iosfwd>

namespace csketch::cli {

/// Entry point of the csketch executable. Returns the process exit code:
/// 0 success, 1 usage, 2 data validation or I/O, 3 numerical failure,
/// 4 failed self-check.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace csketch::cli
