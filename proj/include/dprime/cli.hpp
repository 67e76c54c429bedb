#pragma once

#include <iosfwd>

namespace dprime {

/// Entry point of the dprime command line tool. Exit codes: 0 success,
/// 2 configuration or potential spec error, 3 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dprime
