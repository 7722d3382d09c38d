#pragma once

#include <iosfwd>

namespace twaff {

/// Parses argv, runs exactly one subcommand and writes its report.
/// Exit status: 0 success, 1 a check missed its tolerance (or failed to run), 2 malformed input.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twaff
