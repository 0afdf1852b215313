#pragma once

#include <iosfwd>

namespace vibro::cli {

enum ExitCode : int {
  ok = 0,
  bad_input = 1,         // malformed config, bad arguments, I/O failure
  fully_degenerate = 2,  // classify found no non-degenerate level
  numerical_abort = 3,   // non-finite state, blow-up, too few sweep points
};

/// Entry point of the `vibro` tool; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vibro::cli
