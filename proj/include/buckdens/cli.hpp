#pragma once

#include <iosfwd>

namespace buckdens::cli {

/// Runs the command line. Exit codes: 0 success or passing check, 1 failed
/// check (the report carries the counterexample), 2 usage, parse or domain error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace buckdens::cli
