#pragma once

// Command-line front end: `verify <suite>` and `report all`.

#include <ostream>

namespace ouha::cli {

enum ExitCode : int {
    kPass = 0,
    kAssertionFailure = 1,
    kNonConvergence = 2,
    kUsage = 64,
    kInternal = 70,
};

// Parses argv, runs the selected suites and writes the report to --out (or
// `out`).  Warnings and usage text go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ouha::cli
