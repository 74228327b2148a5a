#pragma once

#include <iosfwd>

namespace segmeter {

// Exit codes, stable across versions.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_parse = 2,
    exit_numerical = 3,
    exit_partial = 4,
};

// Entry point of the `segmeter` binary. Human output goes to `out`,
// diagnostics to `err`; machine records go to the file named by --out.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace segmeter
