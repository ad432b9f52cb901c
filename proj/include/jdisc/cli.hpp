#pragma once

namespace jdisc::cli {

/// Command line entry point. Subcommands: solve, verify-ops, analyze-structure,
/// takagi, morse, report. Exit codes: 0 success, 1 invalid config or violated
/// precondition, 2 solver non-convergence, 3 I/O failure.
int run(int argc, const char* const* argv);

} // namespace jdisc::cli
