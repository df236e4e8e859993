#pragma once

namespace dipstop::cli {

// Parses argv and dispatches to a subcommand. Exit codes: 0 success,
// 1 runtime failure, 2 usage error, 3 success via the backstop fallback
// (the run ended without a declared stop).
int run(int argc, char** argv);

}  // namespace dipstop::cli
